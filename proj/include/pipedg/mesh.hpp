#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pipedg/network.hpp"

namespace pipedg {

enum class MeshRegion { uniform, layer };

struct EdgeMesh {
  std::vector<double> breakpoints;  // 0 = x_0 < ... < x_M = length
  std::vector<MeshRegion> region;   // one tag per element
  std::optional<double> transition; // layer starts here when present
  std::optional<double> shishkin;   // diagnostic reference point

  std::size_t n_elements() const { return region.size(); }
  double width(std::size_t i) const {
    return breakpoints[i + 1] - breakpoints[i];
  }
  double length() const { return breakpoints.back(); }
};

struct NetworkMesh {
  std::shared_ptr<const NetworkTopology> topology;
  std::vector<EdgeMesh> edges;
  double target_h = 0.0;
  double eps = 0.0;  // grading parameter, 0 for plain uniform meshes
  int order = 0;     // grading order, 0 for plain uniform meshes

  std::size_t n_elements() const;
  std::size_t n_layer_elements() const;
  double max_width() const;
};

/// Equal subdivision of every edge into ceil(length / h) elements.
NetworkMesh build_uniform(std::shared_ptr<const NetworkTopology> topology,
                          double h);

/// Start of the boundary layer region on an edge:
///   max(length - (k+1)/velocity * eps * log(1/eps), length/2),
/// returning length itself (empty layer) when eps >= 1.
double transition_point(double length, double velocity, double eps, int k);

/// Layer-adapted mesh: uniform breakpoints below the transition point, then
/// geometrically graded elements toward the outflow end, the one touching it
/// of width exactly eps * h. eps = 0 falls back to build_uniform.
NetworkMesh build_graded(std::shared_ptr<const NetworkTopology> topology,
                         double eps, double h, int k);

/// Bisect every element; breakpoints are a superset of the input's.
NetworkMesh refine(const NetworkMesh& mesh);

struct MeshStats {
  std::size_t n_elements = 0;
  std::size_t n_uniform = 0;
  std::size_t n_layer = 0;
  double min_width = 0.0;
  double max_width = 0.0;
  double min_layer_width = 0.0;        // 0 when no layer elements exist
  std::size_t n_layer_coarse_side = 0; // layer elements reaching left of x^S
};

MeshStats mesh_stats(const NetworkMesh& mesh, double eps, int k);

/// One row per element: edge_id,index,x_left,width,region.
std::string mesh_csv(const NetworkMesh& mesh);

} // namespace pipedg
