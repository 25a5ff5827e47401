#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>

#include "pipedg/legendre.hpp"
#include "pipedg/mesh.hpp"

namespace pipedg {

/// One-sided limit selector: Side::left is the limit from below (the upwind
/// trace w^- for flow-aligned edges), Side::right the limit from above.
enum class Side { left, right };

/// Piecewise polynomial space of order k per element plus one hybrid value
/// per interior mesh point and interior vertex. Boundary vertices carry no
/// hybrid dof. Bulk dofs come first (elements in edge order), hybrid after.
class DiscreteSpace {
 public:
  DiscreteSpace(std::shared_ptr<const NetworkMesh> mesh, int order);

  const NetworkMesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const NetworkMesh>& mesh_ptr() const { return mesh_; }
  const NetworkTopology& topology() const { return *mesh_->topology; }
  int order() const { return order_; }

  int n_elements() const { return n_elements_; }
  int n_bulk() const { return n_elements_ * (order_ + 1); }
  int n_hybrid() const { return n_hybrid_; }
  int dimension() const { return n_bulk() + n_hybrid_; }

  /// First of the k+1 bulk dofs of an element.
  int bulk_start(int edge, int element) const {
    return (edge_element_offset_[edge] + element) * (order_ + 1);
  }
  int element_count(int edge) const {
    return static_cast<int>(mesh_->edges[edge].n_elements());
  }

  /// Hybrid dof of interior breakpoint i (0 < i < M) of an edge.
  int hybrid_point(int edge, int breakpoint) const;
  /// Hybrid dof of an interior vertex; -1 for boundary vertices.
  int hybrid_vertex(int vertex) const { return vertex_dof_[vertex]; }
  /// Hybrid dof at an element endpoint; -1 at boundary vertices.
  int hybrid_at(int edge, int element, Side side) const;
  /// Vertex at an element endpoint; -1 if the endpoint is interior to the edge.
  int vertex_at(int edge, int element, Side side) const;

  ElementBasis basis(int edge, int element) const;
  /// Quadrature size for integrals on this element (more points in layers).
  int quadrature_size(int edge, int element) const;

 private:
  std::shared_ptr<const NetworkMesh> mesh_;
  int order_;
  int n_elements_ = 0;
  int n_hybrid_ = 0;
  std::vector<int> edge_element_offset_;
  std::vector<int> edge_point_offset_;  // hybrid dof base per edge
  std::vector<int> vertex_dof_;
};

struct CoefficientVector {
  std::shared_ptr<const DiscreteSpace> space;
  Eigen::VectorXd values;
};

CoefficientVector zero_vector(std::shared_ptr<const DiscreteSpace> space);

double evaluate(const CoefficientVector& u, int edge, double x, Side side);

/// Edge-wise function with one-sided limits at breakpoints.
using EdgeFunction = std::function<double(int edge, double x, Side side)>;

/// Element-wise projection: moments against P_{k-1} are preserved and the
/// value at the element's downwind (right) endpoint matches the left limit
/// of w. Hybrid dofs are set to the point values of w.
CoefficientVector project(const EdgeFunction& w,
                          std::shared_ptr<const DiscreteSpace> space);

/// Exact re-expansion onto a nested refinement (same topology and order).
CoefficientVector interpolate_to_refined(
    const CoefficientVector& u, std::shared_ptr<const DiscreteSpace> fine);

/// L2 norm over all edges of the bulk (piecewise polynomial) part.
double l2_norm(const CoefficientVector& u);

/// L2 norm of (bulk of u) minus w, by quadrature with extra points.
double l2_error(const CoefficientVector& u, const EdgeFunction& w);

} // namespace pipedg
