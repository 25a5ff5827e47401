#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pipedg {

class network_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Directed pipe, oriented with the flow (velocity > 0).
struct Edge {
  std::string id;
  int tail = -1;
  int head = -1;
  double length = 0.0;
  double velocity = 0.0;
};

enum class VertexClass { interior, inflow, outflow };

struct NetworkTopology {
  std::vector<std::string> vertex_ids;
  std::vector<Edge> edges;

  // derived on construction
  std::vector<VertexClass> vertex_class;
  std::vector<std::vector<int>> edges_in;   // per vertex: edges with head there
  std::vector<std::vector<int>> edges_out;  // per vertex: edges with tail there

  int vertex_index(const std::string& id) const;
  int edge_index(const std::string& id) const;

  /// Signed incidence n_e(v): +1 at the edge head, -1 at the tail, 0 elsewhere.
  int incidence(int edge, int vertex) const;

  bool is_boundary(int vertex) const {
    return vertex_class[vertex] != VertexClass::interior;
  }
  std::vector<int> interior_vertices() const;
  std::vector<int> boundary_vertices() const;
  double min_edge_length() const;
};

/// Structural validation: unique ids, known endpoints, no self loops,
/// positive lengths, flow-aligned orientation (velocity > 0), connectivity,
/// boundary vertices of degree one. Throws network_error on violation.
NetworkTopology make_topology(std::vector<std::string> vertex_ids,
                              std::vector<Edge> edges);

/// Boundary datum at a vertex: zero, or the ramp c * (t / t_horizon)^p,
/// held at c once t passes the horizon.
struct TimeProfile {
  enum class Kind { zero, ramp };
  Kind kind = Kind::zero;
  double coefficient = 0.0;
  int exponent = 1;
  double horizon = 1.0;

  double value(double t) const;
  /// Largest m with g^(j)(0) = 0 for all j <= m; INT_MAX for the zero profile.
  int vanishing_order() const;
};

struct NetworkProblem {
  std::shared_ptr<const NetworkTopology> topology;
  std::vector<TimeProfile> boundary;  // indexed by vertex, zero at interior
  double t_max = 1.0;

  double boundary_value(int vertex, double t) const {
    return boundary[vertex].value(t);
  }
  /// min over boundary vertices of the profile vanishing order
  int compatibility_order() const;
};

struct FlowResidual {
  int vertex;
  double residual;  // inflow minus outflow of velocity at the vertex
};

/// Residuals of velocity conservation at every interior vertex.
std::vector<FlowResidual> flow_residuals(const NetworkTopology& topology);

/// Throws network_error listing every vertex with |residual| > tol.
void validate_flow_conservation(const NetworkTopology& topology, double tol = 0.0);

/// Parse a network document; validates structure and flow conservation.
NetworkProblem load_network(const std::string& text, double flow_tol = 0.0);
NetworkProblem load_network_file(const std::string& path, double flow_tol = 0.0);

/// Document that load_network accepts and round-trips bit-exactly.
std::string serialize(const NetworkProblem& problem);

/// Embedded fixture documents: "single_pipe" and "gaslib11".
const std::string& fixture_document(const std::string& name);
NetworkProblem load_fixture(const std::string& name);

/// Message when boundary data is too rough for order k, else nullopt.
std::optional<std::string> compatibility_warning(const NetworkProblem& problem,
                                                 int k);

} // namespace pipedg
