#include "pipedg/scheme.hpp"

#include <cmath>
#include <stdexcept>

namespace pipedg {

std::string to_string(MeshStrategy strategy) {
  switch (strategy) {
    case MeshStrategy::uniform: return "uniform";
    case MeshStrategy::graded: return "graded";
    case MeshStrategy::adaptive: return "adaptive";
  }
  return "?";
}

std::string to_string(Branch branch) {
  return branch == Branch::transport_on_uniform ? "transport" : "convdiff";
}

Branch select_adaptive(double eps, double h, int k) {
  if (eps < 0.0) throw std::invalid_argument("select_adaptive: eps < 0");
  return eps < std::pow(h, 2 * k) ? Branch::transport_on_uniform
                                  : Branch::convdiff_on_graded;
}

SolveResult solve_on_mesh(const SolveConfig& config,
                          std::shared_ptr<const NetworkProblem> problem,
                          std::shared_ptr<const NetworkMesh> mesh, double eps,
                          double tau) {
  SolveResult result;
  result.branch = eps == 0.0 ? Branch::transport_on_uniform
                             : Branch::convdiff_on_graded;
  result.eps_used = eps;
  result.mesh = std::move(mesh);
  auto space = std::make_shared<const DiscreteSpace>(result.mesh, config.k);
  result.space = space;
  DiscreteSystem system = assemble_system(space, problem, config.alpha);
  double t_max = config.t_max > 0.0 ? config.t_max : problem->t_max;
  result.trajectory =
      integrate(system, eps, tau, t_max, config.record_stride);
  return result;
}

SolveResult solve_convdiff(const SolveConfig& config,
                           std::shared_ptr<const NetworkProblem> problem) {
  if (!(config.eps > 0.0))
    throw std::invalid_argument("solve_convdiff requires eps > 0");
  std::shared_ptr<const NetworkMesh> mesh;
  if (config.strategy == MeshStrategy::uniform)
    mesh = std::make_shared<const NetworkMesh>(
        build_uniform(problem->topology, config.h));
  else
    mesh = std::make_shared<const NetworkMesh>(
        build_graded(problem->topology, config.eps, config.h, config.k));
  return solve_on_mesh(config, std::move(problem), std::move(mesh), config.eps,
                       config.tau());
}

SolveResult solve_transport(const SolveConfig& config,
                            std::shared_ptr<const NetworkProblem> problem) {
  auto mesh = std::make_shared<const NetworkMesh>(
      build_uniform(problem->topology, config.h));
  return solve_on_mesh(config, std::move(problem), std::move(mesh), 0.0,
                       config.tau());
}

SolveResult solve(const SolveConfig& config,
                  std::shared_ptr<const NetworkProblem> problem) {
  if (config.eps == 0.0) return solve_transport(config, std::move(problem));
  if (config.strategy == MeshStrategy::adaptive &&
      select_adaptive(config.eps, config.h, config.k) ==
          Branch::transport_on_uniform)
    return solve_transport(config, std::move(problem));
  return solve_convdiff(config, std::move(problem));
}

std::vector<LayerProbe> layer_probe(const SolveResult& result,
                                    double probe_eps, double threshold) {
  const NetworkTopology& topo = *result.mesh->topology;
  const int k = result.space->order();
  CoefficientVector final_state{
      result.space, result.trajectory.states.back()};
  std::vector<LayerProbe> probes;
  for (int v : topo.boundary_vertices()) {
    if (topo.vertex_class[v] != VertexClass::outflow) continue;
    int e = topo.edges_in[v][0];
    const Edge& edge = topo.edges[e];
    double distance = 5.0 * probe_eps * (k + 1) / edge.velocity;
    distance = std::min(distance, 0.5 * edge.length);
    LayerProbe probe;
    probe.vertex = v;
    probe.at_vertex = evaluate(final_state, e, edge.length, Side::left);
    probe.upstream =
        evaluate(final_state, e, edge.length - distance, Side::left);
    probe.difference = probe.upstream - probe.at_vertex;
    probe.flagged = std::abs(probe.difference) > threshold;
    probes.push_back(probe);
  }
  return probes;
}

} // namespace pipedg
