#pragma once

#include <memory>
#include <string>
#include <vector>

#include "pipedg/timeloop.hpp"

namespace pipedg {

enum class MeshStrategy { uniform, graded, adaptive };
enum class Branch { transport_on_uniform, convdiff_on_graded };

std::string to_string(MeshStrategy strategy);
std::string to_string(Branch branch);

struct SolveConfig {
  double eps = 0.0;
  double h = 0.125;
  int k = 2;
  double alpha = 1.0;
  double tau_ratio = 0.5;  // tau = tau_ratio * h
  double t_max = 0.0;      // 0 means the problem's horizon
  MeshStrategy strategy = MeshStrategy::adaptive;
  int record_stride = 1;
  double solver_tol = 1e-9;  // residual guard on the stage solves

  double tau() const { return tau_ratio * h; }
};

/// Branch selector: the spatial error envelope favors the transport scheme
/// once eps drops below h^(2k).
Branch select_adaptive(double eps, double h, int k);

struct SolveResult {
  Branch branch = Branch::convdiff_on_graded;
  double eps_used = 0.0;  // 0 on the transport branch
  std::shared_ptr<const NetworkMesh> mesh;
  std::shared_ptr<const DiscreteSpace> space;
  Trajectory trajectory;
};

/// Convection-diffusion solve; mesh per config strategy (adaptive resolves
/// to graded here).
SolveResult solve_convdiff(const SolveConfig& config,
                           std::shared_ptr<const NetworkProblem> problem);

/// Vanishing-diffusion transport solve on the uniform mesh.
SolveResult solve_transport(const SolveConfig& config,
                            std::shared_ptr<const NetworkProblem> problem);

/// Dispatch per strategy; adaptive applies select_adaptive.
SolveResult solve(const SolveConfig& config,
                  std::shared_ptr<const NetworkProblem> problem);

/// Solve on a caller-provided mesh (reference computations).
SolveResult solve_on_mesh(const SolveConfig& config,
                          std::shared_ptr<const NetworkProblem> problem,
                          std::shared_ptr<const NetworkMesh> mesh, double eps,
                          double tau);

struct LayerProbe {
  int vertex = -1;
  double at_vertex = 0.0;
  double upstream = 0.0;
  double difference = 0.0;  // upstream minus vertex value
  bool flagged = false;
};

/// Compares the final-state value at each outflow vertex against the value
/// a few layer widths upstream (distance 5 * probe_eps * (k+1) / b).
std::vector<LayerProbe> layer_probe(const SolveResult& result,
                                    double probe_eps, double threshold);

} // namespace pipedg
