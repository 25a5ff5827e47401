#pragma once

#include <vector>

#include "pipedg/scheme.hpp"

namespace pipedg {

/// Reference solve on the twice-bisected computational mesh with a quarter
/// of the step size; recorded times include every computational grid time.
SolveResult compute_reference(const SolveConfig& config,
                              std::shared_ptr<const NetworkProblem> problem,
                              const NetworkMesh& computational_mesh,
                              double eps);

/// Max over shared grid times of the L2 norm of (ref - embedding of run);
/// requires the run mesh nested in the reference mesh.
double error_ref(const Trajectory& run, const Trajectory& ref);

/// L2 norm of the difference of two fields over the same topology but
/// independent meshes, by quadrature on the per-edge union mesh.
double l2_difference(const CoefficientVector& a, const CoefficientVector& b);

/// Max of l2_difference over shared grid times.
double max_l2_difference(const Trajectory& a, const Trajectory& b);

/// Slopes log2(e_i / e_{i+1}) for strictly halving widths.
std::vector<double> eoc(const std::vector<double>& errors,
                        const std::vector<double>& hs);

struct GapStudy {
  std::vector<double> eps;
  std::vector<double> gap;     // distance of the eps-solve to the transport solve
  std::vector<double> ratio;   // gap[i] / gap[i+1] for halving eps
};

/// Distance between the diffusive and the vanishing-diffusion solution on a
/// fine setup, per eps; ratios approach sqrt(2) for halving eps.
GapStudy asymptotic_gap(std::shared_ptr<const NetworkProblem> problem,
                        const std::vector<double>& eps_list,
                        const SolveConfig& fine_config);

struct OvershootRecord {
  double u_min = 0.0;
  double u_max = 0.0;
  double data_min = 0.0;
  double data_max = 0.0;
  double overshoot = 0.0;  // beyond the data range, relative to its span
  bool flagged = false;
};

/// Soft range check of the trajectory against the boundary-data range.
OvershootRecord max_principle_monitor(const Trajectory& traj,
                                      const NetworkProblem& problem,
                                      double alert = 0.2);

} // namespace pipedg
