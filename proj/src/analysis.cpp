#include "pipedg/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pipedg/quadrature.hpp"

namespace pipedg {

SolveResult compute_reference(const SolveConfig& config,
                              std::shared_ptr<const NetworkProblem> problem,
                              const NetworkMesh& computational_mesh,
                              double eps) {
  auto fine = std::make_shared<const NetworkMesh>(
      refine(refine(computational_mesh)));
  SolveConfig ref_config = config;
  ref_config.record_stride = 4 * std::max(config.record_stride, 1);
  return solve_on_mesh(ref_config, std::move(problem), std::move(fine), eps,
                       config.tau() / 4.0);
}

namespace {

/// Indices of matching times (a subset of b), by value.
std::vector<std::pair<std::size_t, std::size_t>> shared_times(
    const std::vector<double>& a, const std::vector<double>& b) {
  double span = std::max(std::abs(a.back()), std::abs(b.back()));
  double tol = 1e-9 * std::max(span, 1.0);
  std::vector<std::pair<std::size_t, std::size_t>> shared;
  std::size_t j = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    while (j < b.size() && b[j] < a[i] - tol) ++j;
    if (j < b.size() && std::abs(b[j] - a[i]) <= tol) shared.emplace_back(i, j);
  }
  return shared;
}

} // namespace

double error_ref(const Trajectory& run, const Trajectory& ref) {
  auto shared = shared_times(run.times, ref.times);
  if (shared.size() != run.times.size())
    throw std::invalid_argument(
        "error_ref: run times are not a subgrid of the reference times");
  double worst = 0.0;
  for (auto [i, j] : shared) {
    CoefficientVector embedded =
        interpolate_to_refined(run.state(i), ref.space);
    embedded.values.head(ref.space->n_bulk()) -=
        ref.states[j].head(ref.space->n_bulk());
    worst = std::max(worst, l2_norm(embedded));
  }
  return worst;
}

double l2_difference(const CoefficientVector& a, const CoefficientVector& b) {
  const DiscreteSpace& sa = *a.space;
  const DiscreteSpace& sb = *b.space;
  if (sa.mesh().topology->edges.size() != sb.mesh().topology->edges.size())
    throw std::invalid_argument("l2_difference: different networks");
  int quad = std::max(sa.order(), sb.order()) + 2;
  const QuadratureRule& rule = gauss_legendre(quad);
  double total = 0.0;
  for (std::size_t e = 0; e < sa.mesh().edges.size(); ++e) {
    const auto& pa = sa.mesh().edges[e].breakpoints;
    const auto& pb = sb.mesh().edges[e].breakpoints;
    std::vector<double> cuts;
    cuts.reserve(pa.size() + pb.size());
    std::merge(pa.begin(), pa.end(), pb.begin(), pb.end(),
               std::back_inserter(cuts));
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [&](double x, double y) {
                             return std::abs(x - y) < 1e-12 * pa.back();
                           }),
               cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      double width = cuts[i + 1] - cuts[i];
      for (std::size_t q = 0; q < rule.size(); ++q) {
        double x = cuts[i] + 0.5 * width * (rule.points[q] + 1.0);
        double d = evaluate(a, static_cast<int>(e), x, Side::left) -
                   evaluate(b, static_cast<int>(e), x, Side::left);
        total += 0.5 * width * rule.weights[q] * d * d;
      }
    }
  }
  return std::sqrt(total);
}

double max_l2_difference(const Trajectory& a, const Trajectory& b) {
  auto shared = shared_times(a.times, b.times);
  if (shared.empty())
    throw std::invalid_argument("max_l2_difference: no shared grid times");
  double worst = 0.0;
  for (auto [i, j] : shared)
    worst = std::max(worst, l2_difference(a.state(i), b.state(j)));
  return worst;
}

std::vector<double> eoc(const std::vector<double>& errors,
                        const std::vector<double>& hs) {
  if (errors.size() != hs.size())
    throw std::invalid_argument("eoc: length mismatch");
  std::vector<double> slopes;
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
    if (std::abs(hs[i + 1] - 0.5 * hs[i]) > 1e-9 * hs[i])
      throw std::invalid_argument("eoc: widths are not strictly halving");
    slopes.push_back(std::log2(errors[i] / errors[i + 1]));
  }
  return slopes;
}

GapStudy asymptotic_gap(std::shared_ptr<const NetworkProblem> problem,
                        const std::vector<double>& eps_list,
                        const SolveConfig& fine_config) {
  GapStudy study;
  study.eps = eps_list;
  SolveConfig transport_config = fine_config;
  transport_config.strategy = MeshStrategy::uniform;
  transport_config.eps = 0.0;
  SolveResult transport = solve_transport(transport_config, problem);
  for (double eps : eps_list) {
    SolveConfig config = fine_config;
    config.eps = eps;
    config.strategy = MeshStrategy::graded;
    SolveResult diffusive = solve_convdiff(config, problem);
    study.gap.push_back(
        max_l2_difference(diffusive.trajectory, transport.trajectory));
  }
  for (std::size_t i = 0; i + 1 < study.gap.size(); ++i)
    study.ratio.push_back(study.gap[i] / study.gap[i + 1]);
  return study;
}

OvershootRecord max_principle_monitor(const Trajectory& traj,
                                      const NetworkProblem& problem,
                                      double alert) {
  OvershootRecord record;
  const NetworkTopology& topo = *problem.topology;
  double t_max = traj.times.back();
  record.data_min = 0.0;  // zero initial data is part of the range
  record.data_max = 0.0;
  for (int v : topo.boundary_vertices())
    for (int i = 0; i <= 200; ++i) {
      double g = problem.boundary_value(v, t_max * i / 200.0);
      record.data_min = std::min(record.data_min, g);
      record.data_max = std::max(record.data_max, g);
    }

  const DiscreteSpace& space = *traj.space;
  record.u_min = 0.0;
  record.u_max = 0.0;
  const QuadratureRule& rule = gauss_legendre(space.order() + 2);
  std::vector<double> phi;
  for (std::size_t s = 0; s < traj.states.size(); ++s) {
    CoefficientVector u = traj.state(s);
    for (int e = 0; e < static_cast<int>(topo.edges.size()); ++e) {
      const EdgeMesh& em = space.mesh().edges[e];
      for (int t = 0; t < space.element_count(e); ++t) {
        double a = em.breakpoints[t];
        double width = em.width(t);
        for (std::size_t q = 0; q < rule.size(); ++q) {
          double value = evaluate(
              u, e, a + 0.5 * width * (rule.points[q] + 1.0), Side::left);
          record.u_min = std::min(record.u_min, value);
          record.u_max = std::max(record.u_max, value);
        }
        record.u_min = std::min(record.u_min, evaluate(u, e, a, Side::right));
        record.u_max = std::max(record.u_max, evaluate(u, e, a, Side::right));
      }
      double end = em.breakpoints.back();
      record.u_min = std::min(record.u_min, evaluate(u, e, end, Side::left));
      record.u_max = std::max(record.u_max, evaluate(u, e, end, Side::left));
    }
  }
  double span = std::max(record.data_max - record.data_min, 1e-300);
  double above = std::max(0.0, record.u_max - record.data_max);
  double below = std::max(0.0, record.data_min - record.u_min);
  record.overshoot = std::max(above, below) / span;
  record.flagged = record.overshoot > alert;
  return record;
}

} // namespace pipedg
