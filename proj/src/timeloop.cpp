#include "pipedg/timeloop.hpp"

#include <cmath>
#include <stdexcept>

namespace pipedg {

ButcherTableau radau_tableau() {
  const double r = std::sqrt(6.0);
  ButcherTableau t;
  t.c << (4.0 - r) / 10.0, (4.0 + r) / 10.0, 1.0;
  t.A << (88.0 - 7.0 * r) / 360.0, (296.0 - 169.0 * r) / 1800.0,
      (-2.0 + 3.0 * r) / 225.0,
      (296.0 + 169.0 * r) / 1800.0, (88.0 + 7.0 * r) / 360.0,
      (-2.0 - 3.0 * r) / 225.0,
      (16.0 - r) / 36.0, (16.0 + r) / 36.0, 1.0 / 9.0;
  t.b = t.A.row(2);
  return t;
}

double radau_stability(double z) {
  ButcherTableau t = radau_tableau();
  Eigen::Matrix3d m = Eigen::Matrix3d::Identity() - z * t.A;
  Eigen::Vector3d w = m.partialPivLu().solve(Eigen::Vector3d::Ones());
  return 1.0 + z * t.b.dot(w);
}

RadauStepper::RadauStepper(const Eigen::SparseMatrix<double>& mass,
                           const Eigen::SparseMatrix<double>& op, double tau)
    : tau_(tau), tableau_(radau_tableau()), mass_(mass) {
  if (!(tau > 0.0)) throw std::invalid_argument("step size must be positive");
  const int n = static_cast<int>(op.rows());
  const int s = tableau_.stages;
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(s * s * op.nonZeros() + s * mass.nonZeros());
  for (int c = 0; c < op.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(op, c); it; ++it)
      for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j)
          triplets.emplace_back(i * n + static_cast<int>(it.row()),
                                j * n + static_cast<int>(it.col()),
                                tau * tableau_.A(i, j) * it.value());
  for (int c = 0; c < mass.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(mass, c); it; ++it)
      for (int i = 0; i < s; ++i)
        triplets.emplace_back(i * n + static_cast<int>(it.row()),
                              i * n + static_cast<int>(it.col()), it.value());
  stage_matrix_.resize(s * n, s * n);
  stage_matrix_.setFromTriplets(triplets.begin(), triplets.end());
  stage_matrix_.makeCompressed();
  solver_.compute(stage_matrix_);
  if (solver_.info() != Eigen::Success)
    throw std::runtime_error(
        "stage system factorization failed (singular hybrid block?): " +
        solver_.lastErrorMessage());
}

Eigen::VectorXd RadauStepper::step(const Eigen::VectorXd& state, double t,
                                   const LoadFunction& load) const {
  const int n = static_cast<int>(state.size());
  const int s = tableau_.stages;
  Eigen::VectorXd mu = mass_ * state;
  Eigen::VectorXd rhs(s * n);
  std::vector<Eigen::VectorXd> loads(s);
  for (int j = 0; j < s; ++j) loads[j] = load(t + tableau_.c(j) * tau_);
  for (int i = 0; i < s; ++i) {
    rhs.segment(i * n, n) = mu;
    for (int j = 0; j < s; ++j)
      rhs.segment(i * n, n) += tau_ * tableau_.A(i, j) * loads[j];
  }
  Eigen::VectorXd stages = solver_.solve(rhs);
  if (solver_.info() != Eigen::Success)
    throw std::runtime_error("stage solve failed");
  return stages.segment((s - 1) * n, n);
}

Eigen::VectorXd step(const DiscreteSystem& system, double eps,
                     const Eigen::VectorXd& state, double t, double tau) {
  Eigen::SparseMatrix<double> op = system.spatial_operator(eps);
  RadauStepper stepper(system.mass, op, tau);
  return stepper.step(state, t,
                      [&](double s) { return system.load(eps, s); });
}

Trajectory integrate(const DiscreteSystem& system, double eps, double tau,
                     double t_max, int record_stride) {
  if (!(tau > 0.0) || !(t_max > 0.0))
    throw std::invalid_argument("integrate: tau and t_max must be positive");
  if (record_stride < 1) record_stride = 1;

  Eigen::SparseMatrix<double> op = system.spatial_operator(eps);
  auto load = [&](double t) { return system.load(eps, t); };

  double steps_exact = t_max / tau;
  auto n_full = static_cast<long>(std::floor(steps_exact + 1e-9));
  double remainder = t_max - n_full * tau;
  if (remainder < 1e-9 * t_max) remainder = 0.0;

  Trajectory traj;
  traj.space = system.space;
  Eigen::VectorXd state = Eigen::VectorXd::Zero(system.space->dimension());
  traj.times.push_back(0.0);
  traj.states.push_back(state);

  RadauStepper stepper(system.mass, op, tau);
  for (long n = 0; n < n_full; ++n) {
    double t = n * tau;
    state = stepper.step(state, t, load);
    bool last = n + 1 == n_full && remainder == 0.0;
    if ((n + 1) % record_stride == 0 || last) {
      traj.times.push_back(n + 1 == n_full && remainder == 0.0
                               ? t_max
                               : (n + 1) * tau);
      traj.states.push_back(state);
    }
  }
  if (remainder > 0.0) {
    RadauStepper last(system.mass, op, remainder);
    state = last.step(state, n_full * tau, load);
    traj.times.push_back(t_max);
    traj.states.push_back(state);
  }
  return traj;
}

} // namespace pipedg
