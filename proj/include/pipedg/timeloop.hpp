#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <functional>
#include <memory>
#include <vector>

#include "pipedg/assembly.hpp"

namespace pipedg {

struct ButcherTableau {
  int stages = 3;
  Eigen::Matrix3d A;
  Eigen::Vector3d b;
  Eigen::Vector3d c;
};

/// 3-stage Radau IIA coefficients (classical order 5, stiffly accurate).
ButcherTableau radau_tableau();

/// Stability function R(z) = b^T (I - zA)^{-1} 1 z + 1 of the tableau.
double radau_stability(double z);

struct Trajectory {
  std::shared_ptr<const DiscreteSpace> space;  // null for raw ODE systems
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;

  CoefficientVector state(std::size_t i) const {
    return CoefficientVector{space, states[i]};
  }
};

/// Coupled 3-stage solver for M u' + K u = load(t), factorized once per
/// (M, K, tau). The mass may be singular (algebraic rows); the stage system
/// stays regular as long as the algebraic constraints are solvable.
class RadauStepper {
 public:
  using LoadFunction = std::function<Eigen::VectorXd(double)>;

  RadauStepper(const Eigen::SparseMatrix<double>& mass,
               const Eigen::SparseMatrix<double>& op, double tau);

  double tau() const { return tau_; }

  /// Advance from t by tau; stiffly accurate, returns the last stage.
  Eigen::VectorXd step(const Eigen::VectorXd& state, double t,
                       const LoadFunction& load) const;

 private:
  double tau_;
  ButcherTableau tableau_;
  const Eigen::SparseMatrix<double>& mass_;
  Eigen::SparseMatrix<double> stage_matrix_;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> solver_;
};

/// One Radau step of the semidiscrete network system (convenience wrapper).
Eigen::VectorXd step(const DiscreteSystem& system, double eps,
                     const Eigen::VectorXd& state, double t, double tau);

/// Integrate from zero initial data to t_max; records every record_stride-th
/// step plus the initial and final states. A non-dividing tau shortens the
/// final step.
Trajectory integrate(const DiscreteSystem& system, double eps, double tau,
                     double t_max, int record_stride = 1);

} // namespace pipedg
