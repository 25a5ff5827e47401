#pragma once

#include <Eigen/Sparse>
#include <memory>
#include <string>

#include "pipedg/network.hpp"
#include "pipedg/space.hpp"

namespace pipedg {

/// Semidiscrete operators of the hybrid dG scheme over the combined
/// bulk+hybrid dof vector: M u' + (B + eps D) u = load(eps, t).
/// Boundary vertices carry no hybrid dof; their data enters via the load.
struct DiscreteSystem {
  std::shared_ptr<const DiscreteSpace> space;
  std::shared_ptr<const NetworkProblem> problem;
  double alpha = 1.0;
  Eigen::SparseMatrix<double> mass;
  Eigen::SparseMatrix<double> convection;
  Eigen::SparseMatrix<double> diffusion;

  /// B + eps * D; returns B itself when eps == 0, so the vanishing-diffusion
  /// operator is the transport operator bit for bit.
  Eigen::SparseMatrix<double> spatial_operator(double eps) const;
  Eigen::VectorXd load(double eps, double t) const;
};

DiscreteSystem assemble_system(std::shared_ptr<const DiscreteSpace> space,
                               std::shared_ptr<const NetworkProblem> problem,
                               double alpha = 1.0);

/// Identity on the bulk block (orthonormal basis), zero on hybrid dofs.
Eigen::SparseMatrix<double> assemble_mass(const DiscreteSpace& space);

/// Upwind convection form: -(b u, w')_T + <n b u_up, w - what>_faces with
/// n b u_up = max(nb,0) u + min(nb,0) uhat.
Eigen::SparseMatrix<double> assemble_convection(const DiscreteSpace& space);

/// Diffusion form: (u', w')_T - <n u', w - what> + <n (u - uhat), w'>
/// + <(alpha/h_T)(u - uhat), w - what> over element faces.
Eigen::SparseMatrix<double> assemble_diffusion(const DiscreteSpace& space,
                                               double alpha);

/// Boundary data terms: convective inflow flux, plus the eps-scaled
/// consistency and penalty terms at all boundary vertices.
Eigen::VectorXd assemble_load(const DiscreteSpace& space,
                              const NetworkProblem& problem, double eps,
                              double alpha, double t);

/// Coordinate triplets "row col value" per line, for debugging.
std::string triplet_dump(const Eigen::SparseMatrix<double>& matrix);

} // namespace pipedg
