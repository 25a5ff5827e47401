#include "pipedg/assembly.hpp"

#include <cstdio>
#include <sstream>
#include <vector>

#include "pipedg/quadrature.hpp"

namespace pipedg {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

struct FaceTraces {
  std::vector<double> value;
  std::vector<double> deriv;
  int hybrid;  // dof index, -1 at boundary vertices (value treated as 0)
};

FaceTraces face_traces(const DiscreteSpace& space, int edge, int element,
                       Side side) {
  FaceTraces f;
  const EdgeMesh& em = space.mesh().edges[edge];
  double x = side == Side::left ? em.breakpoints[element]
                                : em.breakpoints[element + 1];
  space.basis(edge, element).values_derivatives(x, f.value, f.deriv);
  f.hybrid = space.hybrid_at(edge, element, side);
  return f;
}

} // namespace

Eigen::SparseMatrix<double> assemble_mass(const DiscreteSpace& space) {
  Triplets triplets;
  for (int i = 0; i < space.n_bulk(); ++i) triplets.emplace_back(i, i, 1.0);
  Eigen::SparseMatrix<double> m(space.dimension(), space.dimension());
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

Eigen::SparseMatrix<double> assemble_convection(const DiscreteSpace& space) {
  const NetworkTopology& topo = space.topology();
  const int k = space.order();
  Triplets triplets;
  std::vector<double> phi, dphi;
  for (int e = 0; e < static_cast<int>(topo.edges.size()); ++e) {
    const double b = topo.edges[e].velocity;
    const EdgeMesh& em = space.mesh().edges[e];
    for (int t = 0; t < space.element_count(e); ++t) {
      const int base = space.bulk_start(e, t);
      ElementBasis basis = space.basis(e, t);
      const QuadratureRule& rule = gauss_legendre(space.quadrature_size(e, t));
      const double a = em.breakpoints[t];
      const double width = em.width(t);
      // -(b u, w')
      for (std::size_t q = 0; q < rule.size(); ++q) {
        double x = a + 0.5 * width * (rule.points[q] + 1.0);
        basis.values_derivatives(x, phi, dphi);
        double scale = -b * 0.5 * width * rule.weights[q];
        for (int i = 0; i <= k; ++i)
          for (int j = 0; j <= k; ++j)
            triplets.emplace_back(base + i, base + j,
                                  scale * phi[j] * dphi[i]);
      }
      // right face: n b > 0, upwind trace is the bulk value
      FaceTraces right = face_traces(space, e, t, Side::right);
      for (int i = 0; i <= k; ++i)
        for (int j = 0; j <= k; ++j)
          triplets.emplace_back(base + i, base + j,
                                b * right.value[j] * right.value[i]);
      if (right.hybrid >= 0)
        for (int j = 0; j <= k; ++j)
          triplets.emplace_back(right.hybrid, base + j, -b * right.value[j]);
      // left face: n b < 0, upwind trace is the hybrid value
      FaceTraces left = face_traces(space, e, t, Side::left);
      if (left.hybrid >= 0) {
        for (int i = 0; i <= k; ++i)
          triplets.emplace_back(base + i, left.hybrid, -b * left.value[i]);
        triplets.emplace_back(left.hybrid, left.hybrid, b);
      }
    }
  }
  Eigen::SparseMatrix<double> m(space.dimension(), space.dimension());
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

Eigen::SparseMatrix<double> assemble_diffusion(const DiscreteSpace& space,
                                               double alpha) {
  const NetworkTopology& topo = space.topology();
  const int k = space.order();
  Triplets triplets;
  std::vector<double> phi, dphi;
  for (int e = 0; e < static_cast<int>(topo.edges.size()); ++e) {
    const EdgeMesh& em = space.mesh().edges[e];
    for (int t = 0; t < space.element_count(e); ++t) {
      const int base = space.bulk_start(e, t);
      ElementBasis basis = space.basis(e, t);
      const QuadratureRule& rule = gauss_legendre(space.quadrature_size(e, t));
      const double a = em.breakpoints[t];
      const double width = em.width(t);
      const double penalty = alpha / width;
      // (u', w')
      for (std::size_t q = 0; q < rule.size(); ++q) {
        double x = a + 0.5 * width * (rule.points[q] + 1.0);
        basis.values_derivatives(x, phi, dphi);
        double scale = 0.5 * width * rule.weights[q];
        for (int i = 0; i <= k; ++i)
          for (int j = 0; j <= k; ++j)
            triplets.emplace_back(base + i, base + j,
                                  scale * dphi[j] * dphi[i]);
      }
      for (Side side : {Side::left, Side::right}) {
        const double n = side == Side::left ? -1.0 : 1.0;
        FaceTraces f = face_traces(space, e, t, side);
        for (int i = 0; i <= k; ++i) {
          for (int j = 0; j <= k; ++j) {
            // -<n u', w> + <n u, w'> + (alpha/h) <u, w>
            triplets.emplace_back(base + i, base + j,
                                  -n * f.deriv[j] * f.value[i] +
                                      n * f.value[j] * f.deriv[i] +
                                      penalty * f.value[j] * f.value[i]);
          }
          if (f.hybrid >= 0) {
            // trial hybrid: -<n uhat, w'> - (alpha/h) <uhat, w>
            triplets.emplace_back(base + i, f.hybrid,
                                  -n * f.deriv[i] - penalty * f.value[i]);
            // test hybrid: +<n u', what> - (alpha/h) <u, what>
            triplets.emplace_back(f.hybrid, base + i,
                                  n * f.deriv[i] - penalty * f.value[i]);
          }
        }
        if (f.hybrid >= 0)
          triplets.emplace_back(f.hybrid, f.hybrid, penalty);
      }
    }
  }
  Eigen::SparseMatrix<double> m(space.dimension(), space.dimension());
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

Eigen::VectorXd assemble_load(const DiscreteSpace& space,
                              const NetworkProblem& problem, double eps,
                              double alpha, double t) {
  const NetworkTopology& topo = space.topology();
  const int k = space.order();
  Eigen::VectorXd load = Eigen::VectorXd::Zero(space.dimension());
  std::vector<double> phi, dphi;
  for (int v : topo.boundary_vertices()) {
    const double g = problem.boundary_value(v, t);
    if (g == 0.0) continue;
    const int e = topo.edges_in[v].empty() ? topo.edges_out[v][0]
                                           : topo.edges_in[v][0];
    const Edge& edge = topo.edges[e];
    const bool at_head = edge.head == v;
    const double n = at_head ? 1.0 : -1.0;
    const int element = at_head ? space.element_count(e) - 1 : 0;
    const EdgeMesh& em = space.mesh().edges[e];
    const double x = at_head ? em.breakpoints.back() : 0.0;
    space.basis(e, element).values_derivatives(x, phi, dphi);
    const int base = space.bulk_start(e, element);
    if (!at_head) {
      // inflow convective flux -<n b g, w> with n = -1
      for (int i = 0; i <= k; ++i) load[base + i] += edge.velocity * g * phi[i];
    }
    if (eps != 0.0) {
      const double penalty = alpha * eps / em.width(element);
      for (int i = 0; i <= k; ++i)
        load[base + i] += n * eps * g * dphi[i] + penalty * g * phi[i];
    }
  }
  return load;
}

Eigen::SparseMatrix<double> DiscreteSystem::spatial_operator(double eps) const {
  if (eps == 0.0) return convection;
  Eigen::SparseMatrix<double> op = convection;
  op += eps * diffusion;
  return op;
}

Eigen::VectorXd DiscreteSystem::load(double eps, double t) const {
  return assemble_load(*space, *problem, eps, alpha, t);
}

DiscreteSystem assemble_system(std::shared_ptr<const DiscreteSpace> space,
                               std::shared_ptr<const NetworkProblem> problem,
                               double alpha) {
  DiscreteSystem system;
  system.alpha = alpha;
  system.mass = assemble_mass(*space);
  system.convection = assemble_convection(*space);
  system.diffusion = assemble_diffusion(*space, alpha);
  system.space = std::move(space);
  system.problem = std::move(problem);
  return system;
}

std::string triplet_dump(const Eigen::SparseMatrix<double>& matrix) {
  std::ostringstream out;
  char buf[64];
  for (int c = 0; c < matrix.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(matrix, c); it; ++it) {
      std::snprintf(buf, sizeof(buf), "%.17g", it.value());
      out << it.row() << ' ' << it.col() << ' ' << buf << '\n';
    }
  return out.str();
}

} // namespace pipedg
