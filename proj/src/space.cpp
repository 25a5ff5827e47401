#include "pipedg/space.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pipedg/quadrature.hpp"

namespace pipedg {

DiscreteSpace::DiscreteSpace(std::shared_ptr<const NetworkMesh> mesh,
                             int order)
    : mesh_(std::move(mesh)), order_(order) {
  if (order_ < 1) throw std::invalid_argument("space order must be at least 1");
  const NetworkTopology& topo = *mesh_->topology;
  const int n_edges = static_cast<int>(topo.edges.size());

  edge_element_offset_.resize(n_edges);
  for (int e = 0; e < n_edges; ++e) {
    edge_element_offset_[e] = n_elements_;
    n_elements_ += static_cast<int>(mesh_->edges[e].n_elements());
  }

  edge_point_offset_.resize(n_edges);
  int hybrid = n_bulk();
  for (int e = 0; e < n_edges; ++e) {
    edge_point_offset_[e] = hybrid;
    hybrid += static_cast<int>(mesh_->edges[e].n_elements()) - 1;
  }
  vertex_dof_.assign(topo.vertex_ids.size(), -1);
  for (int v : topo.interior_vertices()) vertex_dof_[v] = hybrid++;
  n_hybrid_ = hybrid - n_bulk();
}

int DiscreteSpace::hybrid_point(int edge, int breakpoint) const {
  return edge_point_offset_[edge] + breakpoint - 1;
}

int DiscreteSpace::vertex_at(int edge, int element, Side side) const {
  const Edge& e = topology().edges[edge];
  if (side == Side::left)
    return element == 0 ? e.tail : -1;
  return element + 1 == element_count(edge) ? e.head : -1;
}

int DiscreteSpace::hybrid_at(int edge, int element, Side side) const {
  int v = vertex_at(edge, element, side);
  if (v >= 0) return vertex_dof_[v];
  return hybrid_point(edge, side == Side::left ? element : element + 1);
}

ElementBasis DiscreteSpace::basis(int edge, int element) const {
  const EdgeMesh& em = mesh_->edges[edge];
  return ElementBasis(order_, em.breakpoints[element], em.width(element));
}

int DiscreteSpace::quadrature_size(int edge, int element) const {
  return mesh_->edges[edge].region[element] == MeshRegion::layer ? order_ + 4
                                                                 : order_ + 2;
}

CoefficientVector zero_vector(std::shared_ptr<const DiscreteSpace> space) {
  CoefficientVector u;
  u.values = Eigen::VectorXd::Zero(space->dimension());
  u.space = std::move(space);
  return u;
}

namespace {

int locate_element(const EdgeMesh& em, double x, Side side) {
  const auto& bp = em.breakpoints;
  double slack = 1e-12 * em.length();
  if (x < bp.front() - slack || x > bp.back() + slack)
    throw std::out_of_range("evaluate: position outside the edge");
  x = std::clamp(x, bp.front(), bp.back());
  int m = static_cast<int>(em.n_elements());
  int i;
  if (side == Side::left) {
    // element whose half-open interval (x_i, x_{i+1}] contains x
    i = static_cast<int>(std::lower_bound(bp.begin(), bp.end(), x) -
                         bp.begin()) - 1;
  } else {
    // element whose [x_i, x_{i+1}) contains x
    i = static_cast<int>(std::upper_bound(bp.begin(), bp.end(), x) -
                         bp.begin()) - 1;
  }
  return std::clamp(i, 0, m - 1);
}

} // namespace

double evaluate(const CoefficientVector& u, int edge, double x, Side side) {
  const DiscreteSpace& space = *u.space;
  const EdgeMesh& em = space.mesh().edges[edge];
  int element = locate_element(em, x, side);
  std::vector<double> phi;
  space.basis(edge, element).values(x, phi);
  double value = 0.0;
  int base = space.bulk_start(edge, element);
  for (int j = 0; j <= space.order(); ++j) value += u.values[base + j] * phi[j];
  return value;
}

CoefficientVector project(const EdgeFunction& w,
                          std::shared_ptr<const DiscreteSpace> space_ptr) {
  const DiscreteSpace& space = *space_ptr;
  const NetworkTopology& topo = space.topology();
  CoefficientVector u = zero_vector(space_ptr);
  const int k = space.order();
  std::vector<double> phi;
  for (int e = 0; e < static_cast<int>(topo.edges.size()); ++e) {
    const EdgeMesh& em = space.mesh().edges[e];
    for (int t = 0; t < space.element_count(e); ++t) {
      ElementBasis basis = space.basis(e, t);
      const QuadratureRule& rule = gauss_legendre(space.quadrature_size(e, t));
      double a = em.breakpoints[t];
      double width = em.width(t);
      int base = space.bulk_start(e, t);
      for (std::size_t q = 0; q < rule.size(); ++q) {
        double x = a + 0.5 * width * (rule.points[q] + 1.0);
        double wx = w(e, x, Side::left) * 0.5 * width * rule.weights[q];
        basis.values(x, phi);
        for (int j = 0; j < k; ++j) u.values[base + j] += wx * phi[j];
      }
      // downwind endpoint match fixes the top coefficient
      double right = em.breakpoints[t + 1];
      basis.values(right, phi);
      double value = w(e, right, Side::left);
      for (int j = 0; j < k; ++j) value -= u.values[base + j] * phi[j];
      u.values[base + k] = value / phi[k];
    }
    for (int i = 1; i < space.element_count(e); ++i)
      u.values[space.hybrid_point(e, i)] = w(e, em.breakpoints[i], Side::left);
  }
  for (int v : topo.interior_vertices()) {
    int e = topo.edges_in[v].empty() ? topo.edges_out[v][0]
                                     : topo.edges_in[v][0];
    const Edge& edge = topo.edges[e];
    double x = edge.head == v ? edge.length : 0.0;
    Side side = edge.head == v ? Side::left : Side::right;
    u.values[space.hybrid_vertex(v)] = w(e, x, side);
  }
  return u;
}

CoefficientVector interpolate_to_refined(
    const CoefficientVector& u, std::shared_ptr<const DiscreteSpace> fine_ptr) {
  const DiscreteSpace& coarse = *u.space;
  const DiscreteSpace& fine = *fine_ptr;
  if (fine.order() != coarse.order())
    throw std::invalid_argument("interpolate_to_refined: order mismatch");
  if (fine.mesh().topology.get() != coarse.mesh().topology.get())
    throw std::invalid_argument("interpolate_to_refined: topology mismatch");

  const int k = coarse.order();
  const NetworkTopology& topo = coarse.topology();
  CoefficientVector out = zero_vector(fine_ptr);
  std::vector<double> phi;
  for (int e = 0; e < static_cast<int>(topo.edges.size()); ++e) {
    const EdgeMesh& cm = coarse.mesh().edges[e];
    const EdgeMesh& fm = fine.mesh().edges[e];
    double slack = 1e-12 * cm.length();
    for (double x : cm.breakpoints) {
      auto it = std::lower_bound(fm.breakpoints.begin(), fm.breakpoints.end(),
                                 x - slack);
      if (it == fm.breakpoints.end() || std::abs(*it - x) > slack)
        throw std::invalid_argument(
            "interpolate_to_refined: meshes are not nested");
    }
    for (int t = 0; t < fine.element_count(e); ++t) {
      double a = fm.breakpoints[t];
      double width = fm.width(t);
      double mid = a + 0.5 * width;
      int ct = locate_element(cm, mid, Side::left);
      ElementBasis cb = coarse.basis(e, ct);
      ElementBasis fb = fine.basis(e, t);
      const QuadratureRule& rule = gauss_legendre(k + 2);
      int cbase = coarse.bulk_start(e, ct);
      int fbase = fine.bulk_start(e, t);
      std::vector<double> cphi;
      for (std::size_t q = 0; q < rule.size(); ++q) {
        double x = a + 0.5 * width * (rule.points[q] + 1.0);
        cb.values(x, cphi);
        double ux = 0.0;
        for (int j = 0; j <= k; ++j) ux += u.values[cbase + j] * cphi[j];
        ux *= 0.5 * width * rule.weights[q];
        fb.values(x, phi);
        for (int j = 0; j <= k; ++j) out.values[fbase + j] += ux * phi[j];
      }
    }
    for (int i = 1; i < fine.element_count(e); ++i) {
      double x = fm.breakpoints[i];
      auto it = std::lower_bound(cm.breakpoints.begin(), cm.breakpoints.end(),
                                 x - slack);
      bool coarse_point = it != cm.breakpoints.end() &&
                          std::abs(*it - x) <= slack &&
                          it != cm.breakpoints.begin() &&
                          it + 1 != cm.breakpoints.end();
      if (coarse_point) {
        int ci = static_cast<int>(it - cm.breakpoints.begin());
        out.values[fine.hybrid_point(e, i)] =
            u.values[coarse.hybrid_point(e, ci)];
      } else {
        out.values[fine.hybrid_point(e, i)] = evaluate(u, e, x, Side::left);
      }
    }
  }
  for (int v : topo.interior_vertices())
    out.values[fine.hybrid_vertex(v)] = u.values[coarse.hybrid_vertex(v)];
  return out;
}

double l2_norm(const CoefficientVector& u) {
  // per-element orthonormal basis: the bulk L2 norm is the coefficient norm
  return u.values.head(u.space->n_bulk()).norm();
}

double l2_error(const CoefficientVector& u, const EdgeFunction& w) {
  const DiscreteSpace& space = *u.space;
  const NetworkTopology& topo = space.topology();
  std::vector<double> phi;
  double total = 0.0;
  for (int e = 0; e < static_cast<int>(topo.edges.size()); ++e) {
    const EdgeMesh& em = space.mesh().edges[e];
    for (int t = 0; t < space.element_count(e); ++t) {
      ElementBasis basis = space.basis(e, t);
      const QuadratureRule& rule =
          gauss_legendre(space.quadrature_size(e, t) + 2);
      double a = em.breakpoints[t];
      double width = em.width(t);
      int base = space.bulk_start(e, t);
      for (std::size_t q = 0; q < rule.size(); ++q) {
        double x = a + 0.5 * width * (rule.points[q] + 1.0);
        basis.values(x, phi);
        double ux = 0.0;
        for (int j = 0; j <= space.order(); ++j)
          ux += u.values[base + j] * phi[j];
        double d = ux - w(e, x, Side::left);
        total += 0.5 * width * rule.weights[q] * d * d;
      }
    }
  }
  return std::sqrt(total);
}

} // namespace pipedg
