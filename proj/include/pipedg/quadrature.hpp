#pragma once

#include <vector>

namespace pipedg {

/// Quadrature rule on the reference interval [-1, 1].
struct QuadratureRule {
  std::vector<double> points;
  std::vector<double> weights;

  std::size_t size() const { return points.size(); }
};

/// n-point Gauss-Legendre rule, exact for polynomials of degree 2n-1.
const QuadratureRule& gauss_legendre(int n);

} // namespace pipedg
