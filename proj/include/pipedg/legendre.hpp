#pragma once

#include <vector>

namespace pipedg {

/// Legendre polynomials P_0..P_k evaluated at s in [-1, 1].
void legendre_values(int k, double s, std::vector<double>& values);

/// Values and first derivatives of P_0..P_k at s (derivatives w.r.t. s).
void legendre_values_derivatives(int k, double s, std::vector<double>& values,
                                 std::vector<double>& derivatives);

/// Basis of the local polynomial space on an element (a, a+h):
///   phi_j(x) = sqrt((2j+1)/h) * P_j(2(x-a)/h - 1),   j = 0..k.
/// The phi_j are L2-orthonormal on the element, so the local mass matrix is
/// the identity for any element width.
class ElementBasis {
 public:
  ElementBasis(int order, double left, double width);

  int order() const { return order_; }
  double left() const { return left_; }
  double width() const { return width_; }

  /// phi_0(x)..phi_k(x)
  void values(double x, std::vector<double>& out) const;
  /// phi_j and phi_j' at x
  void values_derivatives(double x, std::vector<double>& out,
                          std::vector<double>& out_deriv) const;

 private:
  int order_;
  double left_;
  double width_;
};

} // namespace pipedg
