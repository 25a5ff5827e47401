#include "pipedg/legendre.hpp"

#include <cmath>
#include <stdexcept>

namespace pipedg {

void legendre_values(int k, double s, std::vector<double>& values) {
  values.resize(k + 1);
  values[0] = 1.0;
  if (k == 0) return;
  values[1] = s;
  for (int j = 2; j <= k; ++j)
    values[j] = ((2 * j - 1) * s * values[j - 1] - (j - 1) * values[j - 2]) / j;
}

void legendre_values_derivatives(int k, double s, std::vector<double>& values,
                                 std::vector<double>& derivatives) {
  legendre_values(k, s, values);
  derivatives.resize(k + 1);
  derivatives[0] = 0.0;
  if (k == 0) return;
  derivatives[1] = 1.0;
  // P'_{j} = P'_{j-2} + (2j-1) P_{j-1}; valid on the closed interval.
  for (int j = 2; j <= k; ++j)
    derivatives[j] = derivatives[j - 2] + (2 * j - 1) * values[j - 1];
}

ElementBasis::ElementBasis(int order, double left, double width)
    : order_(order), left_(left), width_(width) {
  if (order < 0) throw std::invalid_argument("ElementBasis: negative order");
  if (!(width > 0.0)) throw std::invalid_argument("ElementBasis: nonpositive width");
}

void ElementBasis::values(double x, std::vector<double>& out) const {
  double s = 2.0 * (x - left_) / width_ - 1.0;
  legendre_values(order_, s, out);
  for (int j = 0; j <= order_; ++j)
    out[j] *= std::sqrt((2 * j + 1) / width_);
}

void ElementBasis::values_derivatives(double x, std::vector<double>& out,
                                      std::vector<double>& out_deriv) const {
  double s = 2.0 * (x - left_) / width_ - 1.0;
  legendre_values_derivatives(order_, s, out, out_deriv);
  for (int j = 0; j <= order_; ++j) {
    double scale = std::sqrt((2 * j + 1) / width_);
    out[j] *= scale;
    out_deriv[j] *= scale * 2.0 / width_;
  }
}

} // namespace pipedg
