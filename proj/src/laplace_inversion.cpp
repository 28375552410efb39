#include "levyfluct/laplace_inversion.hpp"

#include <stdexcept>

namespace levyfluct {

EulerInverter::EulerInverter(int order) : order_(order) {
  if (order < 2 || order > 40) throw std::invalid_argument("EulerInverter: order out of range");
  const int m = order;
  const long double pi = std::numbers::pi_v<long double>;
  const long double base = m * std::log(10.0L) / 3.0L;

  std::vector<long double> xi(2 * m + 1, 1.0L);
  xi[0] = 0.5L;
  const long double tail = std::ldexp(1.0L, -m);
  xi[2 * m] = tail;
  long double binom = 1.0L;  // C(m, k)
  for (int k = 1; k < m; ++k) {
    binom = binom * (m - k + 1) / k;
    xi[2 * m - k] = xi[2 * m - k + 1] + tail * binom;
  }

  weights_.resize(2 * m + 1);
  nodes_.resize(2 * m + 1);
  const long double scale = std::pow(10.0L, m / 3.0L);
  for (int k = 0; k <= 2 * m; ++k) {
    weights_[k] = scale * ((k % 2 == 0) ? xi[k] : -xi[k]);
    nodes_[k] = {base, pi * k};
  }
}

double EulerInverter::operator()(const TransformFn& transform, double t) const {
  if (!(t > 0.0)) throw std::domain_error("EulerInverter: t must be > 0");
  const long double tt = t;
  long double sum = 0.0L;
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    sum += weights_[k] * transform(nodes_[k] / tt).real();
  }
  return static_cast<double>(sum / tt);
}

}  // namespace levyfluct
