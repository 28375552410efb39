#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

namespace levyfluct {

using TransformFn = std::function<std::complex<long double>(std::complex<long double>)>;

/// Euler-summation Bromwich inversion (Abate-Whitt).
///
/// f(t) ~ (10^{M/3} / t) * sum_{k=0}^{2M} eta_k Re F(beta_k / t), with
/// beta_k = M ln(10) / 3 + i pi k and eta_k the binomially averaged
/// alternating weights. Accuracy is roughly 0.6 M significant digits when the
/// arithmetic carries about M digits, hence the long double evaluation.
class EulerInverter {
 public:
  explicit EulerInverter(int order = 18);

  int order() const { return order_; }
  double operator()(const TransformFn& transform, double t) const;

 private:
  int order_;
  std::vector<long double> weights_;
  std::vector<std::complex<long double>> nodes_;
};

}  // namespace levyfluct
