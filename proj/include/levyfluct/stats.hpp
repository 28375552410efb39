#pragma once

#include <functional>
#include <span>
#include <vector>

namespace levyfluct {

/// Right-continuous empirical CDF: F(x) = #{samples <= x} / n.
class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(std::vector<double> samples);

  double operator()(double x) const;
  /// Fraction of samples strictly below x.
  double below(double x) const;
  std::size_t size() const { return sorted_.size(); }
  const std::vector<double>& sorted() const { return sorted_; }

 private:
  std::vector<double> sorted_;
};

EmpiricalCdf empirical_cdf(std::span<const double> samples);

/// One-sample Kolmogorov-Smirnov distance sup_x |F_n(x) - F(x)|, evaluated
/// at both sides of every jump of F_n.
double ks_statistic(const std::function<double(double)>& cdf, std::span<const double> samples);

/// Two-sample Kolmogorov-Smirnov distance.
double ks_two_sample(std::span<const double> first, std::span<const double> second);

}  // namespace levyfluct
