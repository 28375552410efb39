#include "levyfluct/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace levyfluct {

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples) : sorted_(std::move(samples)) {
  if (sorted_.empty()) throw std::invalid_argument("empirical cdf: no samples");
  for (double v : sorted_) {
    if (std::isnan(v)) throw std::invalid_argument("empirical cdf: NaN sample");
  }
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::operator()(double x) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double EmpiricalCdf::below(double x) const {
  const auto it = std::lower_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

EmpiricalCdf empirical_cdf(std::span<const double> samples) {
  return EmpiricalCdf(std::vector<double>(samples.begin(), samples.end()));
}

double ks_statistic(const std::function<double(double)>& cdf, std::span<const double> samples) {
  const EmpiricalCdf ecdf = empirical_cdf(samples);
  const auto& xs = ecdf.sorted();
  const double n = static_cast<double>(xs.size());
  double worst = 0.0;
  std::size_t i = 0;
  while (i < xs.size()) {
    std::size_t j = i;
    while (j < xs.size() && xs[j] == xs[i]) ++j;
    const double f = cdf(xs[i]);
    worst = std::max({worst, std::abs(static_cast<double>(j) / n - f),
                      std::abs(f - static_cast<double>(i) / n)});
    i = j;
  }
  return std::min(worst, 1.0);
}

double ks_two_sample(std::span<const double> first, std::span<const double> second) {
  if (first.empty() || second.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::vector<double> a(first.begin(), first.end());
  std::vector<double> b(second.begin(), second.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double worst = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    worst = std::max(worst, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return worst;
}

}  // namespace levyfluct
