#include "doctest.h"

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/uniform_01.hpp>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "levyfluct/stats.hpp"

using namespace levyfluct;

TEST_CASE("empirical CDF counts samples at or below x") {
  const EmpiricalCdf f({3.0, 1.0, 2.0, 2.0});
  CHECK(f(0.5) == 0.0);
  CHECK(f(1.0) == 0.25);
  CHECK(f(2.0) == 0.75);
  CHECK(f.below(2.0) == 0.25);
  CHECK(f(10.0) == 1.0);
  CHECK(f.size() == 4);
  CHECK_THROWS_AS(EmpiricalCdf({}), std::invalid_argument);
  CHECK_THROWS_AS(EmpiricalCdf({1.0, NAN}), std::invalid_argument);
}

TEST_CASE("one-sample KS on hand-computed cases") {
  const auto uniform = [](double x) { return std::clamp(x, 0.0, 1.0); };
  const std::vector<double> one{0.5};
  CHECK(ks_statistic(uniform, one) == doctest::Approx(0.5));
  std::vector<double> strat;
  for (int i = 0; i < 100; ++i) strat.push_back((i + 0.5) / 100.0);
  CHECK(ks_statistic(uniform, strat) == doctest::Approx(0.005));
  // ties: all mass at 0.2 jumps the CDF from 0 to 1
  const std::vector<double> tied(10, 0.2);
  CHECK(ks_statistic(uniform, tied) == doctest::Approx(0.8));
}

TEST_CASE("one-sample KS stays inside the DKW band for true samples") {
  boost::random::mt19937_64 gen(42);
  boost::random::uniform_01<double> u;
  std::vector<double> xs(20000);
  for (auto& x : xs) x = u(gen);
  // P(D_n > eps) <= 2 exp(-2 n eps^2); eps for probability 1e-6
  const double eps = std::sqrt(std::log(2.0 / 1e-6) / (2.0 * xs.size()));
  CHECK(ks_statistic([](double x) { return std::clamp(x, 0.0, 1.0); }, xs) < eps);
  CHECK(ks_statistic([](double x) { return std::clamp(x * x, 0.0, 1.0); }, xs) > 0.2);
}

TEST_CASE("two-sample KS") {
  const std::vector<double> a{1.0, 2.0, 3.0, 4.0};
  CHECK(ks_two_sample(a, a) == 0.0);
  const std::vector<double> b{10.0, 11.0};
  CHECK(ks_two_sample(a, b) == 1.0);
  const std::vector<double> c{1.5, 3.5};
  // F_a - F_c peaks at 0.25 (x = 1 and x = 3)
  CHECK(ks_two_sample(a, c) == doctest::Approx(0.25));
  CHECK(ks_two_sample(c, a) == doctest::Approx(0.25));
  CHECK_THROWS(ks_two_sample(a, std::vector<double>{}));
}
