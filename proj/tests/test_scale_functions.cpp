#include "doctest.h"

#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "levyfluct/laplace_inversion.hpp"
#include "levyfluct/scale_functions.hpp"

using namespace levyfluct;

namespace {

// W for mu t + sigma B: roots of sigma^2 r^2 / 2 + mu r - gamma = 0.
struct BrownianScale {
  double rp, rm, c, gamma;
  BrownianScale(double mu, double sigma, double g) : gamma(g) {
    const double s2 = sigma * sigma;
    const double disc = std::sqrt(mu * mu + 2 * s2 * g);
    rp = (-mu + disc) / s2;
    rm = (-mu - disc) / s2;
    c = 1.0 / disc;
  }
  double w(double x) const { return c * (std::exp(rp * x) - std::exp(rm * x)); }
  double w_prime(double x) const { return c * (rp * std::exp(rp * x) - rm * std::exp(rm * x)); }
  double z(double x) const {
    return 1 + gamma * c * ((std::exp(rp * x) - 1) / rp - (std::exp(rm * x) - 1) / rm);
  }
};

// With exponential jumps, (eta + l)(psi(l) - gamma) is a cubic with three
// real roots, and W is a sum of exponentials over them.
struct ExpJumpScale {
  std::array<double, 3> roots{};
  std::array<double, 3> coef{};
  double gamma;

  ExpJumpScale(double mu, double sigma, double rate, double eta, double g) : gamma(g) {
    const double s2 = sigma * sigma;
    const std::array<double, 4> p{-g * eta, mu * eta - g - rate, mu + 0.5 * s2 * eta, 0.5 * s2};
    auto poly = [&](double l) { return ((p[3] * l + p[2]) * l + p[1]) * l + p[0]; };
    auto dpoly = [&](double l) { return (3 * p[3] * l + 2 * p[2]) * l + p[1]; };
    auto bisect = [&](double lo, double hi) {
      const bool rising = poly(hi) > 0;
      for (int i = 0; i < 300; ++i) {
        const double mid = 0.5 * (lo + hi);
        ((poly(mid) > 0) == rising ? hi : lo) = mid;
      }
      return 0.5 * (lo + hi);
    };
    roots = {bisect(-1e4, -eta), bisect(-eta, 0.0), bisect(0.0, 1e4)};
    for (int i = 0; i < 3; ++i) coef[i] = (eta + roots[i]) / dpoly(roots[i]);
  }
  double w(double x) const {
    double s = 0;
    for (int i = 0; i < 3; ++i) s += coef[i] * std::exp(roots[i] * x);
    return s;
  }
  double w_prime(double x) const {
    double s = 0;
    for (int i = 0; i < 3; ++i) s += coef[i] * roots[i] * std::exp(roots[i] * x);
    return s;
  }
  double z(double x) const {
    double s = 0;
    for (int i = 0; i < 3; ++i) s += coef[i] * std::expm1(roots[i] * x) / roots[i];
    return 1 + gamma * s;
  }
};

}  // namespace

TEST_CASE("Euler inversion recovers known transforms") {
  const EulerInverter inv(18);
  for (double t : {0.1, 1.0, 3.0, 10.0}) {
    const double a = inv([](auto s) { return 1.0L / ((s + 1.0L) * (s + 1.0L)); }, t);
    CHECK(a == doctest::Approx(t * std::exp(-t)).epsilon(1e-8).scale(1e-9));
    CHECK(inv([](auto s) { return 1.0L / s; }, t) == doctest::Approx(1.0).epsilon(1e-9));
  }
  CHECK_THROWS(EulerInverter(1));
  CHECK_THROWS(EulerInverter(41));
}

TEST_CASE("closed form matches the Brownian oracle") {
  for (auto [mu, sigma, g] : {std::array{0.0, 1.0, 0.5}, std::array{0.8, 1.3, 0.2}, std::array{-1.0, 0.6, 2.0}}) {
    const auto ev = ScaleEvaluator::build(LevyModel::brownian(mu, sigma), KillingRate(g), 6.0);
    const BrownianScale ref(mu, sigma, g);
    CHECK(ev.method() == ScaleMethod::ClosedForm);
    CHECK(ev.phi() == doctest::Approx(ref.rp).epsilon(1e-13));
    for (double x : {1e-6, 0.01, 0.5, 1.0, 2.7, 6.0}) {
      CHECK(ev.w(x) == doctest::Approx(ref.w(x)).epsilon(1e-12));
      CHECK(ev.w_prime(x) == doctest::Approx(ref.w_prime(x)).epsilon(1e-12));
      CHECK(ev.z(x) == doctest::Approx(ref.z(x)).epsilon(1e-12));
      CHECK(ev.z_prime(x) == doctest::Approx(g * ref.w(x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("inversion matches the three-root oracle for exponential jumps") {
  for (auto [mu, sigma, rate, eta, g] :
       {std::array{1.0, 1.0, 1.0, 2.0, 0.5}, std::array{-0.3, 0.7, 3.0, 1.2, 0.1},
        std::array{0.0, 1.5, 0.5, 5.0, 2.0}}) {
    const auto ev = ScaleEvaluator::build(LevyModel::cp_exp(mu, sigma, rate, eta), KillingRate(g), 5.0);
    const ExpJumpScale ref(mu, sigma, rate, eta, g);
    CHECK(ev.method() == ScaleMethod::Inversion);
    CHECK(ev.phi() == doctest::Approx(ref.roots[2]).epsilon(1e-10));
    for (double x = 0.05; x <= 5.0; x += 0.0937) {
      CHECK(ev.w(x) == doctest::Approx(ref.w(x)).epsilon(1e-7));
      CHECK(ev.w_prime(x) == doctest::Approx(ref.w_prime(x)).epsilon(1e-6));
      CHECK(ev.z(x) == doctest::Approx(ref.z(x)).epsilon(1e-7));
    }
  }
}

TEST_CASE("forced inversion reproduces the Brownian closed form") {
  const auto model = LevyModel::brownian(0.2, 1.1);
  const auto closed = ScaleEvaluator::build(model, KillingRate(0.4), 5.0);
  const auto inverted = ScaleEvaluator::build(model, KillingRate(0.4), 5.0, 1e-3, ScaleMethod::Inversion);
  CHECK(inverted.method() == ScaleMethod::Inversion);
  for (double x = 0.01; x <= 5.0; x += 0.0731) {
    CHECK(inverted.w(x) == doctest::Approx(closed.w(x)).epsilon(1e-8));
    CHECK(inverted.w_prime(x) == doctest::Approx(closed.w_prime(x)).epsilon(1e-7));
    CHECK(inverted.z(x) == doctest::Approx(closed.z(x)).epsilon(1e-8));
  }
}

TEST_CASE("scale functions are extended below zero and checked at the edges") {
  const auto ev = ScaleEvaluator::build(LevyModel::cp_exp(1.0, 1.0, 1.0, 2.0), KillingRate(0.5), 3.0);
  CHECK(ev.w(-1.0) == 0.0);
  CHECK(ev.w(0.0) == doctest::Approx(0.0).scale(1.0));
  CHECK(ev.z(-2.0) == 1.0);
  CHECK(ev.z(0.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(ev.w_prime(0.0), std::domain_error);
  CHECK_THROWS_AS(ev.w(3.5), std::out_of_range);
  CHECK_THROWS_AS(ev.z(NAN), std::domain_error);
  CHECK_NOTHROW(ev.w(3.0));
}

TEST_CASE("W is increasing and Z >= 1 on the grid") {
  const auto ev = ScaleEvaluator::build(LevyModel::cp_exp(-0.5, 0.8, 2.0, 1.0), KillingRate(0.3), 4.0);
  double last_w = 0.0;
  double last_z = 1.0;
  for (double x = 0.001; x <= 4.0; x += 0.0173) {
    CHECK(ev.w(x) > last_w);
    CHECK(ev.z(x) >= last_z);
    CHECK(ev.w_prime(x) > 0.0);
    last_w = ev.w(x);
    last_z = ev.z(x);
  }
}

TEST_CASE("W' of the interpolant agrees with a difference quotient") {
  const auto ev = ScaleEvaluator::build(LevyModel::cp_exp(1.0, 1.0, 1.0, 2.0), KillingRate(1.0), 4.0);
  for (double x : {0.3, 1.2345, 3.3}) {
    const double h = 1e-5;
    CHECK(ev.w_prime(x) == doctest::Approx((ev.w(x + h) - ev.w(x - h)) / (2 * h)).epsilon(1e-5));
  }
}

TEST_CASE("build rejects bad arguments") {
  const auto cp = LevyModel::cp_exp(1.0, 1.0, 1.0, 2.0);
  CHECK_THROWS_AS(ScaleEvaluator::build(cp, KillingRate(0.5), 2.0, 1e-3, ScaleMethod::ClosedForm),
                  std::invalid_argument);
  CHECK_THROWS_AS(ScaleEvaluator::build(cp, KillingRate(0.5), -1.0), std::invalid_argument);
  CHECK_THROWS_AS(ScaleEvaluator::build(cp, KillingRate(0.5), 1.0, 2.0), std::invalid_argument);
}

TEST_CASE("grid dump") {
  const auto ev = ScaleEvaluator::build(LevyModel::brownian(0.0, 1.0), KillingRate(0.5), 1.0, 0.25);
  std::ostringstream out;
  ev.write_csv(out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "x,W,Wprime,Z");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows >= 5);
  CHECK(to_string(ScaleMethod::Inversion) == "inversion");
}
