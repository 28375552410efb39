#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "levyfluct/fluctuation.hpp"

using namespace levyfluct;

namespace {

// For mu t + sigma B: u solves sigma^2 u'' / 2 + mu u' = gamma u; the exit
// transforms are the solutions with boundary values 0 and 1 on [lo, hi].
struct BrownianExit {
  double rp, rm;
  BrownianExit(double mu, double sigma, double gamma) {
    const double s2 = sigma * sigma;
    const double disc = std::sqrt(mu * mu + 2 * s2 * gamma);
    rp = (-mu + disc) / s2;
    rm = (-mu - disc) / s2;
  }
  double basis(double r1, double r2, double y) const { return std::exp(r1 * y) - std::exp(r2 * y); }
  // E_x[exp(-gamma tau_hi); tau_hi < tau_lo]
  double up(double x, double lo, double hi) const { return basis(rp, rm, x - lo) / basis(rp, rm, hi - lo); }
  // E_x[exp(-gamma tau_lo); tau_lo < tau_hi]
  double down(double x, double lo, double hi) const { return basis(rm, rp, x - hi) / basis(rm, rp, lo - hi); }
};

}  // namespace

TEST_CASE("joint law of the extremes for Brownian motion") {
  const auto ev = ScaleEvaluator::build(LevyModel::brownian(0.0, 1.0), KillingRate(0.5), 5.0);
  // 1 - (sinh(1) + sinh(1)) / sinh(2)
  CHECK(joint_sup_inf_cdf(ev, Window(-1.0, 1.0)) == doctest::Approx(0.3520).epsilon(1e-4));
  for (double mu : {0.0, 0.6, -0.9}) {
    const auto e = ScaleEvaluator::build(LevyModel::brownian(mu, 1.4), KillingRate(0.7), 5.0);
    const BrownianExit ref(mu, 1.4, 0.7);
    for (double a : {-0.3, -1.0, -2.0}) {
      for (double b : {0.2, 1.0, 2.5}) {
        const double expect = 1.0 - ref.up(0.0, a, b) - ref.down(0.0, a, b);
        CHECK(joint_sup_inf_cdf(e, Window(a, b)) == doctest::Approx(expect).epsilon(1e-11));
      }
    }
  }
}

TEST_CASE("two-sided exit transforms for Brownian motion") {
  const auto ev = ScaleEvaluator::build(LevyModel::brownian(0.4, 0.9), KillingRate(0.3), 5.0);
  const BrownianExit ref(0.4, 0.9, 0.3);
  for (double x : {0.0, 0.3, 1.1, 2.0}) {
    CHECK(exit_up_lt(ev, x, 2.0) == doctest::Approx(ref.up(x, 0.0, 2.0)).epsilon(1e-12));
    CHECK(exit_down_lt(ev, x, 2.0) == doctest::Approx(ref.down(x, 0.0, 2.0)).epsilon(1e-12).scale(1e-12));
  }
  // one-sided: exp(rm x) with rm the negative root
  for (double x : {0.0, 0.5, 3.0}) {
    CHECK(one_sided_down_lt(ev, x) == doctest::Approx(std::exp(ref.rm * x)).epsilon(1e-12));
    CHECK(h_tilde(ev, x) == doctest::Approx(1.0 - std::exp(ref.rm * x)).epsilon(1e-10).scale(1e-12));
  }
}

TEST_CASE("post-infimum supremum for standard Brownian motion is tanh") {
  // W = 2 sinh, Z = cosh when sigma = 1 and gamma = 1/2, so the CDF is tanh((b - a) / 2)
  const auto ev = ScaleEvaluator::build(LevyModel::brownian(0.0, 1.0), KillingRate(0.5), 5.0);
  for (double b : {-0.25, 0.0, 0.5, 1.0, 2.0}) {
    CHECK(post_inf_sup_cdf(ev, -0.5, b) == doctest::Approx(std::tanh((b + 0.5) / 2)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(post_inf_sup_cdf(ev, -0.5, -0.5), std::domain_error);
  CHECK_THROWS_AS(post_inf_sup_cdf(ev, -0.5, -1.0), std::domain_error);
}

TEST_CASE("post-supremum maximum loss for standard Brownian motion") {
  const auto ev = ScaleEvaluator::build(LevyModel::brownian(0.0, 1.0), KillingRate(0.5), 5.0);
  auto expect = [](double d, double len) {
    const double survival = 1 - std::cosh(len - d) + (std::cosh(len) - 1) * std::sinh(len - d) / std::sinh(len);
    return 1 - survival * std::sinh(len) / (std::sinh(d) * (std::cosh(len) - 1));
  };
  CHECK(max_loss_post_sup_cdf(ev, 1.0, -1.0, 1.0) == doctest::Approx(0.6067).epsilon(2e-4));
  for (double d : {0.1, 0.5, 1.0, 1.5, 1.9}) {
    CHECK(max_loss_post_sup_cdf(ev, d, -1.0, 1.0) == doctest::Approx(expect(d, 2.0)).epsilon(1e-11));
    CHECK(max_loss_post_sup_cdf(ev, d, -0.3, 2.5) == doctest::Approx(expect(d, 2.8)).epsilon(1e-11));
  }
  CHECK_THROWS_AS(max_loss_post_sup_cdf(ev, 0.0, -1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(max_loss_post_sup_cdf(ev, 2.0, -1.0, 1.0), std::domain_error);
}

TEST_CASE("functionals of a jump model are probabilities with the right monotonicity") {
  const auto ev = ScaleEvaluator::build(LevyModel::cp_exp(1.0, 1.0, 1.0, 2.0), KillingRate(0.5), 6.0);
  double last = 0.0;
  for (double b = 0.1; b <= 3.0; b += 0.1) {
    const double p = joint_sup_inf_cdf(ev, Window(-1.0, b));
    CHECK(p >= last);
    CHECK(p <= 1.0);
    last = p;
  }
  last = 0.0;
  for (double d = 0.05; d < 2.0; d += 0.05) {
    const double p = max_loss_post_sup_cdf(ev, d, -1.0, 1.0);
    CHECK(p >= last - 1e-12);
    CHECK(p <= 1.0);
    last = p;
  }
  for (double x : {0.0, 0.4, 1.7}) {
    const double up = exit_up_lt(ev, x, 2.0);
    const double down = exit_down_lt(ev, x, 2.0);
    CHECK(up >= 0.0);
    CHECK(down >= 0.0);
    CHECK(up + down <= 1.0);
    CHECK(h_tilde(ev, x) + one_sided_down_lt(ev, x) <= 1.0 + 1e-12);
  }
  CHECK(post_inf_sup_cdf(ev, -1.0, 4.9) > post_inf_sup_cdf(ev, -1.0, 0.5));
}

TEST_CASE("harmonic functions at their boundaries") {
  const auto ev = ScaleEvaluator::build(LevyModel::cp_exp(0.5, 1.0, 2.0, 1.5), KillingRate(0.8), 5.0);
  CHECK(h_post_sup(ev, 0.0) == 0.0);
  CHECK(h_post_sup(ev, 1.0) == doctest::Approx(1 - std::exp(-ev.phi())));
  CHECK(h_tilde(ev, 0.0) == doctest::Approx(0.0).scale(1.0));
  // both ends of [0, b - a] are regular for a process with a Gaussian part
  CHECK(h_intermediate(ev, 0.0, -1.0, 1.0) == doctest::Approx(0.0).scale(1.0));
  CHECK(h_intermediate(ev, 1.0, -1.0, 1.0) > 0.0);
  CHECK(h_intermediate(ev, 2.0, -1.0, 1.0) == doctest::Approx(0.0).scale(1.0));
  CHECK_THROWS_AS(h_intermediate(ev, 2.5, -1.0, 1.0), std::domain_error);
}

TEST_CASE("y is the upward exit transform relative to the infimum") {
  const auto ev = ScaleEvaluator::build(LevyModel::cp_exp(1.0, 1.0, 1.0, 2.0), KillingRate(0.5), 5.0);
  CHECK(y_value(ev, 0.0, -1.0, 1.0) == doctest::Approx(ev.w(1.0) / ev.w(2.0)));
  CHECK(y_value(ev, 1.0, -1.0, 1.0) == 1.0);
  CHECK_THROWS_AS(y_value(ev, -2.0, -1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(y_value(ev, 0.0, 1.0, 1.0), std::domain_error);
}

TEST_CASE("window and domain checks") {
  CHECK_THROWS_AS(Window(0.1, 1.0), std::domain_error);
  CHECK_THROWS_AS(Window(-1.0, 0.0), std::domain_error);
  CHECK(Window(-1.0, 2.0).width() == 3.0);
  const auto ev = ScaleEvaluator::build(LevyModel::brownian(0.0, 1.0), KillingRate(0.5), 2.0);
  CHECK_THROWS_AS(exit_up_lt(ev, 3.0, 2.0), std::domain_error);
  CHECK_THROWS_AS(one_sided_down_lt(ev, -1.0), std::domain_error);
  CHECK_THROWS_AS(joint_sup_inf_cdf(ev, Window(-1.5, 1.5)), std::out_of_range);
  CHECK_THROWS_AS(h_post_sup(ev, NAN), std::domain_error);
}
