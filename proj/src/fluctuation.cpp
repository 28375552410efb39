#include "levyfluct/fluctuation.hpp"

#include <fmt/format.h>

#include <cmath>
#include <stdexcept>

namespace levyfluct {

namespace {

constexpr double kClampSlack = 1e-12;

// Probabilities that stray outside [0, 1] by round-off only are pulled back.
double clamp_probability(double p) {
  if (p < 0.0 && p >= -kClampSlack) return 0.0;
  if (p > 1.0 && p <= 1.0 + kClampSlack) return 1.0;
  return p;
}

void require(bool ok, const char* fn, const char* message) {
  if (!ok) throw std::domain_error(fmt::format("{}: {}", fn, message));
}

void require_finite(double v, const char* fn) {
  require(std::isfinite(v), fn, "argument is not finite");
}

}  // namespace

Window::Window(double a, double b) : a_(a), b_(b) {
  if (!(a < 0.0 && 0.0 < b) || !std::isfinite(a) || !std::isfinite(b)) {
    throw std::domain_error("Window: requires finite a < 0 < b");
  }
}

double exit_up_lt(const ScaleEvaluator& ev, double x, double b) {
  require_finite(x, "exit_up_lt");
  require(b > 0.0, "exit_up_lt", "b must be > 0");
  require(0.0 <= x && x <= b, "exit_up_lt", "requires 0 <= x <= b");
  if (x == b) return 1.0;
  return clamp_probability(ev.w(x) / ev.w(b));
}

double exit_down_lt(const ScaleEvaluator& ev, double x, double b) {
  require_finite(x, "exit_down_lt");
  require(b > 0.0, "exit_down_lt", "b must be > 0");
  require(0.0 <= x && x <= b, "exit_down_lt", "requires 0 <= x <= b");
  if (x == b) return 0.0;
  return clamp_probability(ev.z(x) - ev.z(b) * ev.w(x) / ev.w(b));
}

double one_sided_down_lt(const ScaleEvaluator& ev, double x) {
  require_finite(x, "one_sided_down_lt");
  require(x >= 0.0, "one_sided_down_lt", "x must be >= 0");
  return clamp_probability(ev.z(x) - ev.gamma() / ev.phi() * ev.w(x));
}

double joint_sup_inf_cdf(const ScaleEvaluator& ev, const Window& window) {
  const double down = -window.a();
  const double width = window.width();
  return clamp_probability(1.0 - ev.z(down) + (ev.z(width) - 1.0) * ev.w(down) / ev.w(width));
}

double post_inf_sup_cdf(const ScaleEvaluator& ev, double a, double b) {
  require_finite(a, "post_inf_sup_cdf");
  require_finite(b, "post_inf_sup_cdf");
  require(b > a, "post_inf_sup_cdf", "requires b > a (the value at b = a is 0/0)");
  const double width = b - a;
  return clamp_probability(ev.phi() * (ev.z(width) - 1.0) / (ev.gamma() * ev.w(width)));
}

double max_loss_post_sup_cdf(const ScaleEvaluator& ev, double d, double a, double b) {
  require_finite(d, "max_loss_post_sup_cdf");
  require_finite(a, "max_loss_post_sup_cdf");
  require_finite(b, "max_loss_post_sup_cdf");
  const double width = b - a;
  require(0.0 < d && d < width, "max_loss_post_sup_cdf", "requires 0 < d < b - a");

  const double w_width = ev.w(width);
  const double survival =
      1.0 - ev.z(width - d) + (ev.z(width) - 1.0) * ev.w(width - d) / w_width;
  const double numerator = ev.z_prime(d) - ev.z(d) * ev.w_prime(d) / ev.w(d);
  const double denominator =
      -ev.z_prime(width) + (ev.z(width) - 1.0) * ev.w_prime(width) / w_width;
  return clamp_probability(1.0 - survival * numerator / denominator);
}

double h_tilde(const ScaleEvaluator& ev, double x) {
  require_finite(x, "h_tilde");
  require(x >= 0.0, "h_tilde", "x must be >= 0");
  return clamp_probability(ev.gamma() / ev.phi() * ev.w(x) - (ev.z(x) - 1.0));
}

double h_post_sup(const ScaleEvaluator& ev, double z) {
  require_finite(z, "h_post_sup");
  require(z >= 0.0, "h_post_sup", "z must be >= 0");
  return -std::expm1(-ev.phi() * z);
}

double h_intermediate(const ScaleEvaluator& ev, double z, double a, double b) {
  require_finite(z, "h_intermediate");
  require_finite(a, "h_intermediate");
  require_finite(b, "h_intermediate");
  const double width = b - a;
  require(width > 0.0, "h_intermediate", "requires a < b");
  require(0.0 <= z && z <= width, "h_intermediate", "requires 0 <= z <= b - a");
  const double y = width - z;
  const double ratio = ev.w(y) / ev.w(width);
  return clamp_probability(1.0 - ev.z(y) + (ev.z(width) - 1.0) * ratio);
}

double y_value(const ScaleEvaluator& ev, double x, double i, double b) {
  require_finite(x, "y_value");
  require_finite(i, "y_value");
  require_finite(b, "y_value");
  require(i < b, "y_value", "requires i < b");
  require(i <= x && x <= b, "y_value", "requires i <= x <= b");
  return exit_up_lt(ev, x - i, b - i);
}

}  // namespace levyfluct
