#include "levyfluct/scale_functions.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "levyfluct/laplace_inversion.hpp"

namespace levyfluct {

namespace {

// Absolute accuracy demanded of the damped function exp(-Phi x) W(x).
constexpr double kInversionTolerance = 1e-8;
constexpr int kInversionOrder = 20;
constexpr int kCheckOrder = 16;

}  // namespace

std::string to_string(ScaleMethod method) {
  return method == ScaleMethod::ClosedForm ? "closed_form" : "inversion";
}

ScaleEvaluator::ScaleEvaluator(const LevyModel& model, double gamma, double phi, double x_max)
    : model_(model), gamma_(gamma), phi_(phi), x_max_(x_max) {}

ScaleEvaluator ScaleEvaluator::build(const LevyModel& model, KillingRate gamma, double x_max,
                                     double h_grid, std::optional<ScaleMethod> method) {
  if (!(x_max > 0.0) || !std::isfinite(x_max)) {
    throw std::invalid_argument("scale evaluator: x_max must be finite and > 0");
  }
  if (!(h_grid > 0.0) || h_grid > x_max) {
    throw std::invalid_argument("scale evaluator: h_grid must lie in (0, x_max]");
  }
  const ScaleMethod chosen =
      method.value_or(model.is_brownian() ? ScaleMethod::ClosedForm : ScaleMethod::Inversion);
  if (chosen == ScaleMethod::ClosedForm && !model.is_brownian()) {
    throw std::invalid_argument("scale evaluator: closed form only exists without jumps");
  }

  ScaleEvaluator ev(model, gamma.value(), model.phi(gamma.value()), x_max);
  ev.method_ = chosen;
  if (chosen == ScaleMethod::ClosedForm) {
    ev.build_closed_form(h_grid);
  } else {
    ev.build_inversion(h_grid);
  }
  return ev;
}

void ScaleEvaluator::build_closed_form(double h_grid) {
  const double mu = model_.drift();
  const double s2 = model_.gaussian() * model_.gaussian();
  const double disc = std::sqrt(mu * mu + 2.0 * s2 * gamma_);
  root_plus_ = (-mu + disc) / s2;
  root_minus_ = (-mu - disc) / s2;
  closed_scale_ = 1.0 / disc;  // 2 / (sigma^2 (root_plus - root_minus))

  const auto n = static_cast<std::size_t>(std::max(4.0, std::ceil(x_max_ / h_grid - 1e-9)));
  h_ = x_max_ / static_cast<double>(n);
  grid_.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double x = static_cast<double>(i) * h_;
    grid_.push_back({x, closed_w(x), closed_w_prime(x), closed_z(x)});
  }
}

void ScaleEvaluator::build_inversion(double h_grid) {
  const auto n = static_cast<std::size_t>(std::max(4.0, std::ceil(x_max_ / h_grid - 1e-9)));
  h_ = x_max_ / static_cast<double>(n);

  const long double phi = phi_;
  const long double gamma = gamma_;
  const LevyModel& model = model_;
  const TransformFn damped = [&model, phi, gamma](std::complex<long double> s) {
    return 1.0L / (model.psi(s + phi) - gamma);
  };
  const EulerInverter inverter(kInversionOrder);
  const EulerInverter checker(kCheckOrder);

  // Two extra nodes past x_max feed the centred stencil at the top end.
  std::vector<double> w(n + 3, 0.0);
  for (std::size_t i = 1; i < w.size(); ++i) {
    const double x = static_cast<double>(i) * h_;
    const double f = inverter(damped, x);
    const double f_check = checker(damped, x);
    if (!std::isfinite(f) || std::abs(f - f_check) > kInversionTolerance) {
      throw ScaleBuildError(
          fmt::format("scale inversion missed accuracy target at x={:.6g} (estimate {:.3g})", x,
                      std::abs(f - f_check)),
          x);
    }
    w[i] = std::exp(phi_ * x) * f;
    if (!(w[i] > 0.0) || w[i] < w[i - 1]) {
      throw ScaleBuildError(fmt::format("scale inversion lost monotonicity at x={:.6g}", x), x);
    }
  }

  const double inv12h = 1.0 / (12.0 * h_);
  std::vector<double> d(n + 1);
  d[0] = (-25.0 * w[0] + 48.0 * w[1] - 36.0 * w[2] + 16.0 * w[3] - 3.0 * w[4]) * inv12h;
  d[1] = (-3.0 * w[0] - 10.0 * w[1] + 18.0 * w[2] - 6.0 * w[3] + w[4]) * inv12h;
  for (std::size_t i = 2; i <= n; ++i) {
    d[i] = (w[i - 2] - 8.0 * w[i - 1] + 8.0 * w[i + 1] - w[i + 2]) * inv12h;
  }

  // Fritsch-Carlson limiter; inactive wherever the stencil slopes are smooth.
  slope_ = d;
  for (std::size_t k = 0; k < n; ++k) {
    const double secant = (w[k + 1] - w[k]) / h_;
    if (secant <= 0.0) {
      slope_[k] = slope_[k + 1] = 0.0;
      continue;
    }
    double alpha = slope_[k] / secant;
    double beta = slope_[k + 1] / secant;
    if (alpha < 0.0) slope_[k] = alpha = 0.0;
    if (beta < 0.0) slope_[k + 1] = beta = 0.0;
    const double r2 = alpha * alpha + beta * beta;
    if (r2 > 9.0) {
      const double tau = 3.0 / std::sqrt(r2);
      slope_[k] = tau * alpha * secant;
      slope_[k + 1] = tau * beta * secant;
    }
  }

  integral_.assign(n + 1, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    integral_[k + 1] = integral_[k] + h_ * (0.5 * (w[k] + w[k + 1]) +
                                            h_ * (slope_[k] - slope_[k + 1]) / 12.0);
  }

  grid_.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    grid_.push_back({static_cast<double>(i) * h_, w[i], slope_[i], 1.0 + gamma_ * integral_[i]});
  }
}

double ScaleEvaluator::closed_w(double x) const {
  // exp(l+ x) - exp(l- x) = exp(l- x) expm1((l+ - l-) x)
  return closed_scale_ * std::exp(root_minus_ * x) * std::expm1((root_plus_ - root_minus_) * x);
}

double ScaleEvaluator::closed_w_prime(double x) const {
  return closed_scale_ *
         (root_plus_ * std::exp(root_plus_ * x) - root_minus_ * std::exp(root_minus_ * x));
}

double ScaleEvaluator::closed_z(double x) const {
  return 1.0 + gamma_ * closed_scale_ *
                   (std::expm1(root_plus_ * x) / root_plus_ -
                    std::expm1(root_minus_ * x) / root_minus_);
}

void ScaleEvaluator::check_range(double x, const char* what) const {
  if (!std::isfinite(x)) throw std::domain_error(fmt::format("{}: argument is not finite", what));
  if (x > x_max_ * (1.0 + 1e-12)) {
    throw std::out_of_range(
        fmt::format("{}: x={:.6g} exceeds x_max={:.6g}", what, x, x_max_));
  }
}

std::size_t ScaleEvaluator::cell_of(double x, double& s) const {
  const double u = x / h_;
  const std::size_t cells = grid_.size() - 1;
  auto k = static_cast<std::size_t>(u);
  if (k >= cells) k = cells - 1;
  s = u - static_cast<double>(k);
  return k;
}

double ScaleEvaluator::w(double x) const {
  check_range(x, "w");
  if (x <= 0.0) return 0.0;
  if (method_ == ScaleMethod::ClosedForm) return closed_w(x);
  double s = 0.0;
  const std::size_t k = cell_of(x, s);
  const double s2 = s * s;
  const double s3 = s2 * s;
  return (2.0 * s3 - 3.0 * s2 + 1.0) * grid_[k].w + (s3 - 2.0 * s2 + s) * h_ * slope_[k] +
         (-2.0 * s3 + 3.0 * s2) * grid_[k + 1].w + (s3 - s2) * h_ * slope_[k + 1];
}

double ScaleEvaluator::w_prime(double x) const {
  check_range(x, "w_prime");
  if (!(x > 0.0)) throw std::domain_error("w_prime: x must be > 0");
  if (method_ == ScaleMethod::ClosedForm) return closed_w_prime(x);
  double s = 0.0;
  const std::size_t k = cell_of(x, s);
  const double s2 = s * s;
  return ((6.0 * s2 - 6.0 * s) * (grid_[k].w - grid_[k + 1].w)) / h_ +
         (3.0 * s2 - 4.0 * s + 1.0) * slope_[k] + (3.0 * s2 - 2.0 * s) * slope_[k + 1];
}

double ScaleEvaluator::z(double x) const {
  check_range(x, "z");
  if (x <= 0.0) return 1.0;
  if (method_ == ScaleMethod::ClosedForm) return closed_z(x);
  double s = 0.0;
  const std::size_t k = cell_of(x, s);
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double s4 = s3 * s;
  const double partial =
      h_ * ((0.5 * s4 - s3 + s) * grid_[k].w + (0.25 * s4 - 2.0 * s3 / 3.0 + 0.5 * s2) * h_ * slope_[k] +
            (-0.5 * s4 + s3) * grid_[k + 1].w + (0.25 * s4 - s3 / 3.0) * h_ * slope_[k + 1]);
  return 1.0 + gamma_ * (integral_[k] + partial);
}

double ScaleEvaluator::z_prime(double x) const { return gamma_ * w(x); }

void ScaleEvaluator::write_csv(std::ostream& out) const {
  out << "x,W,Wprime,Z\n";
  for (const auto& p : grid_) {
    out << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g}\n", p.x, p.w, p.w_prime, p.z);
  }
}

}  // namespace levyfluct
