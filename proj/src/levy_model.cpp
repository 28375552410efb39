#include "levyfluct/levy_model.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace levyfluct {

KillingRate::KillingRate(double gamma) : gamma_(gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("killing rate must be finite and > 0");
  }
}

LevyModel::LevyModel(double drift, double gaussian, JumpSpec jumps)
    : drift_(drift), sigma_(gaussian), jumps_(jumps) {
  if (!std::isfinite(drift)) throw std::invalid_argument("drift must be finite");
  if (!(gaussian > 0.0) || !std::isfinite(gaussian)) {
    throw std::invalid_argument("gaussian coefficient must be finite and > 0");
  }
  if (const auto* cp = std::get_if<CompoundPoissonExp>(&jumps_)) {
    if (!(cp->rate >= 0.0) || !std::isfinite(cp->rate)) {
      throw std::invalid_argument("jump rate must be finite and >= 0");
    }
    if (!(cp->eta > 0.0) || !std::isfinite(cp->eta)) {
      throw std::invalid_argument("jump eta must be finite and > 0");
    }
  }
}

LevyModel LevyModel::brownian(double drift, double sigma) {
  return LevyModel(drift, sigma, NoJumps{});
}

LevyModel LevyModel::cp_exp(double drift, double sigma, double rate, double eta) {
  return LevyModel(drift, sigma, CompoundPoissonExp{rate, eta});
}

double LevyModel::jump_rate() const {
  const auto* cp = std::get_if<CompoundPoissonExp>(&jumps_);
  return cp ? cp->rate : 0.0;
}

double LevyModel::jump_eta() const {
  const auto* cp = std::get_if<CompoundPoissonExp>(&jumps_);
  return cp ? cp->eta : 0.0;
}

double LevyModel::psi_unchecked(double lambda) const {
  double value = drift_ * lambda + 0.5 * sigma_ * sigma_ * lambda * lambda;
  if (const auto* cp = std::get_if<CompoundPoissonExp>(&jumps_)) {
    // rate * (eta / (eta + l) - 1) written without cancellation.
    value -= cp->rate * lambda / (cp->eta + lambda);
  }
  return value;
}

double LevyModel::psi_prime_unchecked(double lambda) const {
  double value = drift_ + sigma_ * sigma_ * lambda;
  if (const auto* cp = std::get_if<CompoundPoissonExp>(&jumps_)) {
    const double denom = cp->eta + lambda;
    value -= cp->rate * cp->eta / (denom * denom);
  }
  return value;
}

double LevyModel::psi(double lambda) const {
  if (!(lambda >= 0.0)) throw std::domain_error("psi: lambda must be >= 0");
  return psi_unchecked(lambda);
}

std::complex<long double> LevyModel::psi(std::complex<long double> z) const {
  const long double mu = drift_;
  const long double s2 = static_cast<long double>(sigma_) * sigma_;
  std::complex<long double> value = mu * z + 0.5L * s2 * z * z;
  if (const auto* cp = std::get_if<CompoundPoissonExp>(&jumps_)) {
    const long double rate = cp->rate;
    const long double eta = cp->eta;
    value -= rate * z / (eta + z);
  }
  return value;
}

double LevyModel::psi_prime(double lambda) const {
  if (!(lambda >= 0.0)) throw std::domain_error("psi_prime: lambda must be >= 0");
  return psi_prime_unchecked(lambda);
}

double LevyModel::phi(double gamma) const {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw std::domain_error("phi: gamma must be finite and >= 0");
  }
  // psi is convex on [0, inf); its minimiser over [0, inf) is the lower end
  // of the bracket, where psi <= 0 <= gamma.
  double lo = 0.0;
  if (psi_prime_unchecked(0.0) < 0.0) {
    double a = 0.0;
    double b = 1.0;
    while (psi_prime_unchecked(b) < 0.0) b *= 2.0;
    for (int it = 0; it < 200 && b - a > 1e-15 * b; ++it) {
      const double m = 0.5 * (a + b);
      (psi_prime_unchecked(m) < 0.0 ? a : b) = m;
    }
    lo = b;
  }
  if (gamma == 0.0 && lo == 0.0) return 0.0;

  double hi = std::max(1.0, 2.0 * lo);
  while (psi_unchecked(hi) < gamma) hi *= 2.0;

  // Newton from the right converges monotonically on a convex function;
  // the bisection fallback only triggers on round-off.
  double x = hi;
  for (int it = 0; it < 200; ++it) {
    const double f = psi_unchecked(x) - gamma;
    if (f == 0.0) break;
    if (f > 0.0) {
      hi = x;
    } else {
      lo = x;
    }
    const double slope = psi_prime_unchecked(x);
    double next = slope > 0.0 ? x - f / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 4.0 * std::numeric_limits<double>::epsilon() * x) {
      x = next;
      break;
    }
    x = next;
  }
  return x;
}

std::string LevyModel::describe() const {
  std::ostringstream out;
  out.precision(10);
  if (is_brownian()) {
    out << "BM(drift=" << drift_ << ", sigma=" << sigma_ << ")";
  } else {
    const auto& cp = std::get<CompoundPoissonExp>(jumps_);
    out << "CPExp(drift=" << drift_ << ", sigma=" << sigma_ << ", rate=" << cp.rate
        << ", eta=" << cp.eta << ")";
  }
  return out.str();
}

LevyModel esscher_tilt(const LevyModel& model, KillingRate gamma) {
  const double c = model.phi(gamma.value());
  const double sigma = model.gaussian();
  const double drift = model.drift() + sigma * sigma * c;
  if (const auto* cp = std::get_if<CompoundPoissonExp>(&model.jumps())) {
    return LevyModel(drift, sigma,
                     CompoundPoissonExp{cp->rate * cp->eta / (cp->eta + c), cp->eta + c});
  }
  return LevyModel(drift, sigma, NoJumps{});
}

}  // namespace levyfluct
