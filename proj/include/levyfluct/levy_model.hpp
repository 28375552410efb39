#pragma once

#include <complex>
#include <string>
#include <variant>

namespace levyfluct {

/// No jumps: the process is a Brownian motion with drift.
struct NoJumps {
  bool operator==(const NoJumps&) const = default;
};

/// Downward jumps arriving at Poisson rate `rate` with magnitudes ~ Exp(eta),
/// i.e. a Levy measure rate * eta * exp(eta * y) dy on y < 0.
struct CompoundPoissonExp {
  double rate = 0.0;
  double eta = 1.0;
  bool operator==(const CompoundPoissonExp&) const = default;
};

using JumpSpec = std::variant<NoJumps, CompoundPoissonExp>;

/// Rate of an independent exponential killing time. Always > 0.
class KillingRate {
 public:
  explicit KillingRate(double gamma);
  double value() const { return gamma_; }

 private:
  double gamma_;
};

/// Spectrally negative Levy process from a closed catalog.
///
/// The Laplace exponent is psi(l) = log E[exp(l X_1)]
///   = drift * l + sigma^2 l^2 / 2 + rate * (eta / (eta + l) - 1),
/// so `drift` is the linear coefficient of the exponent. With this convention
/// the path is drift * t + sigma * B_t plus the raw (uncompensated) jumps,
/// and E[X_1] = drift - rate / eta.
class LevyModel {
 public:
  LevyModel(double drift, double gaussian, JumpSpec jumps = NoJumps{});

  static LevyModel brownian(double drift, double sigma);
  static LevyModel cp_exp(double drift, double sigma, double rate, double eta);

  double drift() const { return drift_; }
  double gaussian() const { return sigma_; }
  const JumpSpec& jumps() const { return jumps_; }

  /// Total jump intensity; zero for the Brownian variant.
  double jump_rate() const;
  /// Exponential parameter of the jump magnitudes (0 when there are no jumps).
  double jump_eta() const;
  bool is_brownian() const { return std::holds_alternative<NoJumps>(jumps_); }

  /// psi(lambda) for lambda >= 0.
  double psi(double lambda) const;
  /// psi on the complex half plane Re z > -eta; used by transform inversion.
  std::complex<long double> psi(std::complex<long double> z) const;
  double psi_prime(double lambda) const;

  /// Largest root of psi(lambda) = gamma, gamma >= 0.
  double phi(double gamma) const;

  std::string describe() const;

  bool operator==(const LevyModel&) const = default;

 private:
  double psi_unchecked(double lambda) const;
  double psi_prime_unchecked(double lambda) const;

  double drift_;
  double sigma_;
  JumpSpec jumps_;
};

/// Model whose exponent is psi(lambda + Phi(gamma)) - gamma. The result stays
/// in the catalog: drift becomes drift + sigma^2 Phi, jumps become
/// CompoundPoissonExp(rate * eta / (eta + Phi), eta + Phi).
LevyModel esscher_tilt(const LevyModel& model, KillingRate gamma);

}  // namespace levyfluct
