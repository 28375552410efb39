#pragma once

#include "levyfluct/scale_functions.hpp"

// Fluctuation identities for a spectrally negative Levy process killed at an
// independent Exp(gamma) time. Every functional is expressed through
// w, w_prime, z and z_prime of a ScaleEvaluator, so each catalog model gets
// all of them. Arguments outside a functional's domain raise
// std::domain_error (std::out_of_range past the evaluator's x_max).

namespace levyfluct {

/// Two-sided window a < 0 < b around the starting point.
class Window {
 public:
  Window(double a, double b);
  double a() const { return a_; }
  double b() const { return b_; }
  double width() const { return b_ - a_; }

 private:
  double a_;
  double b_;
};

/// E_x[exp(-gamma tau_b^+); tau_b^+ < tau_0^-] = W(x) / W(b), 0 <= x <= b.
double exit_up_lt(const ScaleEvaluator& ev, double x, double b);

/// E_x[exp(-gamma tau_0^-); tau_0^- < tau_b^+] = Z(x) - Z(b) W(x) / W(b).
double exit_down_lt(const ScaleEvaluator& ev, double x, double b);

/// E_x[exp(-gamma tau_0^-); tau_0^- < inf] = Z(x) - (gamma / Phi) W(x).
double one_sided_down_lt(const ScaleEvaluator& ev, double x);

/// P_0(a < I_T, S_T < b) = 1 - Z(-a) + (Z(b - a) - 1) W(-a) / W(b - a).
double joint_sup_inf_cdf(const ScaleEvaluator& ev, const Window& window);

/// CDF of the supremum of the post-infimum process given I_T = a:
/// Phi (Z(b - a) - 1) / (gamma W(b - a)). Requires b > a.
double post_inf_sup_cdf(const ScaleEvaluator& ev, double a, double b);

/// P(max loss of the post-supremum process < d | H_I < H_S, I_T = a, S_T = b)
/// for 0 < d < b - a.
double max_loss_post_sup_cdf(const ScaleEvaluator& ev, double d, double a, double b);

/// P_x(T < tau_0^-) = (gamma / Phi) W(x) - (Z(x) - 1).
double h_tilde(const ScaleEvaluator& ev, double x);

/// P(T < tau_z^+) = 1 - exp(-Phi z); harmonic function of the post-supremum process.
double h_post_sup(const ScaleEvaluator& ev, double z);

/// Survival P_z(T < hat tau^+_{b-a} and hat tau^-_0) of the dual process,
/// the harmonic function of the post-supremum process given both extremes.
double h_intermediate(const ScaleEvaluator& ev, double z, double a, double b);

/// W(x - i) / W(b - i) for i <= x <= b, i < b.
double y_value(const ScaleEvaluator& ev, double x, double i, double b);

}  // namespace levyfluct
