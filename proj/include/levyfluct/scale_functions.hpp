#pragma once

#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "levyfluct/levy_model.hpp"

namespace levyfluct {

enum class ScaleMethod { ClosedForm, Inversion };

std::string to_string(ScaleMethod method);

/// Raised when the transform inversion misses its accuracy target.
class ScaleBuildError : public std::runtime_error {
 public:
  ScaleBuildError(const std::string& what, double x) : std::runtime_error(what), x_(x) {}
  double x() const { return x_; }

 private:
  double x_;
};

struct ScaleGridPoint {
  double x;
  double w;
  double w_prime;
  double z;
};

/// W^(gamma), Z^(gamma) and first derivatives for a fixed model and killing
/// rate, on [0, x_max]. Both functions are extended to x < 0 by W = 0, Z = 1.
///
/// Brownian models use the closed form. Models with jumps invert the damped
/// transform of exp(-Phi x) W(x), tabulate W on a uniform grid and
/// interpolate with monotone cubic Hermite segments whose node slopes come
/// from 5-point differences. Z is the exact integral of that interpolant.
class ScaleEvaluator {
 public:
  static ScaleEvaluator build(const LevyModel& model, KillingRate gamma, double x_max,
                              double h_grid = 1e-3,
                              std::optional<ScaleMethod> method = std::nullopt);

  double w(double x) const;
  double w_prime(double x) const;
  double z(double x) const;
  double z_prime(double x) const;

  const LevyModel& model() const { return model_; }
  double gamma() const { return gamma_; }
  double phi() const { return phi_; }
  double x_max() const { return x_max_; }
  double h_grid() const { return h_; }
  ScaleMethod method() const { return method_; }
  const std::vector<ScaleGridPoint>& grid() const { return grid_; }

  /// Grid dump with header x,W,Wprime,Z.
  void write_csv(std::ostream& out) const;

 private:
  ScaleEvaluator(const LevyModel& model, double gamma, double phi, double x_max);

  void check_range(double x, const char* what) const;
  void build_closed_form(double h_grid);
  void build_inversion(double h_grid);

  double closed_w(double x) const;
  double closed_w_prime(double x) const;
  double closed_z(double x) const;

  // Locates the cell of x and its local coordinate.
  std::size_t cell_of(double x, double& s) const;

  LevyModel model_;
  double gamma_;
  double phi_;
  double x_max_;
  double h_ = 0.0;
  ScaleMethod method_ = ScaleMethod::ClosedForm;

  // Closed-form Brownian roots of psi = gamma.
  double root_plus_ = 0.0;
  double root_minus_ = 0.0;
  double closed_scale_ = 0.0;

  std::vector<ScaleGridPoint> grid_;
  std::vector<double> slope_;     // limited Hermite slopes
  std::vector<double> integral_;  // int_0^{x_i} W
};

}  // namespace levyfluct
