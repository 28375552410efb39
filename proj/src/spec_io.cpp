#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <utility>

#include "levyfluct/experiments.hpp"
#include "levyfluct/model_json.hpp"

namespace levyfluct {

namespace {

constexpr std::array<std::pair<ExperimentKind, const char*>, 7> kKindNames{{
    {ExperimentKind::JointLaw, "joint_law"},
    {ExperimentKind::SupMarginal, "sup_marginal"},
    {ExperimentKind::PostInfSup, "post_inf_sup"},
    {ExperimentKind::MaxLossPostSup, "max_loss_post_sup"},
    {ExperimentKind::EsscherPresup, "esscher_presup"},
    {ExperimentKind::PostRhoSde, "post_rho_sde"},
    {ExperimentKind::ScaleSelftest, "scale_selftest"},
}};

void fail(const ExperimentSpec& spec, const std::string& message) {
  throw std::invalid_argument(fmt::format("spec '{}': {}", spec.id, message));
}

bool is_monte_carlo(ExperimentKind kind) { return kind != ExperimentKind::ScaleSelftest; }

}  // namespace

std::string to_string(ExperimentKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

ExperimentKind experiment_kind_from_string(const std::string& name) {
  for (const auto& [k, n] : kKindNames) {
    if (name == n) return k;
  }
  throw std::invalid_argument("unknown experiment '" + name + "'");
}

void ExperimentSpec::validate() const {
  if (id.empty()) throw std::invalid_argument("spec: id must not be empty");
  if (!(gamma > 0.0)) fail(*this, "gamma must be > 0");
  if (!(x_max > 0.0)) fail(*this, "x_max must be > 0");
  if (!(h_grid > 0.0) || h_grid > x_max) fail(*this, "h_grid must lie in (0, x_max]");
  if (!(tolerance > 0.0)) fail(*this, "tolerance must be > 0");
  if (is_monte_carlo(kind)) {
    if (!(dt > 0.0) || dt > 1e-2) fail(*this, "dt must lie in (0, 1e-2]");
    if (n_paths < 1) fail(*this, "n_paths must be >= 1");
    if (t_cap != 0.0 && t_cap < 10.0 / gamma) fail(*this, "t_cap must be >= 10 / gamma");
  }
  auto need = [&](const std::vector<double>& v, const char* name) {
    if (v.empty()) fail(*this, fmt::format("{} must not be empty", name));
  };
  switch (kind) {
    case ExperimentKind::JointLaw:
      need(a_values, "a_values");
      need(b_values, "b_values");
      for (double a : a_values) {
        if (!(a < 0.0)) fail(*this, "a_values must be < 0");
        for (double b : b_values) {
          if (!(b > 0.0)) fail(*this, "b_values must be > 0");
          if (b - a > x_max) fail(*this, fmt::format("window ({}, {}) exceeds x_max", a, b));
        }
      }
      break;
    case ExperimentKind::SupMarginal:
      if (!(mean_tolerance > 0.0)) fail(*this, "mean_tolerance must be > 0");
      break;
    case ExperimentKind::PostInfSup:
      need(a_values, "a_values");
      need(b_values, "b_values");
      if (!(delta_a > 0.0)) fail(*this, "delta_a must be > 0");
      for (double a : a_values) {
        if (!(a < 0.0)) fail(*this, "a_values must be < 0");
        for (double b : b_values) {
          if (!(b > a)) fail(*this, fmt::format("b={} must exceed a={}", b, a));
          if (b - a > x_max) fail(*this, fmt::format("b - a = {} exceeds x_max", b - a));
        }
      }
      break;
    case ExperimentKind::MaxLossPostSup:
      need(a_values, "a_values");
      need(b_values, "b_values");
      need(d_values, "d_values");
      if (!(delta_a > 0.0) || !(delta_b > 0.0)) fail(*this, "delta_a and delta_b must be > 0");
      for (double a : a_values) {
        if (!(a < 0.0)) fail(*this, "a_values must be < 0");
        for (double b : b_values) {
          if (!(b > 0.0)) fail(*this, "b_values must be > 0");
          if (b - a > x_max) fail(*this, fmt::format("b - a = {} exceeds x_max", b - a));
          for (double d : d_values) {
            if (!(d > 0.0 && d < b - a)) fail(*this, fmt::format("d={} must lie in (0, b - a)", d));
          }
        }
      }
      break;
    case ExperimentKind::EsscherPresup:
      if (b_values.size() != 1 || !(b_values[0] > 0.0)) fail(*this, "needs exactly one b > 0");
      if (!(delta_b > 0.0) || delta_b >= b_values[0]) fail(*this, "delta_b must lie in (0, b)");
      if (n_reference < 1) fail(*this, "n_reference must be >= 1");
      if (!(t_eval > 0.0)) fail(*this, "t_eval must be > 0");
      break;
    case ExperimentKind::PostRhoSde:
      if (b_values.size() != 1 || !(b_values[0] > 0.0)) fail(*this, "needs exactly one b > 0");
      if (b_values[0] >= x_max) fail(*this, "b must be below x_max");
      need(eps_factors, "eps_factors");
      for (double f : eps_factors) {
        if (!(f > 0.0 && f < 1.0)) fail(*this, "eps_factors must lie in (0, 1)");
      }
      if (n_reference < 1) fail(*this, "n_reference must be >= 1");
      if (!(t_eval > 0.0)) fail(*this, "t_eval must be > 0");
      break;
    case ExperimentKind::ScaleSelftest:
      need(gammas, "gammas");
      for (double g : gammas) {
        if (!(g > 0.0)) fail(*this, "gammas must be > 0");
      }
      if (!(z_tolerance > 0.0) || !(inversion_tolerance > 0.0)) fail(*this, "tolerances must be > 0");
      break;
  }
}

SimConfig ExperimentSpec::sim_config() const {
  return SimConfig{model, KillingRate(gamma), dt, n_paths, seed, t_cap};
}

nlohmann::json spec_to_json(const ExperimentSpec& s) {
  nlohmann::json j;
  j["id"] = s.id;
  j["experiment"] = to_string(s.kind);
  j["model"] = model_to_json(s.model);
  j["gamma"] = s.gamma;
  j["dt"] = s.dt;
  j["n_paths"] = s.n_paths;
  j["seed"] = s.seed;
  j["t_cap"] = s.t_cap;
  j["a_values"] = s.a_values;
  j["b_values"] = s.b_values;
  j["d_values"] = s.d_values;
  j["delta_a"] = s.delta_a;
  j["delta_b"] = s.delta_b;
  j["tolerance"] = s.tolerance;
  j["mean_tolerance"] = s.mean_tolerance;
  j["z_tolerance"] = s.z_tolerance;
  j["inversion_tolerance"] = s.inversion_tolerance;
  j["min_bin_count"] = s.min_bin_count;
  j["min_conditional"] = s.min_conditional;
  j["n_reference"] = s.n_reference;
  j["t_eval"] = s.t_eval;
  j["eps_factors"] = s.eps_factors;
  j["gammas"] = s.gammas;
  j["x_max"] = s.x_max;
  j["h_grid"] = s.h_grid;
  return j;
}

ExperimentSpec spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("spec: expected a JSON object");
  ExperimentSpec s;
  s.kind = experiment_kind_from_string(j.at("experiment").get<std::string>());
  s.id = j.value("id", to_string(s.kind));
  s.model = model_from_json(j.at("model"));
  s.gamma = j.at("gamma").get<double>();
  s.dt = j.value("dt", s.dt);
  s.n_paths = j.value("n_paths", s.n_paths);
  s.seed = j.value("seed", s.seed);
  s.t_cap = j.value("t_cap", s.t_cap);
  s.a_values = j.value("a_values", s.a_values);
  s.b_values = j.value("b_values", s.b_values);
  s.d_values = j.value("d_values", s.d_values);
  s.delta_a = j.value("delta_a", s.delta_a);
  s.delta_b = j.value("delta_b", s.delta_b);
  s.tolerance = j.value("tolerance", s.tolerance);
  s.mean_tolerance = j.value("mean_tolerance", s.mean_tolerance);
  s.z_tolerance = j.value("z_tolerance", s.z_tolerance);
  s.inversion_tolerance = j.value("inversion_tolerance", s.inversion_tolerance);
  s.min_bin_count = j.value("min_bin_count", s.min_bin_count);
  s.min_conditional = j.value("min_conditional", s.min_conditional);
  s.n_reference = j.value("n_reference", s.n_reference);
  s.t_eval = j.value("t_eval", s.t_eval);
  s.eps_factors = j.value("eps_factors", s.eps_factors);
  s.gammas = j.value("gammas", s.gammas);
  s.x_max = j.value("x_max", s.x_max);
  s.h_grid = j.value("h_grid", s.h_grid);
  s.validate();
  return s;
}

ExperimentSpec load_spec(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open spec file " + file.string());
  return spec_from_json(nlohmann::json::parse(in));
}

std::vector<ExperimentSpec> default_specs() {
  const LevyModel bm = LevyModel::brownian(0.0, 1.0);
  const LevyModel cp = LevyModel::cp_exp(1.0, 1.0, 1.0, 2.0);
  std::vector<ExperimentSpec> out;

  for (const auto& [id, model] : {std::pair{"scale_selftest_bm", bm}, std::pair{"scale_selftest_cp", cp}}) {
    ExperimentSpec s;
    s.id = id;
    s.kind = ExperimentKind::ScaleSelftest;
    s.model = model;
    s.gamma = 0.5;
    s.gammas = {0.25, 0.5, 1.0};
    s.tolerance = 1e-4;
    s.z_tolerance = 1e-8;
    s.inversion_tolerance = 1e-6;
    s.x_max = 5.0;
    s.h_grid = 1e-3;
    s.n_paths = 0;
    out.push_back(s);
  }
  {
    ExperimentSpec s;
    s.id = "joint_law";
    s.kind = ExperimentKind::JointLaw;
    s.model = bm;
    s.gamma = 0.5;
    s.dt = 1e-4;
    s.n_paths = 200000;
    s.seed = 1001;
    s.a_values = {-0.5, -1.0, -1.5};
    s.b_values = {0.5, 1.0, 1.5};
    s.tolerance = 0.01;
    out.push_back(s);
  }
  {
    ExperimentSpec s;
    s.id = "sup_marginal";
    s.kind = ExperimentKind::SupMarginal;
    s.model = bm;
    s.gamma = 0.5;
    s.dt = 1e-4;
    s.n_paths = 100000;
    s.seed = 1002;
    s.tolerance = 0.015;
    s.mean_tolerance = 0.02;
    out.push_back(s);
  }
  {
    ExperimentSpec s;
    s.id = "post_inf_sup";
    s.kind = ExperimentKind::PostInfSup;
    s.model = bm;
    s.gamma = 0.5;
    s.dt = 1e-3;
    s.n_paths = 1000000;
    s.seed = 1003;
    s.a_values = {-0.5};
    s.b_values = {-0.25, 0.0, 0.5, 1.0, 2.0};
    s.delta_a = 0.05;
    s.tolerance = 0.03;
    out.push_back(s);
  }
  {
    ExperimentSpec s;
    s.id = "max_loss_post_sup";
    s.kind = ExperimentKind::MaxLossPostSup;
    s.model = bm;
    s.gamma = 0.5;
    s.dt = 1e-3;
    s.n_paths = 1000000;
    s.seed = 1004;
    s.a_values = {-1.0};
    s.b_values = {1.0};
    s.d_values = {0.5, 1.0, 1.5};
    s.delta_a = 0.1;
    s.delta_b = 0.1;
    s.tolerance = 0.05;
    s.min_bin_count = 500;
    out.push_back(s);
  }
  {
    ExperimentSpec s;
    s.id = "esscher_presup";
    s.kind = ExperimentKind::EsscherPresup;
    s.model = bm;
    s.gamma = 0.5;
    s.dt = 1e-4;
    s.n_paths = 330000;
    s.seed = 1005;
    s.b_values = {0.5};
    s.delta_b = 0.05;
    s.t_eval = 0.25;
    s.n_reference = 40000;
    s.min_conditional = 5000;
    s.tolerance = 0.02;
    out.push_back(s);
  }
  {
    ExperimentSpec s;
    s.id = "post_rho_sde";
    s.kind = ExperimentKind::PostRhoSde;
    s.model = bm;
    s.gamma = 0.5;
    s.dt = 1e-4;
    s.n_paths = 75000;
    s.seed = 1006;
    s.b_values = {2.0};
    s.t_eval = 0.25;
    s.eps_factors = {1e-2, 1e-3, 1e-4};
    s.n_reference = 10000;
    s.tolerance = 0.05;
    s.x_max = 12.0;
    out.push_back(s);
  }
  return out;
}

std::optional<ExperimentSpec> find_default_spec(const std::string& id) {
  for (auto& s : default_specs()) {
    if (s.id == id) return s;
  }
  return std::nullopt;
}

}  // namespace levyfluct
