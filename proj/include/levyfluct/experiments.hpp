#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "levyfluct/levy_model.hpp"
#include "levyfluct/simulator.hpp"

namespace levyfluct {

enum class ExperimentKind {
  JointLaw,
  SupMarginal,
  PostInfSup,
  MaxLossPostSup,
  EsscherPresup,
  PostRhoSde,
  ScaleSelftest,
};

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& name);

/// A conditioning bin held fewer paths than the spec demands.
class InsufficientSampleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentSpec {
  std::string id;
  ExperimentKind kind = ExperimentKind::JointLaw;
  LevyModel model = LevyModel::brownian(0.0, 1.0);
  double gamma = 0.5;
  double dt = 1e-4;
  std::uint64_t n_paths = 1000;
  std::uint64_t seed = 1;
  double t_cap = 0.0;  // 0 selects 10 / gamma

  // Level grids. Their meaning per experiment:
  //   joint_law          a x b window corners
  //   post_inf_sup       conditioning levels a, CDF levels b (b > a)
  //   max_loss_post_sup  conditioning levels a, b and loss thresholds d
  //   esscher_presup     b: supremum level
  //   post_rho_sde       b: first-passage level
  std::vector<double> a_values;
  std::vector<double> b_values;
  std::vector<double> d_values;
  double delta_a = 0.0;
  double delta_b = 0.0;

  double tolerance = 0.01;
  double mean_tolerance = 0.02;       // sup_marginal: relative error of E[S_T]
  double z_tolerance = 1e-8;          // scale_selftest
  double inversion_tolerance = 1e-6;  // scale_selftest
  std::size_t min_bin_count = 500;
  std::size_t min_conditional = 0;
  std::uint64_t n_reference = 0;  // tilted paths / SDE paths
  double t_eval = 0.25;
  std::vector<double> eps_factors;
  std::vector<double> gammas;  // scale_selftest
  double x_max = 10.0;
  double h_grid = 1e-3;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
  SimConfig sim_config() const;
};

nlohmann::json spec_to_json(const ExperimentSpec& spec);
ExperimentSpec spec_from_json(const nlohmann::json& j);
ExperimentSpec load_spec(const std::filesystem::path& file);

/// The shipped experiment specs; the acceptance suite runs exactly these.
std::vector<ExperimentSpec> default_specs();
std::optional<ExperimentSpec> find_default_spec(const std::string& id);

struct ReportRow {
  std::string label;
  double x = 0.0;
  double analytic = 0.0;
  double empirical = 0.0;
  std::uint64_t count = 0;
  double gap = 0.0;
  double tolerance = 0.0;
  bool gating = true;

  bool passed() const { return !gating || gap <= tolerance; }
};

struct ReportCheck {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool passed = false;
  bool gating = true;
  std::string detail;
};

struct ExperimentReport {
  std::string id;
  ExperimentKind kind = ExperimentKind::JointLaw;
  nlohmann::json config;
  std::vector<ReportRow> rows;
  std::vector<ReportCheck> checks;
  std::uint64_t paths_simulated = 0;
  std::uint64_t truncated = 0;
  std::uint64_t discarded = 0;
  double runtime_seconds = 0.0;
  int workers = 1;

  void add_row(std::string label, double x, double analytic, double empirical,
               std::uint64_t count, double tolerance, bool gating = true);
  void add_check(std::string name, double value, double threshold, bool passed,
                 bool gating = true, std::string detail = {});

  double max_gap() const;
  bool passed() const;
};

/// Simulates once and compares every grid point against the analytic layer.
ExperimentReport run_experiment(const ExperimentSpec& spec, int workers);

/// CSV: experiment,label,x,analytic,empirical,count,gap,tolerance,gating,pass
std::string report_csv(const ExperimentReport& report);
std::string report_summary(const ExperimentReport& report);
/// Writes <dir>/<id>.csv and <dir>/<id>.summary.txt.
void emit_report(const ExperimentReport& report, const std::filesystem::path& dir);

/// Per-path record behind every Monte Carlo experiment.
struct PathSummary {
  std::uint64_t index = 0;
  double kill_time = 0.0;
  double sup = 0.0;
  double inf = 0.0;
  double h_sup = 0.0;
  double h_inf = 0.0;
  double max_loss = 0.0;
  double max_gain = 0.0;
  double post_inf_sup = 0.0;   // sup over [H_I, T]
  double post_sup_loss = 0.0;  // maximum drawdown over [H_S, T]
  std::optional<double> rho;
  bool truncated = false;
};

PathSummary summarize_path(const SamplePath& path, std::optional<double> level = std::nullopt);
std::vector<PathSummary> simulate_summaries(const SimConfig& cfg, int workers,
                                            std::optional<double> level = std::nullopt);
/// seed_index,T,S,I,HS,HI,Mloss,Mgain,rho,truncated
void write_samples_csv(const std::vector<PathSummary>& samples, std::ostream& out);

struct InvariantCount {
  std::uint64_t paths = 0;
  std::uint64_t violations = 0;
  std::uint64_t truncated = 0;
};
/// Exact per-path invariants over all cfg.n_paths paths.
InvariantCount count_invariant_violations(const SimConfig& cfg, int workers);

}  // namespace levyfluct
