#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "levyfluct/levy_model.hpp"
#include "levyfluct/scale_functions.hpp"

namespace levyfluct {

struct SimConfig {
  LevyModel model;
  KillingRate gamma;
  double dt = 1e-3;
  std::uint64_t n_paths = 1;
  std::uint64_t seed = 0;
  double t_cap = 0.0;  // 0 selects 10 / gamma

  /// Throws std::invalid_argument on dt > 1e-2, n_paths == 0 or t_cap < 10 / gamma.
  void validate() const;
  double effective_t_cap() const;
};

struct JumpMark {
  double time;
  double size;  // < 0
};

/// One killed trajectory on the grid 0, dt, 2 dt, ..., with a final partial
/// cell ending at end_time (= min(kill_time, t_cap), or the first grid time
/// above the stop level when one was requested).
struct SamplePath {
  std::uint64_t index = 0;
  double dt = 0.0;
  double kill_time = 0.0;
  double end_time = 0.0;
  bool truncated = false;
  bool stopped_at_level = false;
  std::vector<double> values;
  std::vector<JumpMark> jumps;

  std::size_t size() const { return values.size(); }
  double time(std::size_t i) const {
    return i + 1 == values.size() ? end_time : static_cast<double>(i) * dt;
  }
  std::vector<double> times() const;
};

struct SimulateOptions {
  /// Stop at the first grid time where X exceeds this level.
  std::optional<double> stop_above;
  /// Without killing the path runs until the stop level or t_cap.
  bool killed = true;
};

/// Euler grid path: N(drift dt, sigma^2 dt) increments plus exact compound
/// Poisson arrivals added to the cell that contains them. Deterministic in
/// (cfg.seed, path_index); the Gaussian and jump/killing streams are separate
/// so a zero-rate jump model reproduces the Brownian path bit for bit.
SamplePath simulate_path(const SimConfig& cfg, std::uint64_t path_index,
                         const SimulateOptions& options = {});
void simulate_path_into(const SimConfig& cfg, std::uint64_t path_index,
                        const SimulateOptions& options, SamplePath& out);

/// Keeps every stride-th grid point plus the final point: the same path
/// monitored on a grid stride times coarser.
SamplePath coarsen(const SamplePath& path, std::size_t stride);

struct PathExtremes {
  double sup = 0.0;
  double inf = 0.0;
  double h_sup = 0.0;  // last time at the supremum
  double h_inf = 0.0;  // last time at the infimum
  std::size_t sup_index = 0;
  std::size_t inf_index = 0;
  double max_loss = 0.0;  // maximum drawdown
  double max_gain = 0.0;  // maximum drawup
  // Only with a level b and a passage above b within the path.
  std::optional<double> rho;
  std::optional<std::size_t> rho_index;
  std::optional<std::size_t> passage_index;
};

/// Single pass over the path. With `level`, rho is the last time at the
/// running infimum before the first passage above the level.
PathExtremes extremes_of(const SamplePath& path, std::optional<double> level = std::nullopt);

struct PathSegment {
  std::vector<double> times;   // rebased to start at 0
  std::vector<double> values;  // original levels
  double length() const { return times.empty() ? 0.0 : times.back(); }
};

struct PathDecomposition {
  PathSegment pre_hs;
  PathSegment post_hs;
  PathSegment post_hi;
  std::optional<PathSegment> intermediate;  // only when h_inf < h_sup
};

PathSegment segment_of(const SamplePath& path, std::size_t first, std::size_t last);
PathDecomposition decompose_at_extremes(const SamplePath& path, const PathExtremes& extremes);

/// Largest peak-to-trough fall of a sequence.
double max_drawdown(const std::vector<double>& values);

struct PostRhoOptions {
  double level = 1.0;
  double eps = 1e-3;
  /// Simulated horizon; the path also stops at the level or at t_cap.
  double horizon = std::numeric_limits<double>::infinity();
  /// Local step bound kappa * z^2 / sigma^2 near the entrance boundary.
  double kappa = 0.01;
  int max_retries = 30;
  std::uint64_t stream = 0x9e3779b97f4a7c15ULL;
};

struct PostRhoPath {
  std::vector<double> times;
  std::vector<double> values;
  bool exited = false;    // crossed the level
  bool discarded = false; // retries exhausted
  std::uint64_t retries = 0;
  std::uint64_t substeps = 0;
  double value_at(double t) const;
};

/// Diffusive drift of the post-rho process, drift + sigma^2 W'(z) / W(z).
double post_rho_diffusion_drift(const ScaleEvaluator& ev, double z);

/// Post-rho process started at eps: Euler-Maruyama for the diffusive part
/// with steps refined near 0, and jumps from the Levy measure thinned with
/// acceptance W(z + y) / W(z), which is the jump compensator
/// Pi(dy) W(z + y) / W(z) of the conditioned process.
PostRhoPath simulate_post_rho(const ScaleEvaluator& ev, const SimConfig& cfg,
                              std::uint64_t path_index, const PostRhoOptions& options);

/// Exact per-path checks (ordering, drawdown bounds, extremes enclose the path).
bool path_invariants_hold(const SamplePath& path, const PathExtremes& extremes);

}  // namespace levyfluct
