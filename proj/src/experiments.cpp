#include "levyfluct/experiments.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <thread>

#include "levyfluct/fluctuation.hpp"
#include "levyfluct/parallel.hpp"
#include "levyfluct/rng.hpp"
#include "levyfluct/stats.hpp"

namespace levyfluct {

int default_worker_count() {
  if (const char* env = std::getenv("LEVYFLUCT_WORKERS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n >= 1) return static_cast<int>(std::min(n, 1024L));
  }
  return static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
}

PathSummary summarize_path(const SamplePath& path, std::optional<double> level) {
  const auto e = extremes_of(path, level);
  const auto& v = path.values;
  PathSummary s;
  s.index = path.index;
  s.kill_time = path.end_time;
  s.sup = e.sup;
  s.inf = e.inf;
  s.h_sup = e.h_sup;
  s.h_inf = e.h_inf;
  s.max_loss = e.max_loss;
  s.max_gain = e.max_gain;
  s.post_inf_sup = *std::max_element(v.begin() + static_cast<std::ptrdiff_t>(e.inf_index), v.end());
  s.post_sup_loss =
      e.sup - *std::min_element(v.begin() + static_cast<std::ptrdiff_t>(e.sup_index), v.end());
  s.rho = e.rho;
  s.truncated = path.truncated;
  return s;
}

std::vector<PathSummary> simulate_summaries(const SimConfig& cfg, int workers,
                                            std::optional<double> level) {
  cfg.validate();
  std::vector<PathSummary> out(cfg.n_paths);
  std::vector<SamplePath> buffers(static_cast<std::size_t>(std::max(1, workers)));
  parallel_for(cfg.n_paths, workers, [&](std::uint64_t i, int w) {
    auto& path = buffers[static_cast<std::size_t>(w)];
    simulate_path_into(cfg, i, {}, path);
    out[i] = summarize_path(path, level);
  });
  return out;
}

void write_samples_csv(const std::vector<PathSummary>& samples, std::ostream& out) {
  out << "seed_index,T,S,I,HS,HI,Mloss,Mgain,rho,truncated\n";
  for (const auto& s : samples) {
    out << fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{},{}\n",
                       s.index, s.kill_time, s.sup, s.inf, s.h_sup, s.h_inf, s.max_loss,
                       s.max_gain, s.rho ? fmt::format("{:.17g}", *s.rho) : std::string(),
                       s.truncated ? "true" : "false");
  }
}

InvariantCount count_invariant_violations(const SimConfig& cfg, int workers) {
  cfg.validate();
  std::vector<char> bad(cfg.n_paths, 0);
  std::vector<char> cut(cfg.n_paths, 0);
  std::vector<SamplePath> buffers(static_cast<std::size_t>(std::max(1, workers)));
  parallel_for(cfg.n_paths, workers, [&](std::uint64_t i, int w) {
    auto& path = buffers[static_cast<std::size_t>(w)];
    simulate_path_into(cfg, i, {}, path);
    bad[i] = path_invariants_hold(path, extremes_of(path)) ? 0 : 1;
    cut[i] = path.truncated ? 1 : 0;
  });
  InvariantCount count;
  count.paths = cfg.n_paths;
  count.violations = static_cast<std::uint64_t>(std::count(bad.begin(), bad.end(), 1));
  count.truncated = static_cast<std::uint64_t>(std::count(cut.begin(), cut.end(), 1));
  return count;
}

namespace {

constexpr std::array<std::size_t, 3> kStrides{1, 2, 4};
constexpr std::uint64_t kLevelStream = 0x6c6576656cULL;
constexpr std::uint64_t kReferenceSeedMix = 0x7265666572656e63ULL;

struct Extent {
  double sup;
  double inf;
};

// Extremes of the path observed every `stride` grid points (plus the end).
Extent strided_extent(const std::vector<double>& v, std::size_t stride) {
  Extent e{v.front(), v.front()};
  const std::size_t last = v.size() - 1;
  for (std::size_t i = 0; i < last; i += stride) {
    e.sup = std::max(e.sup, v[i]);
    e.inf = std::min(e.inf, v[i]);
  }
  e.sup = std::max(e.sup, v[last]);
  e.inf = std::min(e.inf, v[last]);
  return e;
}

double fraction(std::uint64_t hits, std::uint64_t total) {
  return total == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(total);
}

double unit_uniform(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

ScaleEvaluator evaluator_for(const ExperimentSpec& spec, double x_needed) {
  return ScaleEvaluator::build(spec.model, KillingRate(spec.gamma),
                               std::max(spec.x_max, x_needed), spec.h_grid);
}

void run_joint_law(const ExperimentSpec& spec, int workers, ExperimentReport& report) {
  const auto cfg = spec.sim_config();
  std::vector<std::array<Extent, kStrides.size()>> extents(cfg.n_paths);
  std::vector<char> cut(cfg.n_paths, 0);
  std::vector<SamplePath> buffers(static_cast<std::size_t>(std::max(1, workers)));
  parallel_for(cfg.n_paths, workers, [&](std::uint64_t i, int w) {
    auto& path = buffers[static_cast<std::size_t>(w)];
    simulate_path_into(cfg, i, {}, path);
    cut[i] = path.truncated ? 1 : 0;
    for (std::size_t k = 0; k < kStrides.size(); ++k) {
      extents[i][k] = strided_extent(path.values, kStrides[k]);
    }
  });
  report.paths_simulated = cfg.n_paths;
  report.truncated = static_cast<std::uint64_t>(std::count(cut.begin(), cut.end(), 1));
  const std::uint64_t used = cfg.n_paths - report.truncated;

  double x_needed = 0.0;
  for (double a : spec.a_values) {
    for (double b : spec.b_values) x_needed = std::max(x_needed, b - a);
  }
  const auto ev = evaluator_for(spec, x_needed);

  std::size_t monotone = 0;
  std::size_t points = 0;
  for (double a : spec.a_values) {
    for (double b : spec.b_values) {
      const double analytic = joint_sup_inf_cdf(ev, Window(a, b));
      std::array<double, kStrides.size()> gaps{};
      for (std::size_t k = 0; k < kStrides.size(); ++k) {
        std::uint64_t hits = 0;
        for (std::uint64_t i = 0; i < cfg.n_paths; ++i) {
          if (!cut[i] && a < extents[i][k].inf && extents[i][k].sup < b) ++hits;
        }
        const double empirical = fraction(hits, used);
        gaps[k] = std::abs(empirical - analytic);
        const std::string label = k == 0 ? fmt::format("a={:g};b={:g}", a, b)
                                         : fmt::format("a={:g};b={:g};dt*{}", a, b, kStrides[k]);
        report.add_row(label, b - a, analytic, empirical, used, spec.tolerance, k == 0);
      }
      ++points;
      if (gaps[0] <= gaps[1] && gaps[1] <= gaps[2]) ++monotone;
    }
  }
  report.add_check("dt_refinement_monotone", static_cast<double>(monotone),
                   static_cast<double>(points), monotone == points, false,
                   "grid points whose gap shrinks from 4dt to 2dt to dt");
}

void run_sup_marginal(const ExperimentSpec& spec, int workers, ExperimentReport& report) {
  const auto cfg = spec.sim_config();
  std::vector<std::array<double, kStrides.size()>> sups(cfg.n_paths);
  std::vector<char> cut(cfg.n_paths, 0);
  std::vector<SamplePath> buffers(static_cast<std::size_t>(std::max(1, workers)));
  parallel_for(cfg.n_paths, workers, [&](std::uint64_t i, int w) {
    auto& path = buffers[static_cast<std::size_t>(w)];
    simulate_path_into(cfg, i, {}, path);
    cut[i] = path.truncated ? 1 : 0;
    for (std::size_t k = 0; k < kStrides.size(); ++k) {
      sups[i][k] = strided_extent(path.values, kStrides[k]).sup;
    }
  });
  report.paths_simulated = cfg.n_paths;
  report.truncated = static_cast<std::uint64_t>(std::count(cut.begin(), cut.end(), 1));

  const double phi = spec.model.phi(spec.gamma);
  const auto exp_cdf = [phi](double x) { return x <= 0.0 ? 0.0 : -std::expm1(-phi * x); };

  std::array<std::vector<double>, kStrides.size()> samples;
  for (std::uint64_t i = 0; i < cfg.n_paths; ++i) {
    if (cut[i]) continue;
    for (std::size_t k = 0; k < kStrides.size(); ++k) samples[k].push_back(sups[i][k]);
  }
  const std::uint64_t used = samples[0].size();
  if (used == 0) throw InsufficientSampleError("insufficient conditional sample: no untruncated paths");

  std::array<double, kStrides.size()> ks{};
  for (std::size_t k = 0; k < kStrides.size(); ++k) {
    ks[k] = ks_statistic(exp_cdf, samples[k]);
    const std::string label = k == 0 ? "ks" : fmt::format("ks;dt*{}", kStrides[k]);
    report.add_row(label, spec.dt * static_cast<double>(kStrides[k]), 0.0, ks[k], used,
                   spec.tolerance, k == 0);
  }
  report.add_check("ks_decreasing_under_dt_halving", ks[0], ks[1], ks[0] < ks[1] && ks[1] < ks[2],
                   true, fmt::format("ks at dt, 2dt, 4dt: {:.5f} {:.5f} {:.5f}", ks[0], ks[1], ks[2]));

  const EmpiricalCdf cdf(samples[0]);
  for (double q : {0.25, 0.5, 1.0, 2.0, 3.0}) {
    const double x = q / phi;
    report.add_row(fmt::format("cdf;x={:g}", x), x, exp_cdf(x), cdf(x), used, spec.tolerance,
                   false);
  }
  const double mean = std::accumulate(samples[0].begin(), samples[0].end(), 0.0) /
                      static_cast<double>(used);
  const double rel = std::abs(mean * phi - 1.0);
  report.add_check("mean_relative_error", rel, spec.mean_tolerance, rel <= spec.mean_tolerance,
                   true, fmt::format("mean {:.6f} vs 1/Phi {:.6f}", mean, 1.0 / phi));
}

void run_post_inf_sup(const ExperimentSpec& spec, int workers, ExperimentReport& report) {
  const auto cfg = spec.sim_config();
  const auto paths = simulate_summaries(cfg, workers);
  report.paths_simulated = cfg.n_paths;
  report.truncated = static_cast<std::uint64_t>(
      std::count_if(paths.begin(), paths.end(), [](const auto& p) { return p.truncated; }));

  double x_needed = 0.0;
  for (double a : spec.a_values) {
    for (double b : spec.b_values) x_needed = std::max(x_needed, b - a);
  }
  const auto ev = evaluator_for(spec, x_needed);

  for (double a : spec.a_values) {
    // The post-infimum process lives above I_T, so its supremum is compared
    // relative to the realised infimum.
    std::vector<double> rises;
    for (const auto& p : paths) {
      if (!p.truncated && std::abs(p.inf - a) <= spec.delta_a) rises.push_back(p.post_inf_sup - p.inf);
    }
    if (rises.size() < spec.min_bin_count) {
      throw InsufficientSampleError(
          fmt::format("insufficient conditional sample in bin |I_T - ({:g})| <= {:g}: {} < {}", a,
                      spec.delta_a, rises.size(), spec.min_bin_count));
    }
    const EmpiricalCdf cdf(std::move(rises));
    for (double b : spec.b_values) {
      report.add_row(fmt::format("a={:g};b={:g}", a, b), b, post_inf_sup_cdf(ev, a, b),
                     cdf(b - a), cdf.size(), spec.tolerance);
    }
  }
}

void run_max_loss_post_sup(const ExperimentSpec& spec, int workers, ExperimentReport& report) {
  const auto cfg = spec.sim_config();
  const auto paths = simulate_summaries(cfg, workers);
  report.paths_simulated = cfg.n_paths;
  report.truncated = static_cast<std::uint64_t>(
      std::count_if(paths.begin(), paths.end(), [](const auto& p) { return p.truncated; }));

  double x_needed = 0.0;
  for (double a : spec.a_values) {
    for (double b : spec.b_values) x_needed = std::max(x_needed, b - a);
  }
  const auto ev = evaluator_for(spec, x_needed);

  for (double a : spec.a_values) {
    for (double b : spec.b_values) {
      std::vector<double> losses;
      for (const auto& p : paths) {
        if (p.truncated || std::abs(p.inf - a) > spec.delta_a || std::abs(p.sup - b) > spec.delta_b) {
          continue;
        }
        if (p.h_inf < p.h_sup) losses.push_back(p.post_sup_loss);
      }
      if (losses.size() < spec.min_bin_count) {
        throw InsufficientSampleError(fmt::format(
            "insufficient conditional sample in bin |I_T - ({:g})| <= {:g}, |S_T - {:g}| <= {:g}, "
            "H_I < H_S: {} < {}",
            a, spec.delta_a, b, spec.delta_b, losses.size(), spec.min_bin_count));
      }
      const EmpiricalCdf cdf(std::move(losses));
      for (double d : spec.d_values) {
        report.add_row(fmt::format("a={:g};b={:g};d={:g}", a, b, d), d,
                       max_loss_post_sup_cdf(ev, d, a, b), cdf.below(d), cdf.size(),
                       spec.tolerance);
      }
    }
  }
}

struct PreSupSample {
  bool used = false;
  double duration = 0.0;
  double value = 0.0;
};

void run_esscher_presup(const ExperimentSpec& spec, int workers, ExperimentReport& report) {
  const auto cfg = spec.sim_config();
  const double b = spec.b_values.front();
  const double lo = b - spec.delta_b;
  const double hi = b + spec.delta_b;
  const auto eval_index = static_cast<std::size_t>(std::llround(spec.t_eval / spec.dt));

  std::vector<PreSupSample> direct(cfg.n_paths);
  std::vector<char> cut(cfg.n_paths, 0);
  std::vector<SamplePath> buffers(static_cast<std::size_t>(std::max(1, workers)));
  parallel_for(cfg.n_paths, workers, [&](std::uint64_t i, int w) {
    auto& path = buffers[static_cast<std::size_t>(w)];
    simulate_path_into(cfg, i, {}, path);
    cut[i] = path.truncated ? 1 : 0;
    if (path.truncated) return;
    const auto e = extremes_of(path);
    if (e.sup < lo || e.sup > hi) return;
    direct[i] = {true, e.h_sup, path.values[std::min(eval_index, e.sup_index)]};
  });
  report.paths_simulated = cfg.n_paths;
  report.truncated = static_cast<std::uint64_t>(std::count(cut.begin(), cut.end(), 1));

  std::vector<double> direct_duration;
  std::vector<double> direct_value;
  for (const auto& s : direct) {
    if (!s.used) continue;
    direct_duration.push_back(s.duration);
    direct_value.push_back(s.value);
  }
  const std::size_t n_cond = direct_duration.size();
  if (n_cond < spec.min_conditional) {
    throw InsufficientSampleError(
        fmt::format("insufficient conditional sample in bin |S_T - {:g}| <= {:g}: {} < {}", b,
                    spec.delta_b, n_cond, spec.min_conditional));
  }

  // Under the conditioning S_T is Exp(Phi) restricted to the bin, so each
  // reference path runs to a level drawn from that law.
  const KillingRate gamma(spec.gamma);
  const double phi = spec.model.phi(spec.gamma);
  SimConfig ref_cfg{esscher_tilt(spec.model, gamma), gamma, spec.dt, spec.n_reference,
                    spec.seed ^ kReferenceSeedMix, spec.t_cap};
  const double mass_lo = std::exp(-phi * lo);
  const double mass_hi = std::exp(-phi * hi);
  std::vector<PreSupSample> reference(spec.n_reference);
  std::vector<SamplePath> ref_buffers(static_cast<std::size_t>(std::max(1, workers)));
  parallel_for(spec.n_reference, workers, [&](std::uint64_t j, int w) {
    const double u = unit_uniform(splitmix64(stream_seed(spec.seed, kLevelStream, j)));
    const double level = -std::log(mass_lo - u * (mass_lo - mass_hi)) / phi;
    SimulateOptions opts;
    opts.stop_above = level;
    opts.killed = false;
    auto& path = ref_buffers[static_cast<std::size_t>(w)];
    simulate_path_into(ref_cfg, j, opts, path);
    if (!path.stopped_at_level) return;
    // Upward passage is continuous, so the stopped value is the level itself;
    // the grid overshoot is a discretisation artefact.
    const std::size_t last = path.values.size() - 1;
    reference[j] = {true, path.end_time, eval_index < last ? path.values[eval_index] : level};
  });
  std::vector<double> ref_duration;
  std::vector<double> ref_value;
  for (const auto& s : reference) {
    if (!s.used) continue;
    ref_duration.push_back(s.duration);
    ref_value.push_back(s.value);
  }
  report.discarded = spec.n_reference - ref_duration.size();
  report.paths_simulated += spec.n_reference;
  if (ref_duration.empty()) throw InsufficientSampleError("insufficient reference sample: no tilted path reached its level");

  const double ks_duration = ks_two_sample(direct_duration, ref_duration);
  const double ks_value = ks_two_sample(direct_value, ref_value);
  report.add_row("ks;duration", b, 0.0, ks_duration, n_cond, spec.tolerance);
  report.add_row(fmt::format("ks;value_at_t={:g}", spec.t_eval), spec.t_eval, 0.0, ks_value,
                 n_cond, spec.tolerance);
  report.add_check("n_conditional", static_cast<double>(n_cond),
                   static_cast<double>(spec.min_conditional), n_cond >= spec.min_conditional, true,
                   fmt::format("reference paths used {}", ref_duration.size()));
}

void run_post_rho_sde(const ExperimentSpec& spec, int workers, ExperimentReport& report) {
  const auto cfg = spec.sim_config();
  const double b = spec.b_values.front();
  const auto offset = static_cast<std::size_t>(std::llround(spec.t_eval / spec.dt));
  const auto ev = evaluator_for(spec, 0.0);

  struct DirectSample {
    bool used = false;
    bool beyond_grid = false;
    double level = 0.0;
    double value = 0.0;
  };
  std::vector<DirectSample> direct(cfg.n_paths);
  std::vector<char> cut(cfg.n_paths, 0);
  std::vector<SamplePath> buffers(static_cast<std::size_t>(std::max(1, workers)));
  SimulateOptions stop;
  stop.stop_above = b;
  parallel_for(cfg.n_paths, workers, [&](std::uint64_t i, int w) {
    auto& path = buffers[static_cast<std::size_t>(w)];
    simulate_path_into(cfg, i, stop, path);
    cut[i] = path.truncated ? 1 : 0;
    if (!path.stopped_at_level) return;
    const auto e = extremes_of(path, b);
    const std::size_t rho = *e.rho_index;
    const double inf = path.values[rho];
    const double level = b - inf;
    if (level > ev.x_max()) {
      direct[i].beyond_grid = true;
      return;
    }
    direct[i] = {true, false, level,
                 path.values[std::min(rho + offset, *e.passage_index)] - inf};
  });
  report.paths_simulated = cfg.n_paths;
  report.truncated = static_cast<std::uint64_t>(std::count(cut.begin(), cut.end(), 1));
  const auto beyond = static_cast<std::uint64_t>(
      std::count_if(direct.begin(), direct.end(), [](const auto& s) { return s.beyond_grid; }));

  std::vector<double> levels;
  std::vector<double> direct_values;
  for (const auto& s : direct) {
    if (!s.used) continue;
    levels.push_back(s.level);
    direct_values.push_back(s.value);
  }
  if (levels.size() < spec.min_bin_count) {
    throw InsufficientSampleError(fmt::format(
        "insufficient conditional sample: {} paths crossed {:g} (need {})", levels.size(), b,
        spec.min_bin_count));
  }

  // Each SDE path borrows the level b - I_rho of a direct path, so both
  // samples mix over the same law of the conditioning level.
  SimConfig sde_cfg = cfg;
  sde_cfg.n_paths = spec.n_reference;
  auto factors = spec.eps_factors;
  std::sort(factors.begin(), factors.end(), std::greater<>());
  std::vector<std::vector<double>> sde_values(factors.size());
  std::uint64_t discarded = 0;
  for (std::size_t f = 0; f < factors.size(); ++f) {
    std::vector<double> values(spec.n_reference);
    std::vector<char> dropped(spec.n_reference, 0);
    parallel_for(spec.n_reference, workers, [&](std::uint64_t j, int) {
      PostRhoOptions opts;
      opts.level = levels[j % levels.size()];
      opts.eps = factors[f] * opts.level;
      opts.horizon = spec.t_eval;
      const auto p = simulate_post_rho(ev, sde_cfg, j, opts);
      dropped[j] = p.discarded ? 1 : 0;
      values[j] = p.discarded ? 0.0 : p.values.back();
    });
    for (std::uint64_t j = 0; j < spec.n_reference; ++j) {
      if (dropped[j]) {
        ++discarded;
      } else {
        sde_values[f].push_back(values[j]);
      }
    }
    const double ks = ks_two_sample(sde_values[f], direct_values);
    report.add_row(fmt::format("ks;eps={:g}*level", factors[f]), factors[f], 0.0, ks,
                   sde_values[f].size(), spec.tolerance);
  }
  report.discarded = discarded;
  report.paths_simulated += spec.n_reference * factors.size();

  // Common random numbers across eps: successive eps should move the law less.
  bool converging = true;
  std::string detail;
  double last = std::numeric_limits<double>::infinity();
  for (std::size_t f = 0; f + 1 < factors.size(); ++f) {
    const double step = ks_two_sample(sde_values[f], sde_values[f + 1]);
    detail += fmt::format("{}ks(eps={:g}, eps={:g})={:.5f}", detail.empty() ? "" : "; ",
                          factors[f], factors[f + 1], step);
    converging = converging && step <= last;
    last = step;
  }
  report.add_check("eps_convergence", last, 0.0, converging, true, detail);
  report.add_check("levels_beyond_grid", static_cast<double>(beyond), 0.0, true, false,
                   fmt::format("direct sample size {}", direct_values.size()));
}

// Composite Simpson over the grid cells with the cell midpoints.
template <class Fn>
double simpson(Fn&& f, double x0, double x1, std::size_t cells) {
  const double h = (x1 - x0) / static_cast<double>(cells);
  double sum = 0.0;
  for (std::size_t k = 0; k < cells; ++k) {
    const double left = x0 + static_cast<double>(k) * h;
    sum += f(left) + 4.0 * f(left + 0.5 * h) + f(left + h);
  }
  return sum * h / 6.0;
}

void run_scale_selftest(const ExperimentSpec& spec, ExperimentReport& report) {
  // Integrand tails decay at least like exp(-(lambda - Phi) x) with
  // lambda - Phi >= 0.5; 40 leaves them below 1e-8.
  constexpr double kLaplaceRange = 40.0;
  constexpr std::array<double, 3> kLambdaOffsets{0.5, 1.0, 2.0};
  for (double g : spec.gammas) {
    const KillingRate gamma(g);
    const double phi = spec.model.phi(g);

    const auto wide = ScaleEvaluator::build(spec.model, gamma, kLaplaceRange, spec.h_grid);
    const auto cells = static_cast<std::size_t>(std::llround(kLaplaceRange / spec.h_grid));
    for (double offset : kLambdaOffsets) {
      const double lambda = phi + offset;
      const double exact = 1.0 / (spec.model.psi(lambda) - g);
      const double quad = simpson(
          [&](double x) { return std::exp(-lambda * x) * wide.w(x); }, 0.0, kLaplaceRange, cells);
      report.add_row(fmt::format("laplace;gamma={:g};lambda=Phi+{:g}", g, offset), lambda, exact,
                     quad, cells, spec.tolerance * std::abs(exact));
    }

    const auto ev = ScaleEvaluator::build(spec.model, gamma, spec.x_max, spec.h_grid);
    double worst = 0.0;
    double worst_x = 0.0;
    double integral = 0.0;
    const auto& grid = ev.grid();
    for (std::size_t k = 0; k < grid.size() && grid[k].x <= spec.x_max; ++k) {
      if (k > 0) {
        integral += simpson([&](double x) { return ev.w(x); }, grid[k - 1].x, grid[k].x, 1);
      }
      const double z = ev.z(grid[k].x);
      const double err = std::abs(z - 1.0 - g * integral) / std::max(1.0, z);
      if (err > worst) {
        worst = err;
        worst_x = grid[k].x;
      }
    }
    report.add_row(fmt::format("z_consistency;gamma={:g}", g), worst_x, 0.0, worst, grid.size(),
                   spec.z_tolerance);

    if (spec.model.is_brownian()) {
      const auto inverted =
          ScaleEvaluator::build(spec.model, gamma, spec.x_max, spec.h_grid, ScaleMethod::Inversion);
      const double x_hi = std::min(5.0, spec.x_max);
      struct Worst {
        double err = 0.0;
        double x = 0.0;
      };
      std::array<Worst, 3> w{};
      std::uint64_t points = 0;
      for (double x = 0.01;; x += 0.00137) {
        x = std::min(x, x_hi);
        const std::array<double, 3> exact{ev.w(x), ev.w_prime(x), ev.z(x)};
        const std::array<double, 3> approx{inverted.w(x), inverted.w_prime(x), inverted.z(x)};
        for (std::size_t k = 0; k < 3; ++k) {
          const double err = std::abs(approx[k] - exact[k]) / std::abs(exact[k]);
          if (err > w[k].err) w[k] = {err, x};
        }
        ++points;
        if (x == x_hi) break;
      }
      const std::array<const char*, 3> names{"W", "Wprime", "Z"};
      for (std::size_t k = 0; k < 3; ++k) {
        report.add_row(fmt::format("inversion_vs_closed;{};gamma={:g}", names[k], g), w[k].x, 0.0,
                       w[k].err, points, spec.inversion_tolerance);
      }
    }
  }
}

}  // namespace

ExperimentReport run_experiment(const ExperimentSpec& spec, int workers) {
  spec.validate();
  const auto start = std::chrono::steady_clock::now();
  ExperimentReport report;
  report.id = spec.id;
  report.kind = spec.kind;
  report.config = spec_to_json(spec);
  report.workers = std::max(1, workers);
  switch (spec.kind) {
    case ExperimentKind::JointLaw: run_joint_law(spec, workers, report); break;
    case ExperimentKind::SupMarginal: run_sup_marginal(spec, workers, report); break;
    case ExperimentKind::PostInfSup: run_post_inf_sup(spec, workers, report); break;
    case ExperimentKind::MaxLossPostSup: run_max_loss_post_sup(spec, workers, report); break;
    case ExperimentKind::EsscherPresup: run_esscher_presup(spec, workers, report); break;
    case ExperimentKind::PostRhoSde: run_post_rho_sde(spec, workers, report); break;
    case ExperimentKind::ScaleSelftest: run_scale_selftest(spec, report); break;
  }
  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace levyfluct
