#include "levyfluct/simulator.hpp"

#include <boost/random/exponential_distribution.hpp>
#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "levyfluct/rng.hpp"

namespace levyfluct {

namespace {

using Engine = boost::random::mt19937_64;

constexpr std::uint64_t kGaussStream = 0x6761757373ULL;
constexpr std::uint64_t kAuxStream = 0x6a756d7073ULL;

}  // namespace

void SimConfig::validate() const {
  if (!(dt > 0.0) || dt > 1e-2) throw std::invalid_argument("SimConfig: dt must lie in (0, 1e-2]");
  if (n_paths < 1) throw std::invalid_argument("SimConfig: n_paths must be >= 1");
  if (t_cap != 0.0 && !(t_cap >= 10.0 / gamma.value())) {
    throw std::invalid_argument("SimConfig: t_cap must be >= 10 / gamma");
  }
}

double SimConfig::effective_t_cap() const { return t_cap == 0.0 ? 10.0 / gamma.value() : t_cap; }

std::vector<double> SamplePath::times() const {
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = time(i);
  return out;
}

void simulate_path_into(const SimConfig& cfg, std::uint64_t path_index,
                        const SimulateOptions& options, SamplePath& out) {
  cfg.validate();
  if (path_index >= cfg.n_paths) throw std::out_of_range("simulate_path: path_index >= n_paths");

  Engine gauss(stream_seed(cfg.seed, kGaussStream, path_index));
  Engine aux(stream_seed(cfg.seed, kAuxStream, path_index));
  boost::random::normal_distribution<double> normal;
  boost::random::exponential_distribution<double> unit_exp;

  const double t_cap = cfg.effective_t_cap();
  const double drawn_kill = unit_exp(aux) / cfg.gamma.value();
  const double kill = options.killed ? drawn_kill : std::numeric_limits<double>::infinity();
  const double end = std::min(kill, t_cap);

  out.index = path_index;
  out.dt = cfg.dt;
  out.kill_time = kill;
  out.truncated = kill > t_cap;
  out.stopped_at_level = false;
  out.values.clear();
  out.jumps.clear();

  const double dt = cfg.dt;
  const auto full_cells = static_cast<std::size_t>(std::floor(end / dt));
  out.values.reserve(full_cells + 2);

  const double mu = cfg.model.drift();
  const double sigma = cfg.model.gaussian();
  const double rate = cfg.model.jump_rate();
  const double eta = cfg.model.jump_eta();
  double next_jump = rate > 0.0 ? unit_exp(aux) / rate : std::numeric_limits<double>::infinity();
  const bool stopping = options.stop_above.has_value();
  const double level = options.stop_above.value_or(0.0);

  double x = 0.0;
  out.values.push_back(x);
  const double mean_full = mu * dt;
  const double scale_full = sigma * std::sqrt(dt);

  auto advance = [&](double mean, double scale, double cell_end) {
    x += mean + scale * normal(gauss);
    while (next_jump <= cell_end) {
      const double size = -unit_exp(aux) / eta;
      x += size;
      out.jumps.push_back({next_jump, size});
      next_jump += unit_exp(aux) / rate;
    }
    out.values.push_back(x);
  };

  for (std::size_t k = 1; k <= full_cells; ++k) {
    const double cell_end = static_cast<double>(k) * dt;
    advance(mean_full, scale_full, cell_end);
    if (stopping && x > level) {
      out.end_time = cell_end;
      out.stopped_at_level = true;
      out.truncated = false;
      return;
    }
  }
  const double partial = end - static_cast<double>(full_cells) * dt;
  if (partial > 1e-12 * dt) {
    advance(mu * partial, sigma * std::sqrt(partial), end);
    out.stopped_at_level = stopping && x > level;
  }
  out.truncated = out.truncated && !out.stopped_at_level;
  out.end_time = end;
}

SamplePath simulate_path(const SimConfig& cfg, std::uint64_t path_index,
                         const SimulateOptions& options) {
  SamplePath path;
  simulate_path_into(cfg, path_index, options, path);
  return path;
}

SamplePath coarsen(const SamplePath& path, std::size_t stride) {
  if (stride == 0) throw std::invalid_argument("coarsen: stride must be >= 1");
  SamplePath out;
  out.index = path.index;
  out.dt = path.dt * static_cast<double>(stride);
  out.kill_time = path.kill_time;
  out.end_time = path.end_time;
  out.truncated = path.truncated;
  out.stopped_at_level = path.stopped_at_level;
  out.jumps = path.jumps;
  const std::size_t last = path.values.size() - 1;
  out.values.reserve(last / stride + 2);
  for (std::size_t i = 0; i < last; i += stride) out.values.push_back(path.values[i]);
  out.values.push_back(path.values[last]);
  return out;
}

PathExtremes extremes_of(const SamplePath& path, std::optional<double> level) {
  if (path.values.empty()) throw std::invalid_argument("extremes_of: empty path");
  if (level && !(*level > 0.0)) throw std::domain_error("extremes_of: level must be > 0");

  PathExtremes e;
  const auto& v = path.values;
  e.sup = e.inf = v[0];
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double x = v[i];
    if (x >= e.sup) {
      e.sup = x;
      e.sup_index = i;
    }
    if (x <= e.inf) {
      e.inf = x;
      e.inf_index = i;
    }
    e.max_loss = std::max(e.max_loss, e.sup - x);
    e.max_gain = std::max(e.max_gain, x - e.inf);
    if (level && !e.passage_index && x > *level) {
      e.passage_index = i;
      e.rho_index = e.inf_index;
      e.rho = path.time(e.inf_index);
    }
  }
  e.h_sup = path.time(e.sup_index);
  e.h_inf = path.time(e.inf_index);
  return e;
}

PathSegment segment_of(const SamplePath& path, std::size_t first, std::size_t last) {
  if (first > last || last >= path.values.size()) {
    throw std::out_of_range("segment_of: invalid index range");
  }
  PathSegment seg;
  seg.times.reserve(last - first + 1);
  seg.values.assign(path.values.begin() + static_cast<std::ptrdiff_t>(first),
                    path.values.begin() + static_cast<std::ptrdiff_t>(last) + 1);
  const double t0 = path.time(first);
  for (std::size_t i = first; i <= last; ++i) seg.times.push_back(path.time(i) - t0);
  return seg;
}

PathDecomposition decompose_at_extremes(const SamplePath& path, const PathExtremes& extremes) {
  const std::size_t last = path.values.size() - 1;
  PathDecomposition out;
  out.pre_hs = segment_of(path, 0, extremes.sup_index);
  out.post_hs = segment_of(path, extremes.sup_index, last);
  out.post_hi = segment_of(path, extremes.inf_index, last);
  if (extremes.inf_index < extremes.sup_index) {
    out.intermediate = segment_of(path, extremes.inf_index, extremes.sup_index);
  }
  return out;
}

double max_drawdown(const std::vector<double>& values) {
  double peak = -std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (double x : values) {
    peak = std::max(peak, x);
    worst = std::max(worst, peak - x);
  }
  return worst;
}

bool path_invariants_hold(const SamplePath& path, const PathExtremes& e) {
  const double range = e.sup - e.inf;
  bool ok = e.inf <= 0.0 && 0.0 <= e.sup;
  ok = ok && 0.0 <= e.h_sup && e.h_sup <= path.kill_time;
  ok = ok && 0.0 <= e.h_inf && e.h_inf <= path.kill_time;
  ok = ok && 0.0 <= e.max_loss && e.max_loss <= range;
  ok = ok && 0.0 <= e.max_gain && e.max_gain <= range;
  if (e.inf_index < e.sup_index) ok = ok && e.max_gain == range;
  if (e.sup_index < e.inf_index) ok = ok && e.max_loss == range;
  for (double x : path.values) ok = ok && e.inf <= x && x <= e.sup;
  return ok;
}

double PostRhoPath::value_at(double t) const {
  if (times.empty()) throw std::logic_error("PostRhoPath: empty path");
  const auto it = std::upper_bound(times.begin(), times.end(), t * (1.0 + 1e-12));
  const auto i = static_cast<std::size_t>(it - times.begin());
  return values[i == 0 ? 0 : i - 1];
}

double post_rho_diffusion_drift(const ScaleEvaluator& ev, double z) {
  const double sigma = ev.model().gaussian();
  return ev.model().drift() + sigma * sigma * ev.w_prime(z) / ev.w(z);
}

PostRhoPath simulate_post_rho(const ScaleEvaluator& ev, const SimConfig& cfg,
                              std::uint64_t path_index, const PostRhoOptions& options) {
  cfg.validate();
  if (!(options.eps > 0.0)) throw std::domain_error("simulate_post_rho: eps must be > 0");
  if (!(options.level > options.eps)) throw std::domain_error("simulate_post_rho: level must exceed eps");
  if (options.level > ev.x_max()) {
    throw std::out_of_range(fmt::format("simulate_post_rho: level {:.6g} exceeds x_max {:.6g}",
                                        options.level, ev.x_max()));
  }
  if (!(options.kappa > 0.0)) throw std::domain_error("simulate_post_rho: kappa must be > 0");

  Engine gauss(stream_seed(cfg.seed ^ options.stream, kGaussStream, path_index));
  Engine aux(stream_seed(cfg.seed ^ options.stream, kAuxStream, path_index));
  boost::random::normal_distribution<double> normal;
  boost::random::exponential_distribution<double> unit_exp;
  boost::random::uniform_01<double> uniform;

  const double sigma = ev.model().gaussian();
  const double s2 = sigma * sigma;
  const double rate = ev.model().jump_rate();
  const double eta = ev.model().jump_eta();
  const double dt = cfg.dt;
  const double t_end = std::min(options.horizon, cfg.effective_t_cap());
  constexpr double kTinyW = 1e-12;

  PostRhoPath out;
  double z = options.eps;
  double t = 0.0;
  out.times.push_back(0.0);
  out.values.push_back(z);
  double next_jump = rate > 0.0 ? unit_exp(aux) / rate : std::numeric_limits<double>::infinity();

  for (std::size_t cell = 1; t < t_end; ++cell) {
    const double cell_end = std::min(static_cast<double>(cell) * dt, t_end);
    while (t < cell_end) {
      double h = std::min(cell_end - t, options.kappa * z * z / s2);
      double candidate = 0.0;
      int attempts = 0;
      for (;;) {
        candidate = z + post_rho_diffusion_drift(ev, z) * h + sigma * std::sqrt(h) * normal(gauss);
        if (candidate > options.level) break;
        if (candidate > 0.0 && ev.w(candidate) >= kTinyW) break;
        ++out.retries;
        if (++attempts > options.max_retries) {
          out.discarded = true;
          return out;
        }
        h *= 0.5;
      }
      ++out.substeps;
      t = (h == cell_end - t) ? cell_end : t + h;
      z = candidate;
      if (z > options.level) {
        out.exited = true;
        out.times.push_back(t);
        out.values.push_back(z);
        return out;
      }
      while (next_jump <= t) {
        const double size = -unit_exp(aux) / eta;
        const double u = uniform(aux);
        if (z + size > 0.0) {
          const double landed = ev.w(z + size);
          if (landed >= kTinyW && u * ev.w(z) < landed) z += size;
        }
        next_jump += unit_exp(aux) / rate;
      }
    }
    out.times.push_back(t);
    out.values.push_back(z);
  }
  return out;
}

}  // namespace levyfluct
