#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "levyfluct/experiments.hpp"
#include "levyfluct/fluctuation.hpp"
#include "levyfluct/model_json.hpp"
#include "levyfluct/parallel.hpp"
#include "levyfluct/scale_functions.hpp"

using namespace levyfluct;

namespace {

// "start:stop:count" or a comma separated list.
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    double start = 0.0;
    double stop = 0.0;
    long count = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%ld", &start, &stop, &count) != 3 || count < 1) {
      throw std::invalid_argument("grid must look like start:stop:count, got '" + text + "'");
    }
    for (long i = 0; i < count; ++i) {
      out.push_back(count == 1 ? start : start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1));
    }
    return out;
  }
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    std::size_t used = 0;
    out.push_back(std::stod(item, &used));
    if (used != item.size()) throw std::invalid_argument("bad grid value '" + item + "'");
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::optional<ScaleMethod> parse_method(const std::string& name) {
  if (name == "auto") return std::nullopt;
  if (name == "closed_form") return ScaleMethod::ClosedForm;
  if (name == "inversion") return ScaleMethod::Inversion;
  throw std::invalid_argument("method must be auto, closed_form or inversion");
}

std::vector<ExperimentSpec> specs_for(const std::string& name, const std::string& spec_file) {
  if (!spec_file.empty()) {
    auto spec = load_spec(spec_file);
    if (name != "all" && name != spec.id && name != to_string(spec.kind)) {
      throw std::invalid_argument(fmt::format("spec file holds '{}', not '{}'", spec.id, name));
    }
    return {spec};
  }
  if (name == "all") return default_specs();
  if (auto spec = find_default_spec(name)) return {*spec};
  std::vector<ExperimentSpec> by_kind;
  for (auto& s : default_specs()) {
    if (to_string(s.kind) == name) by_kind.push_back(s);
  }
  if (by_kind.empty()) throw std::invalid_argument("no default experiment named '" + name + "'");
  return by_kind;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fluctuation identities of spectrally negative Levy processes, checked by simulation"};
  app.require_subcommand(1);
  int workers = default_worker_count();
  app.add_option("--workers", workers, "Worker threads (default: LEVYFLUCT_WORKERS or all cores)")
      ->check(CLI::PositiveNumber);

  std::string model_file;
  double gamma = 0.5;
  double x_max = 10.0;
  double h_grid = 1e-3;
  std::string method = "auto";
  std::string out_file;

  auto* scale = app.add_subcommand("scale", "Tabulate W, W' and Z on the evaluator grid");
  scale->add_option("--model", model_file, "Model JSON")->required()->check(CLI::ExistingFile);
  scale->add_option("--gamma", gamma, "Killing rate")->required();
  scale->add_option("--x-max", x_max, "Upper end of the grid");
  scale->add_option("--h-grid", h_grid, "Grid spacing");
  scale->add_option("--method", method, "auto, closed_form or inversion");
  scale->add_option("--out", out_file, "Output CSV (default stdout)");

  std::string functional;
  std::string grid_text;
  double a = -1.0;
  double b = 1.0;
  auto* eval = app.add_subcommand("eval", "Evaluate an analytic functional over a grid");
  eval->add_option("functional", functional,
                   "W, Wprime, Z, psi, exit_up, exit_down, one_sided_down, joint_sup_inf_cdf, "
                   "post_inf_sup_cdf, max_loss_post_sup_cdf, h_tilde, h_post_sup, h_intermediate")
      ->required();
  eval->add_option("--model", model_file, "Model JSON")->required()->check(CLI::ExistingFile);
  eval->add_option("--gamma", gamma, "Killing rate")->required();
  eval->add_option("--grid", grid_text, "start:stop:count or comma list")->required();
  eval->add_option("-a", a, "Lower level a < 0");
  eval->add_option("-b", b, "Upper level b");
  eval->add_option("--x-max", x_max, "Evaluator range");
  eval->add_option("--h-grid", h_grid, "Evaluator grid spacing");

  std::string experiment;
  std::string spec_file;
  std::string out_dir = "reports";
  auto* verify = app.add_subcommand("verify", "Run experiments and compare against the analytic layer");
  verify->add_option("experiment", experiment, "Experiment id, experiment kind or 'all'")->required();
  verify->add_option("--spec", spec_file, "Spec JSON")->check(CLI::ExistingFile);
  verify->add_option("--out", out_dir, "Report directory");

  std::uint64_t n_override = 0;
  auto* simulate = app.add_subcommand("simulate", "Dump per-path extremes as CSV");
  simulate->add_option("experiment", experiment, "Default experiment id (ignored with --spec)");
  simulate->add_option("--spec", spec_file, "Spec JSON")->check(CLI::ExistingFile);
  simulate->add_option("--n", n_override, "Override the number of paths");
  simulate->add_option("--out", out_file, "Output CSV (default stdout)");

  auto* defaults = app.add_subcommand("defaults", "Write the shipped experiment specs as JSON");
  defaults->add_option("--out", out_dir, "Directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*scale) {
      const auto ev = ScaleEvaluator::build(load_model(model_file), KillingRate(gamma), x_max,
                                            h_grid, parse_method(method));
      if (out_file.empty()) {
        ev.write_csv(std::cout);
      } else {
        std::ofstream out(out_file);
        if (!out) throw std::runtime_error("cannot write " + out_file);
        ev.write_csv(out);
      }
      return 0;
    }

    if (*eval) {
      const auto model = load_model(model_file);
      const auto grid = parse_grid(grid_text);
      double needed = 0.0;
      for (double x : grid) needed = std::max(needed, std::abs(x) + std::abs(a) + std::abs(b));
      const auto ev = ScaleEvaluator::build(model, KillingRate(gamma), std::max(x_max, needed), h_grid);
      const std::map<std::string, std::function<double(double)>> table{
          {"W", [&](double x) { return ev.w(x); }},
          {"Wprime", [&](double x) { return ev.w_prime(x); }},
          {"Z", [&](double x) { return ev.z(x); }},
          {"psi", [&](double x) { return model.psi(x); }},
          {"exit_up", [&](double x) { return exit_up_lt(ev, x, b); }},
          {"exit_down", [&](double x) { return exit_down_lt(ev, x, b); }},
          {"one_sided_down", [&](double x) { return one_sided_down_lt(ev, x); }},
          {"joint_sup_inf_cdf", [&](double x) { return joint_sup_inf_cdf(ev, Window(a, x)); }},
          {"post_inf_sup_cdf", [&](double x) { return post_inf_sup_cdf(ev, a, x); }},
          {"max_loss_post_sup_cdf", [&](double x) { return max_loss_post_sup_cdf(ev, x, a, b); }},
          {"h_tilde", [&](double x) { return h_tilde(ev, x); }},
          {"h_post_sup", [&](double x) { return h_post_sup(ev, x); }},
          {"h_intermediate", [&](double x) { return h_intermediate(ev, x, a, b); }},
      };
      const auto it = table.find(functional);
      if (it == table.end()) throw std::invalid_argument("unknown functional '" + functional + "'");
      std::cout << "x," << functional << "\n";
      for (double x : grid) std::cout << fmt::format("{:.17g},{:.17g}\n", x, it->second(x));
      return 0;
    }

    if (*verify) {
      bool all_passed = true;
      for (const auto& spec : specs_for(experiment, spec_file)) {
        try {
          const auto report = run_experiment(spec, workers);
          emit_report(report, out_dir);
          std::cout << fmt::format("{} {} max_gap={:.6g} ({:.1f}s)\n",
                                   report.passed() ? "PASS" : "FAIL", spec.id, report.max_gap(),
                                   report.runtime_seconds);
          all_passed = all_passed && report.passed();
        } catch (const InsufficientSampleError& e) {
          std::cout << fmt::format("FAIL {} {}\n", spec.id, e.what());
          all_passed = false;
        }
      }
      return all_passed ? 0 : 1;
    }

    if (*simulate) {
      if (spec_file.empty() && experiment.empty()) {
        throw std::invalid_argument("simulate needs an experiment id or --spec");
      }
      auto spec = specs_for(experiment.empty() ? "all" : experiment, spec_file).front();
      auto cfg = spec.sim_config();
      if (n_override > 0) cfg.n_paths = n_override;
      const auto samples = simulate_summaries(cfg, workers);
      if (out_file.empty()) {
        write_samples_csv(samples, std::cout);
      } else {
        std::ofstream out(out_file);
        if (!out) throw std::runtime_error("cannot write " + out_file);
        write_samples_csv(samples, out);
      }
      return 0;
    }

    if (*defaults) {
      std::filesystem::create_directories(out_dir);
      for (const auto& spec : default_specs()) {
        const auto file = std::filesystem::path(out_dir) / (spec.id + ".json");
        std::ofstream out(file);
        if (!out) throw std::runtime_error("cannot write " + file.string());
        out << spec_to_json(spec).dump(2) << "\n";
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "levyfluct: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
