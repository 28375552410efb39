#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>

#include "levyfluct/experiments.hpp"

namespace levyfluct {

void ExperimentReport::add_row(std::string label, double x, double analytic, double empirical,
                               std::uint64_t count, double tolerance, bool gating) {
  rows.push_back({std::move(label), x, analytic, empirical, count, std::abs(analytic - empirical),
                  tolerance, gating});
}

void ExperimentReport::add_check(std::string name, double value, double threshold, bool ok,
                                 bool gating, std::string detail) {
  checks.push_back({std::move(name), value, threshold, ok, gating, std::move(detail)});
}

double ExperimentReport::max_gap() const {
  double worst = 0.0;
  for (const auto& r : rows) {
    if (r.gating) worst = std::max(worst, r.gap);
  }
  return worst;
}

bool ExperimentReport::passed() const {
  const bool rows_ok = std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.passed(); });
  const bool checks_ok = std::all_of(checks.begin(), checks.end(),
                                     [](const auto& c) { return !c.gating || c.passed; });
  return rows_ok && checks_ok;
}

std::string report_csv(const ExperimentReport& report) {
  std::string out = "experiment,label,x,analytic,empirical,count,gap,tolerance,gating,pass\n";
  for (const auto& r : report.rows) {
    out += fmt::format("{},{},{:.12g},{:.12g},{:.12g},{},{:.12g},{:.12g},{},{}\n", report.id,
                       r.label, r.x, r.analytic, r.empirical, r.count, r.gap, r.tolerance,
                       r.gating ? 1 : 0, r.passed() ? 1 : 0);
  }
  return out;
}

std::string report_summary(const ExperimentReport& report) {
  std::string out;
  out += fmt::format("experiment: {} ({})\n", report.id, to_string(report.kind));
  out += fmt::format("result: {}\n", report.passed() ? "PASS" : "FAIL");
  out += fmt::format("max_gap={:.12g}\n", report.max_gap());
  out += fmt::format("rows={} paths_simulated={} truncated={} discarded={}\n", report.rows.size(),
                     report.paths_simulated, report.truncated, report.discarded);
  for (const auto& c : report.checks) {
    out += fmt::format("check {}: value={:.6g} threshold={:.6g} {}{}{}\n", c.name, c.value,
                       c.threshold, c.passed ? "ok" : "FAILED", c.gating ? "" : " (informational)",
                       c.detail.empty() ? "" : " -- " + c.detail);
  }
  out += fmt::format("runtime_seconds={:.2f} workers={}\n", report.runtime_seconds, report.workers);
  out += "config: " + report.config.dump() + "\n";
  return out;
}

void emit_report(const ExperimentReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error(fmt::format("cannot create {}: {}", dir.string(), ec.message()));
  auto write = [](const std::filesystem::path& file, const std::string& text) {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write report to " + file.string());
    out << text;
    out.flush();
    if (!out) throw std::runtime_error("failed while writing report to " + file.string());
  };
  write(dir / (report.id + ".csv"), report_csv(report));
  write(dir / (report.id + ".summary.txt"), report_summary(report));
}

}  // namespace levyfluct
