#include "qtel/report.hpp"

#include <cmath>
#include <cstdio>

#include "qtel/rng.hpp"
#include "qtel/version.hpp"

namespace qtel {

CheckResult make_check(std::string id, double expected, double computed, double tolerance,
                       std::string anchor) {
  CheckResult c;
  c.check_id = std::move(id);
  c.expected = expected;
  c.computed = computed;
  c.tolerance = tolerance;
  c.passed = std::isfinite(computed) && std::abs(expected - computed) <= tolerance;
  c.paper_anchor = std::move(anchor);
  return c;
}

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_banner(std::uint64_t seed) {
  return std::string("# qteleport-lab v") + kVersion + " rng=" +
         std::string(RandomStream::algorithm_id()) + " seed=" + std::to_string(seed);
}

void write_checks_csv(std::ostream& os, const RunConfig& config,
                      const std::vector<CheckResult>& checks) {
  os << csv_banner(config.seed) << "\n";
  os << "check_id,expected,computed,tolerance,passed,paper_anchor\n";
  for (const auto& c : checks)
    os << c.check_id << ',' << fmt17(c.expected) << ',' << fmt17(c.computed) << ','
       << fmt17(c.tolerance) << ',' << (c.passed ? "true" : "false") << ',' << c.paper_anchor
       << "\n";
}

void write_table_csv(std::ostream& os, const RunConfig& config,
                     const std::vector<std::string>& columns,
                     const std::vector<std::vector<std::string>>& rows) {
  os << csv_banner(config.seed) << "\n";
  for (std::size_t i = 0; i < columns.size(); ++i)
    os << columns[i] << (i + 1 < columns.size() ? "," : "");
  os << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      os << row[i] << (i + 1 < row.size() ? "," : "");
    os << "\n";
  }
}

nlohmann::ordered_json config_to_json(const RunConfig& config) {
  nlohmann::ordered_json j;
  j["command"] = config.command;
  j["seed"] = config.seed;
  j["samples"] = config.samples;
  j["grid"] = config.grid_points;
  j["tol"] = config.tolerance;
  j["format"] = config.format;
  // threads is an execution detail: output must be identical across counts
  j["version"] = kVersion;
  j["rng"] = std::string(RandomStream::algorithm_id());
  return j;
}

nlohmann::ordered_json checks_to_json(const RunConfig& config,
                                      const std::vector<CheckResult>& checks) {
  nlohmann::ordered_json j;
  j["config"] = config_to_json(config);
  j["checks"] = nlohmann::ordered_json::array();
  std::size_t passed = 0;
  for (const auto& c : checks) {
    nlohmann::ordered_json e;
    e["check_id"] = c.check_id;
    e["expected"] = fmt17(c.expected);
    e["computed"] = fmt17(c.computed);
    e["tolerance"] = fmt17(c.tolerance);
    e["passed"] = c.passed;
    e["paper_anchor"] = c.paper_anchor;
    j["checks"].push_back(e);
    if (c.passed) ++passed;
  }
  j["summary"] = {{"passed", passed}, {"failed", checks.size() - passed}};
  return j;
}

}  // namespace qtel
