#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace qtel {

struct RunConfig {
  std::string command;
  std::uint64_t seed = 1;
  std::size_t samples = 50;
  std::size_t grid_points = 11;
  double tolerance = 1e-9;
  std::string output_path;  // empty means stdout
  std::string format = "csv";
  std::size_t threads = 1;
};

struct CheckResult {
  std::string check_id;
  double expected = 0.0;
  double computed = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string paper_anchor;
};

// passed is derived, never set by hand: |expected - computed| <= tolerance.
CheckResult make_check(std::string id, double expected, double computed, double tolerance,
                       std::string anchor);

// 17 significant digits: round-trips every double exactly.
std::string fmt17(double x);

// "# qteleport-lab v<semver> rng=<id> seed=<n>"
std::string csv_banner(std::uint64_t seed);

void write_checks_csv(std::ostream& os, const RunConfig& config,
                      const std::vector<CheckResult>& checks);

// Generic table: banner, header row, then pre-formatted cells.
void write_table_csv(std::ostream& os, const RunConfig& config,
                     const std::vector<std::string>& columns,
                     const std::vector<std::vector<std::string>>& rows);

nlohmann::ordered_json config_to_json(const RunConfig& config);
nlohmann::ordered_json checks_to_json(const RunConfig& config,
                                      const std::vector<CheckResult>& checks);

}  // namespace qtel
