#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "lakes/harness/config.hpp"

namespace lakes::harness {

using Row = std::vector<std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<Row> rows;
};

/// One SVG per spec: ys against x, one curve per distinct value of `group`.
struct PlotSpec {
  std::string file;
  std::string x;
  std::vector<std::string> ys;
  std::string group;  // empty = single curve per y
  bool log_x = true;
};

/// Independent unit of work; a failure is recorded and the rest still run.
struct ScanPoint {
  std::string label;
  std::function<std::vector<Row>()> run;
};

struct ExperimentPlan {
  std::vector<std::string> columns;
  std::vector<ScanPoint> points;
  nlohmann::json info = nlohmann::json::object();  // basis dimensions, fitted constants
  std::vector<std::string> warnings;
  std::vector<PlotSpec> plots;
  std::map<std::string, Table> extra_tables;  // written next to results.csv
};

/// Default value of every key the experiment accepts.
const std::map<std::string, std::string>& experiment_defaults(const std::string& experiment);

/// Merges defaults, rejects unknown keys and unparsable values (all offending
/// keys in one ConfigInvalid).
Config resolve_config(const Config& user);

/// Builds shared state (may throw ResourceExceeded) and the scan points.
ExperimentPlan plan_experiment(const Config& resolved, int threads);

/// "log:lo:hi:n" expands to n log-spaced values; anything else is a plain list.
std::vector<double> scan_grid(const Config& c, const std::string& key);

}  // namespace lakes::harness
