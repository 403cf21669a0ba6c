#pragma once

#include <functional>
#include <iosfwd>
#include <string>

#include "lakes/core/error.hpp"
#include "lakes/harness/experiments.hpp"

namespace lakes::harness {

enum ExitCode { kExitOk = 0, kExitFailure = 1, kExitConfig = 2, kExitResource = 3, kExitVerify = 4 };

/// ConfigInvalid -> 2, ResourceExceeded / TooLarge / DimensionTooLarge -> 3, else 1.
int exit_code(ErrorCode code);

/// Thread count: `requested` if positive, else LAKES_THREADS / hardware.
int resolve_threads(int requested);

struct RunSummary {
  std::string directory;  // <outdir>/<experiment>/<hash>
  std::size_t points = 0;
  std::size_t failed = 0;
};

/// Resolves the config, writes manifest.json (status "running"), runs every
/// scan point, then writes results.csv, extra tables, plots/ and the final manifest.
RunSummary run_experiment(const Config& user, std::ostream& log);

/// The part of run_experiment after config resolution; `cfg` must be resolved.
RunSummary execute_plan(const Config& cfg, const std::function<ExperimentPlan()>& make_plan, std::ostream& log);

/// CSV with a header line; cells are written verbatim.
void write_csv(const std::string& path, const Table& t);

/// Minimal static SVG line plot of one table.
void write_svg_plot(const std::string& path, const Table& t, const PlotSpec& spec);

}  // namespace lakes::harness
