#include "lakes/harness/runner.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "lakes/core/parallel.hpp"

#ifndef LAKES_VERSION
#define LAKES_VERSION "unknown"
#endif

namespace lakes::harness {

namespace fs = std::filesystem;

namespace {

std::string timestamp() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  // write-then-rename so a crashed run never leaves a truncated manifest
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    out << j.dump(2) << "\n";
  }
  fs::rename(tmp, path);
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

std::string xml_escape(const std::string& s) {
  std::string o;
  for (char ch : s) {
    if (ch == '<') o += "&lt;";
    else if (ch == '>') o += "&gt;";
    else if (ch == '&') o += "&amp;";
    else o += ch;
  }
  return o;
}

}  // namespace

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigInvalid:
      return kExitConfig;
    case ErrorCode::ResourceExceeded:
    case ErrorCode::TooLarge:
    case ErrorCode::DimensionTooLarge:
      return kExitResource;
    default:
      return kExitFailure;
  }
}

int resolve_threads(int requested) { return requested > 0 ? requested : default_threads(); }

void write_csv(const std::string& path, const Table& t) {
  std::ofstream out(path);
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << csv_cell(t.columns[i]);
  out << "\n";
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << csv_cell(r[i]);
    out << "\n";
  }
}

void write_svg_plot(const std::string& path, const Table& t, const PlotSpec& spec) {
  auto col = [&](const std::string& name) -> long {
    for (std::size_t i = 0; i < t.columns.size(); ++i)
      if (t.columns[i] == name) return static_cast<long>(i);
    return -1;
  };
  const long xi = col(spec.x), gi = spec.group.empty() ? -1 : col(spec.group);
  if (xi < 0) return;
  struct Curve {
    std::string name;
    std::vector<std::pair<double, double>> pts;
  };
  std::vector<Curve> curves;
  std::map<std::string, std::size_t> index;
  for (const auto& y : spec.ys) {
    const long yi = col(y);
    if (yi < 0) continue;
    for (const auto& r : t.rows) {
      const std::string name = gi >= 0 ? y + " (" + spec.group + "=" + r[gi] + ")" : y;
      if (!index.count(name)) {
        index[name] = curves.size();
        curves.push_back({name, {}});
      }
      const double x = std::strtod(r[xi].c_str(), nullptr), v = std::strtod(r[yi].c_str(), nullptr);
      if (std::isfinite(x) && std::isfinite(v) && (!spec.log_x || x > 0)) curves[index[name]].pts.push_back({x, v});
    }
  }
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  auto fx = [&](double x) { return spec.log_x ? std::log10(x) : x; };
  for (const auto& c : curves)
    for (const auto& [x, y] : c.pts) {
      x0 = std::min(x0, fx(x));
      x1 = std::max(x1, fx(x));
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  if (!(x1 >= x0) || !(y1 >= y0)) return;
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y1 = y0 + 1;
  const double W = 640, H = 420, ml = 70, mr = 220, mt = 20, mb = 50;
  auto px = [&](double x) { return ml + (fx(x) - x0) / (x1 - x0) * (W - ml - mr); };
  auto py = [&](double y) { return H - mb - (y - y0) / (y1 - y0) * (H - mt - mb); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
  std::ofstream out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << W - ml - mr << "\" height=\"" << H - mt - mb
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = x0 + k * (x1 - x0) / 4, yv = y0 + k * (y1 - y0) / 4;
    const double xs = ml + k * (W - ml - mr) / 4, ys = H - mb - k * (H - mt - mb) / 4;
    std::ostringstream xl, yl;
    xl << std::setprecision(3) << (spec.log_x ? std::pow(10.0, xv) : xv);
    yl << std::setprecision(3) << yv;
    out << "<text x=\"" << xs << "\" y=\"" << H - mb + 15 << "\" text-anchor=\"middle\">" << xl.str() << "</text>\n";
    out << "<text x=\"" << ml - 5 << "\" y=\"" << ys + 4 << "\" text-anchor=\"end\">" << yl.str() << "</text>\n";
  }
  out << "<text x=\"" << (W - mr + ml) / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\">"
      << xml_escape(spec.x) << (spec.log_x ? " (log)" : "") << "</text>\n";
  for (std::size_t c = 0; c < curves.size(); ++c) {
    const char* color = colors[c % 8];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
    for (const auto& [x, y] : curves[c].pts) out << px(x) << "," << py(y) << " ";
    out << "\"/>\n";
    out << "<text x=\"" << W - mr + 10 << "\" y=\"" << mt + 14 * (c + 1) << "\" fill=\"" << color << "\">"
        << xml_escape(curves[c].name) << "</text>\n";
  }
  out << "</svg>\n";
}

RunSummary run_experiment(const Config& user, std::ostream& log) {
  const Config cfg = resolve_config(user);
  const int threads = resolve_threads(static_cast<int>(cfg.get_int("threads")));
  return execute_plan(cfg, [&] { return plan_experiment(cfg, threads); }, log);
}

RunSummary execute_plan(const Config& cfg, const std::function<ExperimentPlan()>& make_plan, std::ostream& log) {
  const int threads = resolve_threads(static_cast<int>(cfg.get_int("threads")));
  const std::string exp = cfg.experiment();
  const fs::path dir = fs::path(cfg.get("outdir")) / exp / cfg.hash();
  fs::create_directories(dir / "plots");

  nlohmann::json manifest;
  manifest["experiment"] = exp;
  manifest["config_hash"] = cfg.hash();
  manifest["config"] = cfg.values();
  manifest["code_version"] = LAKES_VERSION;
  manifest["threads"] = threads;
  manifest["started"] = timestamp();
  manifest["status"] = "running";
  write_json(dir / "manifest.json", manifest);
  {
    std::ofstream(dir / "config.txt") << cfg.serialize();
  }
  log << exp << " -> " << dir.string() << " (" << threads << " threads)\n";

  const auto t_setup = std::chrono::steady_clock::now();
  ExperimentPlan plan;
  try {
    plan = make_plan();
  } catch (const std::exception& e) {
    manifest["status"] = "failed";
    manifest["error"] = e.what();
    manifest["finished"] = timestamp();
    write_json(dir / "manifest.json", manifest);
    throw;
  }
  manifest["setup_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_setup).count();
  manifest["info"] = plan.info;
  manifest["warnings"] = plan.warnings;
  write_json(dir / "manifest.json", manifest);

  const std::size_t n = plan.points.size();
  std::vector<std::vector<Row>> rows(n);
  std::vector<double> seconds(n, 0.0);
  std::vector<std::string> errors(n);
  std::mutex log_mutex;
  // points run concurrently; each catches its own failure
  parallel_for(n, threads, [&](std::size_t i) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      rows[i] = plan.points[i].run();
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
    seconds[i] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::lock_guard lock(log_mutex);
    log << "  " << plan.points[i].label << (errors[i].empty() ? " ok " : " FAILED ") << std::fixed
        << std::setprecision(2) << seconds[i] << "s" << (errors[i].empty() ? "" : ": " + errors[i]) << "\n";
  });

  Table results;
  results.columns = plan.columns;
  RunSummary summary;
  summary.directory = dir.string();
  summary.points = n;
  nlohmann::json points = nlohmann::json::array();
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& r : rows[i]) results.rows.push_back(std::move(r));
    nlohmann::json p = {{"label", plan.points[i].label}, {"seconds", seconds[i]}};
    p["status"] = errors[i].empty() ? "ok" : "failed";
    if (!errors[i].empty()) {
      p["error"] = errors[i];
      ++summary.failed;
    }
    points.push_back(p);
  }
  write_csv((dir / "results.csv").string(), results);
  for (const auto& [name, table] : plan.extra_tables) write_csv((dir / name).string(), table);
  for (const auto& spec : plan.plots) write_svg_plot((dir / "plots" / spec.file).string(), results, spec);

  manifest["points"] = points;
  manifest["finished"] = timestamp();
  manifest["status"] = summary.failed == 0 ? "complete" : "partial";
  write_json(dir / "manifest.json", manifest);
  return summary;
}

}  // namespace lakes::harness
