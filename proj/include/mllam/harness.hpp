// Experiment harness: seeded method-comparison sweeps over sigma, t, or m,
// with CSV and self-contained SVG output.
//
// Reproducibility contract: a sweep is a pure function of its spec. Per-cell
// seeds are derived from (master seed, method, grid index, repeat), cells are
// independent, and result assembly is ordered, so output bytes do not depend
// on the worker-pool size. Measured wall times are only recorded when
// record_timing is set, since they would break byte-identical reruns.

#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "mllam/init.hpp"
#include "mllam/metrics.hpp"
#include "mllam/model.hpp"
#include "mllam/solvers.hpp"

namespace mllam {

enum class Method { mllam, mllams, mom, random_init };
enum class SweepParam { sigma, t, m };
enum class InitKind { mom, random };

inline std::string to_string(Method method) {
  switch (method) {
    case Method::mllam: return "mllam";
    case Method::mllams: return "mllams";
    case Method::mom: return "mom";
    case Method::random_init: return "random_init";
  }
  throw std::invalid_argument("unknown method");
}

inline Method method_from_string(const std::string& name) {
  if (name == "mllam") return Method::mllam;
  if (name == "mllams") return Method::mllams;
  if (name == "mom") return Method::mom;
  if (name == "random_init") return Method::random_init;
  throw std::invalid_argument("unknown method: " + name);
}

inline std::string to_string(SweepParam param) {
  switch (param) {
    case SweepParam::sigma: return "sigma";
    case SweepParam::t: return "t";
    case SweepParam::m: return "m";
  }
  throw std::invalid_argument("unknown sweep parameter");
}

inline SweepParam sweep_param_from_string(const std::string& name) {
  if (name == "sigma") return SweepParam::sigma;
  if (name == "t") return SweepParam::t;
  if (name == "m") return SweepParam::m;
  throw std::invalid_argument("unknown sweep parameter: " + name);
}

struct SweepSpec {
  SweepParam varying = SweepParam::sigma;
  std::vector<double> grid;  // nonempty, strictly increasing, positive
  int d = 100;
  int r = 5;
  int t = 200;
  int m = 25;
  double sigma = 1.0;
  int K = 20;
  int repeats = 5;
  std::uint64_t master_seed = 0;
  std::vector<Method> methods;
  TaskSchedule schedule = TaskSchedule::reuse_all;
  InitKind init = InitKind::mom;
  bool record_timing = false;
  int threads = 1;

  void validate() const {
    detail::require(!grid.empty(), "SweepSpec: grid must be nonempty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
      detail::require(grid[i] > 0.0, "SweepSpec: grid values must be positive");
      if (i > 0)
        detail::require(grid[i] > grid[i - 1],
                        "SweepSpec: grid must be strictly increasing");
      if (varying != SweepParam::sigma) {
        detail::require(std::abs(grid[i] - std::round(grid[i])) < 1e-9,
                        "SweepSpec: t/m grid values must be integers");
      }
    }
    detail::require(repeats >= 1, "SweepSpec: repeats must be >= 1");
    detail::require(!methods.empty(), "SweepSpec: methods must be nonempty");
    detail::require(d >= 1 && r >= 1 && r <= d && t >= 1 && m >= 2,
                    "SweepSpec: bad fixed dimensions");
    detail::require(sigma >= 0.0, "SweepSpec: sigma must be nonnegative");
    detail::require(K >= 1, "SweepSpec: K must be >= 1");
    detail::require(threads >= 1, "SweepSpec: threads must be >= 1");
  }
};

struct SweepRow {
  Method method = Method::mllam;
  double value = 0.0;  // the varying parameter at this cell
  int repeat = 0;
  SubspaceError error;
  double lower_bound = 0.0;
  double wall_ms = 0.0;
  std::uint64_t seed = 0;
};

struct SweepResult {
  SweepParam varying = SweepParam::sigma;
  int r = 1;
  int repeats = 1;
  std::vector<SweepRow> rows;
  std::vector<std::string> failures;  // one entry per failed cell, with context
  std::vector<std::string> notes;     // e.g. out-of-regime reference-curve points
};

inline std::uint64_t cell_seed(std::uint64_t master_seed, Method method,
                               std::size_t grid_index, int repeat) {
  return rng::keyed(master_seed, rng::kStreamCell,
                    (static_cast<std::uint64_t>(method) << 32) | grid_index,
                    static_cast<std::uint64_t>(repeat));
}

// Shortest decimal that round-trips to the same double.
inline std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace detail {

struct CellParams {
  int d;
  int r;
  int t;
  int m;
  double sigma;
};

inline CellParams resolve_cell(const SweepSpec& spec, double value) {
  CellParams p{spec.d, spec.r, spec.t, spec.m, spec.sigma};
  switch (spec.varying) {
    case SweepParam::sigma: p.sigma = value; break;
    case SweepParam::t: p.t = static_cast<int>(std::llround(value)); break;
    case SweepParam::m: p.m = static_cast<int>(std::llround(value)); break;
  }
  return p;
}

inline SweepRow run_cell(const SweepSpec& spec, Method method,
                         std::size_t grid_index, int repeat) {
  const double value = spec.grid[grid_index];
  const CellParams p = resolve_cell(spec, value);
  const std::uint64_t seed = cell_seed(spec.master_seed, method, grid_index, repeat);
  const auto started = std::chrono::steady_clock::now();

  const ProblemInstance instance =
      generate_instance(p.d, p.r, p.t, p.m, p.sigma, seed);
  const SpectrumStats stats =
      compute_spectrum(instance.ground_truth->v_star, p.r, p.t);

  Subspace u = [&] {
    switch (method) {
      case Method::mom:
        return mom_init(instance);
      case Method::random_init:
        return random_init(p.d, p.r, seed);
      case Method::mllam:
      case Method::mllams: {
        Subspace u0 = spec.init == InitKind::mom
                          ? mom_init(instance)
                          : random_init(p.d, p.r, seed);
        SolverConfig cfg;
        cfg.iterations = spec.K;
        cfg.schedule = spec.schedule;
        cfg.shuffle_seed = rng::keyed(seed, rng::kStreamDerived, 1, 0);
        cfg.use_subset_selection = method == Method::mllams;
        return fit(instance, u0, cfg).final_u;
      }
    }
    throw std::invalid_argument("unknown method");
  }();

  SweepRow row;
  row.method = method;
  row.value = value;
  row.repeat = repeat;
  row.error = subspace_error(u, instance.ground_truth->u_star);
  row.lower_bound = lower_bound_curve(p.sigma, stats.lambda_max, stats.lambda_min,
                                      p.d, p.r, p.m, p.t);
  row.wall_ms = spec.record_timing
                    ? std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - started)
                          .count()
                    : 0.0;
  row.seed = seed;
  return row;
}

}  // namespace detail

// Runs every (method, grid point, repeat) cell on a fresh seeded instance.
// Cells run on a worker pool of spec.threads threads; one cell's failure is
// recorded with its context and does not abort the others.
inline SweepResult run_sweep(const SweepSpec& spec) {
  spec.validate();

  struct Cell {
    Method method;
    std::size_t grid_index;
    int repeat;
  };
  std::vector<Cell> cells;
  for (Method method : spec.methods)
    for (std::size_t g = 0; g < spec.grid.size(); ++g)
      for (int rep = 0; rep < spec.repeats; ++rep)
        cells.push_back({method, g, rep});

  std::vector<std::optional<SweepRow>> slots(cells.size());
  std::vector<std::string> failures;
  std::mutex failures_mutex;
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < cells.size();
         i = next.fetch_add(1)) {
      const Cell& cell = cells[i];
      try {
        slots[i] = detail::run_cell(spec, cell.method, cell.grid_index, cell.repeat);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(failures_mutex);
        failures.push_back("cell (method=" + to_string(cell.method) + ", " +
                           to_string(spec.varying) + "=" +
                           format_double(spec.grid[cell.grid_index]) +
                           ", repeat=" + std::to_string(cell.repeat) +
                           "): " + e.what());
      }
    }
  };

  const int n_threads =
      std::min<int>(spec.threads, static_cast<int>(cells.size()));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  SweepResult result;
  result.varying = spec.varying;
  result.r = spec.r;
  result.repeats = spec.repeats;
  for (std::size_t g = 0; g < spec.grid.size(); ++g) {
    const detail::CellParams p = detail::resolve_cell(spec, spec.grid[g]);
    if (!lower_bound_in_regime(p.d, p.r, p.m, p.t)) {
      result.notes.push_back(
          to_string(spec.varying) + "=" + format_double(spec.grid[g]) +
          ": lower-bound reference outside its regime (needs 2r <= d and "
          "mt >= r(d-r))");
    }
  }
  for (auto& slot : slots)
    if (slot.has_value()) result.rows.push_back(*slot);
  std::sort(failures.begin(), failures.end());
  result.failures = std::move(failures);
  std::sort(result.rows.begin(), result.rows.end(),
            [](const SweepRow& a, const SweepRow& b) {
              const std::string ma = to_string(a.method);
              const std::string mb = to_string(b.method);
              if (ma != mb) return ma < mb;
              if (a.value != b.value) return a.value < b.value;
              return a.repeat < b.repeat;
            });
  return result;
}

inline std::string csv_string(const SweepResult& result) {
  std::string out =
      "method,param,value,repeat,frob,spectral,rescaled,lower_bound,wall_ms,seed\n";
  const std::string param = to_string(result.varying);
  for (const SweepRow& row : result.rows) {
    out += to_string(row.method);
    out += ',';
    out += param;
    out += ',';
    out += format_double(row.value);
    out += ',';
    out += std::to_string(row.repeat);
    out += ',';
    out += format_double(row.error.frob);
    out += ',';
    out += format_double(row.error.spectral);
    out += ',';
    out += format_double(row.error.rescaled_frob);
    out += ',';
    out += format_double(row.lower_bound);
    out += ',';
    out += format_double(row.wall_ms);
    out += ',';
    out += std::to_string(row.seed);
    out += '\n';
  }
  return out;
}

inline void emit_csv(const SweepResult& result, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << csv_string(result);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

// Parses a CSV produced by emit_csv back into a result (used by `plot`).
inline SweepResult parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) ||
      line != "method,param,value,repeat,frob,spectral,rescaled,lower_bound,"
              "wall_ms,seed") {
    throw std::runtime_error("unrecognized CSV header");
  }
  SweepResult result;
  bool have_param = false;
  int max_repeat = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 10) throw std::runtime_error("bad CSV row: " + line);
    SweepRow row;
    row.method = method_from_string(fields[0]);
    if (!have_param) {
      result.varying = sweep_param_from_string(fields[1]);
      have_param = true;
    }
    row.value = std::stod(fields[2]);
    row.repeat = std::stoi(fields[3]);
    row.error.frob = std::stod(fields[4]);
    row.error.spectral = std::stod(fields[5]);
    row.error.rescaled_frob = std::stod(fields[6]);
    row.lower_bound = std::stod(fields[7]);
    row.wall_ms = std::stod(fields[8]);
    row.seed = std::stoull(fields[9]);
    max_repeat = std::max(max_repeat, row.repeat);
    // recover r from frob/rescaled when possible
    if (row.error.rescaled_frob > 0.0) {
      const double ratio = row.error.frob / row.error.rescaled_frob;
      result.r = std::max(result.r, static_cast<int>(std::llround(ratio * ratio)));
    }
    result.rows.push_back(row);
  }
  result.repeats = max_repeat + 1;
  return result;
}

namespace detail {

inline double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2]
                    : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

inline std::string svg_color(Method method) {
  switch (method) {
    case Method::mllam: return "#1f77b4";
    case Method::mllams: return "#2ca02c";
    case Method::mom: return "#ff7f0e";
    case Method::random_init: return "#7f7f7f";
  }
  return "#000000";
}

}  // namespace detail

// Self-contained log-log SVG: one median series per method, a dotted
// horizontal reference at sqrt(r), and the dashed lower-bound reference.
inline std::string svg_string(const SweepResult& result) {
  constexpr double kWidth = 720.0;
  constexpr double kHeight = 540.0;
  constexpr double kLeft = 80.0;
  constexpr double kRight = 30.0;
  constexpr double kTop = 40.0;
  constexpr double kBottom = 70.0;
  constexpr double kFloor = 1e-16;  // log-plot stand-in for exact zeros

  // medians per (method, value)
  std::map<Method, std::map<double, std::vector<double>>> series_raw;
  std::map<double, std::vector<double>> bound_raw;
  for (const SweepRow& row : result.rows) {
    series_raw[row.method][row.value].push_back(row.error.frob);
    bound_raw[row.value].push_back(row.lower_bound);
  }

  const double sqrt_r = std::sqrt(static_cast<double>(std::max(result.r, 1)));
  double x_min = std::numeric_limits<double>::infinity();
  double x_max = 0.0;
  double y_min = sqrt_r;
  double y_max = sqrt_r;
  auto track_y = [&](double v) {
    const double clamped = std::max(v, kFloor);
    y_min = std::min(y_min, clamped);
    y_max = std::max(y_max, clamped);
  };
  std::map<Method, std::vector<std::pair<double, double>>> series;
  for (const auto& [method, by_value] : series_raw) {
    for (const auto& [value, frobs] : by_value) {
      const double med = detail::median(frobs);
      series[method].push_back({value, std::max(med, kFloor)});
      x_min = std::min(x_min, value);
      x_max = std::max(x_max, value);
      track_y(med);
    }
  }
  std::vector<std::pair<double, double>> bound;
  for (const auto& [value, bounds] : bound_raw) {
    const double med = detail::median(bounds);
    if (med > 0.0) {
      bound.push_back({value, med});
      track_y(med);
    }
  }

  if (!(x_min > 0.0) || x_max <= 0.0) {  // empty result: render an empty frame
    x_min = 1.0;
    x_max = 10.0;
  }
  double lx0 = std::log10(x_min);
  double lx1 = std::log10(x_max);
  double ly0 = std::log10(std::max(y_min, kFloor));
  double ly1 = std::log10(std::max(y_max, kFloor));
  if (lx1 - lx0 < 1e-12) {
    lx0 -= 0.5;
    lx1 += 0.5;
  }
  if (ly1 - ly0 < 1e-12) {
    ly0 -= 0.5;
    ly1 += 0.5;
  }
  ly0 -= 0.1 * (ly1 - ly0);
  ly1 += 0.1 * (ly1 - ly0);

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto x_px = [&](double v) {
    return kLeft + (std::log10(std::max(v, kFloor)) - lx0) / (lx1 - lx0) * plot_w;
  };
  auto y_px = [&](double v) {
    return kTop + plot_h -
           (std::log10(std::max(v, kFloor)) - ly0) / (ly1 - ly0) * plot_h;
  };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n";

  // axes frame
  svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w
      << "\" height=\"" << plot_h
      << "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";

  // decade gridlines and tick labels
  for (int e = static_cast<int>(std::ceil(lx0)); e <= static_cast<int>(std::floor(lx1));
       ++e) {
    const double px = x_px(std::pow(10.0, e));
    svg << "<line x1=\"" << px << "\" y1=\"" << kTop << "\" x2=\"" << px
        << "\" y2=\"" << kTop + plot_h
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg << "<text x=\"" << px << "\" y=\"" << kTop + plot_h + 18
        << "\" font-size=\"12\" text-anchor=\"middle\" fill=\"#333333\">1e"
        << e << "</text>\n";
  }
  for (int e = static_cast<int>(std::ceil(ly0)); e <= static_cast<int>(std::floor(ly1));
       ++e) {
    const double py = y_px(std::pow(10.0, e));
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << py << "\" x2=\""
        << kLeft + plot_w << "\" y2=\"" << py
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << py + 4
        << "\" font-size=\"12\" text-anchor=\"end\" fill=\"#333333\">1e" << e
        << "</text>\n";
  }

  // sqrt(r) ceiling
  {
    const double py = y_px(sqrt_r);
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << py << "\" x2=\""
        << kLeft + plot_w << "\" y2=\"" << py
        << "\" stroke=\"#1f77b4\" stroke-width=\"1\" stroke-dasharray=\"2,4\"/>\n";
    svg << "<text x=\"" << kLeft + 6 << "\" y=\"" << py - 5
        << "\" font-size=\"11\" fill=\"#1f77b4\">sqrt(r) ceiling</text>\n";
  }

  // lower-bound reference
  if (bound.size() >= 2) {
    svg << "<polyline fill=\"none\" stroke=\"#444444\" stroke-width=\"1.5\" "
           "stroke-dasharray=\"8,4\" points=\"";
    for (const auto& [x, y] : bound) svg << x_px(x) << "," << y_px(y) << " ";
    svg << "\"/>\n";
  }

  // method series
  for (const auto& [method, points] : series) {
    const std::string color = detail::svg_color(method);
    svg << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"2\" points=\"";
    for (const auto& [x, y] : points) svg << x_px(x) << "," << y_px(y) << " ";
    svg << "\"/>\n";
    for (const auto& [x, y] : points) {
      svg << "<circle cx=\"" << x_px(x) << "\" cy=\"" << y_px(y)
          << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
  }

  // legend
  {
    double ly = kTop + 14;
    const double lx = kLeft + plot_w - 170;
    for (const auto& [method, points] : series) {
      (void)points;
      svg << "<line x1=\"" << lx << "\" y1=\"" << ly - 4 << "\" x2=\"" << lx + 24
          << "\" y2=\"" << ly - 4 << "\" stroke=\"" << detail::svg_color(method)
          << "\" stroke-width=\"2\"/>\n";
      svg << "<text x=\"" << lx + 30 << "\" y=\"" << ly
          << "\" font-size=\"12\" fill=\"#333333\">" << to_string(method)
          << "</text>\n";
      ly += 16;
    }
    if (bound.size() >= 2) {
      svg << "<line x1=\"" << lx << "\" y1=\"" << ly - 4 << "\" x2=\"" << lx + 24
          << "\" y2=\"" << ly - 4
          << "\" stroke=\"#444444\" stroke-width=\"1.5\" "
             "stroke-dasharray=\"8,4\"/>\n";
      svg << "<text x=\"" << lx + 30 << "\" y=\"" << ly
          << "\" font-size=\"12\" fill=\"#333333\">lower-bound rate</text>\n";
      ly += 16;
    }
    svg << "<text x=\"" << lx << "\" y=\"" << ly
        << "\" font-size=\"11\" fill=\"#777777\">median of "
        << result.repeats << " repeats</text>\n";
  }

  // axis titles
  svg << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 20
      << "\" font-size=\"14\" text-anchor=\"middle\" fill=\"#333333\">"
      << to_string(result.varying) << "</text>\n";
  svg << "<text x=\"20\" y=\"" << kTop + plot_h / 2
      << "\" font-size=\"14\" text-anchor=\"middle\" fill=\"#333333\" "
         "transform=\"rotate(-90 20 "
      << kTop + plot_h / 2 << ")\">subspace error (Frobenius)</text>\n";

  svg << "</svg>\n";
  return svg.str();
}

inline void emit_plot(const SweepResult& result, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << svg_string(result);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

// --- JSON config ------------------------------------------------------------

inline SweepSpec sweep_spec_from_json(const nlohmann::json& j) {
  SweepSpec spec;
  spec.varying = sweep_param_from_string(j.at("varying").get<std::string>());
  spec.grid = j.at("grid").get<std::vector<double>>();
  const auto& fixed = j.at("fixed");
  spec.d = fixed.at("d").get<int>();
  spec.r = fixed.at("r").get<int>();
  if (fixed.contains("t")) spec.t = fixed.at("t").get<int>();
  if (fixed.contains("m")) spec.m = fixed.at("m").get<int>();
  if (fixed.contains("sigma")) spec.sigma = fixed.at("sigma").get<double>();
  spec.K = fixed.at("K").get<int>();
  spec.repeats = fixed.value("repeats", 5);
  spec.master_seed = fixed.at("master_seed").get<std::uint64_t>();
  switch (spec.varying) {  // the varying parameter needs no fixed entry
    case SweepParam::sigma: break;
    case SweepParam::t:
      detail::require(fixed.contains("m") && fixed.contains("sigma"),
                      "sweep config: fixed.m and fixed.sigma required");
      break;
    case SweepParam::m:
      detail::require(fixed.contains("t") && fixed.contains("sigma"),
                      "sweep config: fixed.t and fixed.sigma required");
      break;
  }
  if (spec.varying == SweepParam::sigma) {
    detail::require(fixed.contains("t") && fixed.contains("m"),
                    "sweep config: fixed.t and fixed.m required");
  }
  spec.methods.clear();
  for (const auto& name : j.at("methods"))
    spec.methods.push_back(method_from_string(name.get<std::string>()));
  if (j.contains("schedule")) {
    const auto name = j.at("schedule").get<std::string>();
    if (name == "partition") {
      spec.schedule = TaskSchedule::partition;
    } else if (name == "reuse_all") {
      spec.schedule = TaskSchedule::reuse_all;
    } else {
      throw std::invalid_argument("unknown schedule: " + name);
    }
  }
  if (j.contains("init")) {
    const auto name = j.at("init").get<std::string>();
    if (name == "mom") {
      spec.init = InitKind::mom;
    } else if (name == "random") {
      spec.init = InitKind::random;
    } else {
      throw std::invalid_argument("unknown init: " + name);
    }
  }
  spec.record_timing = j.value("record_timing", false);
  spec.threads = j.value("threads", 1);
  spec.validate();
  return spec;
}

inline SweepSpec load_sweep_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return sweep_spec_from_json(nlohmann::json::parse(in));
}

}  // namespace mllam
