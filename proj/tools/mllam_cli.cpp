// Command-line harness: generate synthetic instances, fit representations,
// run method-comparison sweeps, adapt to fresh tasks, and render plots.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "mllam/mllam.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int run_generate(int d, int r, int t, int m, double sigma, std::uint64_t seed,
                 const std::string& out) {
  const auto instance = mllam::generate_instance(d, r, t, m, sigma, seed);
  mllam::io::save_instance(instance, out);
  std::cout << "wrote instance (d=" << d << ", r=" << r << ", t=" << t
            << ", m=" << m << ", sigma=" << sigma << ", seed=" << seed
            << ") to " << out << "\n";
  return 0;
}

int run_fit(const std::string& in, const std::string& method, int k,
            const std::string& schedule, const std::string& init,
            std::uint64_t seed, const std::string& u_solver,
            const std::string& out, const std::string& save_u) {
  const auto instance = mllam::io::load_instance(in);

  mllam::SolverConfig cfg;
  cfg.iterations = k;
  cfg.use_subset_selection = method == "mllams";
  if (method != "mllam" && method != "mllams") {
    throw std::invalid_argument("fit supports methods mllam and mllams, got " +
                                method);
  }
  if (schedule == "partition") {
    cfg.schedule = mllam::TaskSchedule::partition;
  } else if (schedule == "reuse_all") {
    cfg.schedule = mllam::TaskSchedule::reuse_all;
  } else {
    throw std::invalid_argument("unknown schedule: " + schedule);
  }
  if (u_solver == "dense") {
    cfg.u_solver = mllam::USolver::dense;
  } else if (u_solver != "cg") {
    throw std::invalid_argument("unknown u-solver: " + u_solver);
  }
  cfg.shuffle_seed = mllam::rng::keyed(seed, mllam::rng::kStreamDerived, 1, 0);

  mllam::Subspace u0 = [&] {
    if (init == "mom") return mllam::mom_init(instance);
    if (init == "random") {
      return mllam::random_init(instance.ambient_dim, instance.subspace_dim, seed);
    }
    throw std::invalid_argument("unknown init: " + init);
  }();

  const mllam::FitReport report = mllam::fit(instance, u0, cfg);
  for (const auto& warning : report.warnings) {
    std::cerr << "warning: " << warning << "\n";
  }
  if (!out.empty()) mllam::io::save_fit_report(report, out);
  if (!save_u.empty()) mllam::io::write_matrix(save_u, report.final_u.basis);
  if (!report.per_iteration_errors.empty()) {
    std::cout << "final subspace error (frobenius): "
              << report.per_iteration_errors.back().frob << "\n";
  } else {
    std::cout << "fit finished (" << k << " iterations, no ground truth)\n";
  }
  return 0;
}

int run_sweep_cmd(const std::string& config, const std::string& out,
                  const std::string& svg, int threads, bool timing) {
  mllam::SweepSpec spec = mllam::load_sweep_spec(config);
  if (threads > 0) spec.threads = threads;
  if (timing) spec.record_timing = true;

  const mllam::SweepResult result = mllam::run_sweep(spec);
  if (!out.empty()) mllam::emit_csv(result, out);
  if (!svg.empty()) mllam::emit_plot(result, svg);
  for (const auto& note : result.notes) {
    std::cerr << "note: " << note << "\n";
  }
  std::cout << result.rows.size() << " cells completed";
  if (!result.failures.empty()) {
    std::cout << ", " << result.failures.size() << " failed";
  }
  std::cout << "\n";
  for (const auto& failure : result.failures) {
    std::cerr << "error: " << failure << "\n";
  }
  return result.failures.empty() ? 0 : 2;
}

int run_adapt(const std::string& in, const std::string& u_file,
              std::vector<int> m_plus, int tasks, double sigma,
              std::uint64_t seed, const std::string& out) {
  const auto instance = mllam::io::load_instance(in);
  if (!instance.ground_truth.has_value()) {
    throw std::invalid_argument(
        "adapt needs an instance with ground truth to score against");
  }
  const auto& truth = *instance.ground_truth;
  const mllam::Subspace learned(mllam::io::read_matrix(u_file));
  if (learned.d() != instance.ambient_dim ||
      learned.r() != instance.subspace_dim) {
    throw std::invalid_argument("learned subspace shape does not match instance");
  }
  if (m_plus.empty()) m_plus = {instance.subspace_dim};
  std::sort(m_plus.begin(), m_plus.end());
  if (tasks < 1) throw std::invalid_argument("--tasks must be >= 1");

  json summary;
  summary["tasks"] = tasks;
  summary["sigma"] = sigma;
  summary["m_plus"] = m_plus;
  json means = json::array();
  for (std::size_t level = 0; level < m_plus.size(); ++level) {
    const int shots = m_plus[level];
    if (shots < 1) throw std::invalid_argument("--m-plus must be >= 1");
    double total = 0.0;
    for (int i = 0; i < tasks; ++i) {
      const std::uint64_t task_seed =
          mllam::rng::keyed(seed, mllam::rng::kStreamDerived, level, i);
      const mllam::Vector v_star =
          mllam::sample_regressor(instance.subspace_dim, task_seed, i);
      const mllam::Matrix x =
          mllam::sample_examples(shots, instance.ambient_dim, task_seed, i);
      const mllam::Vector y =
          x * (truth.u_star.basis * v_star) +
          mllam::sample_noise(shots, sigma, task_seed, i);
      const auto reg = mllam::adapt(learned, x, y);
      total += mllam::regressor_mse(reg.subspace, reg.coeffs, truth.u_star, v_star);
    }
    means.push_back(total / tasks);
  }
  summary["mean_mse"] = means;

  const std::string text = summary.dump(2);
  if (out.empty()) {
    std::cout << text << "\n";
  } else {
    std::ofstream file(out);
    if (!file) throw std::runtime_error("cannot write " + out);
    file << text << "\n";
    std::cout << "wrote adaptation summary to " << out << "\n";
  }
  return 0;
}

int run_plot(const std::string& in, const std::string& out, int r_override) {
  std::ifstream file(in);
  if (!file) throw std::runtime_error("cannot read " + in);
  mllam::SweepResult result = mllam::parse_csv(file);
  if (r_override > 0) result.r = r_override;
  mllam::emit_plot(result, out);
  std::cout << "wrote " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "mllam: meta-learning of linear regressors on a shared low-rank "
      "subspace"};
  app.require_subcommand(1);

  // generate
  int d = 100;
  int r = 5;
  int t = 200;
  int m = 25;
  double sigma = 1.0;
  std::uint64_t seed = 0;
  std::string out_dir;
  auto* generate = app.add_subcommand("generate", "generate a synthetic instance");
  generate->add_option("--d", d, "ambient dimension")->required();
  generate->add_option("--r", r, "subspace dimension")->required();
  generate->add_option("--t", t, "number of tasks")->required();
  generate->add_option("--m", m, "samples per task")->required();
  generate->add_option("--sigma", sigma, "noise standard deviation")->required();
  generate->add_option("--seed", seed, "master seed");
  generate->add_option("--out", out_dir, "output directory")->required();

  // fit
  std::string fit_in;
  std::string fit_method = "mllam";
  int fit_k = 20;
  std::string fit_schedule = "reuse_all";
  std::string fit_init = "mom";
  std::uint64_t fit_seed = 0;
  std::string fit_u_solver = "cg";
  std::string fit_out;
  std::string fit_save_u;
  auto* fit_cmd = app.add_subcommand("fit", "fit a representation to an instance");
  fit_cmd->add_option("--in", fit_in, "instance directory")->required();
  fit_cmd->add_option("--method", fit_method, "mllam or mllams");
  fit_cmd->add_option("--K", fit_k, "iterations");
  fit_cmd->add_option("--schedule", fit_schedule, "reuse_all or partition");
  fit_cmd->add_option("--init", fit_init, "mom or random");
  fit_cmd->add_option("--seed", fit_seed, "seed for shuffling / random init");
  fit_cmd->add_option("--u-solver", fit_u_solver, "cg or dense");
  fit_cmd->add_option("--out", fit_out, "fit report (json)");
  fit_cmd->add_option("--save-u", fit_save_u, "write the learned basis (bin)");

  // sweep
  std::string sweep_config;
  std::string sweep_out;
  std::string sweep_svg;
  int sweep_threads = 0;
  bool sweep_timing = false;
  auto* sweep_cmd = app.add_subcommand("sweep", "run a method-comparison sweep");
  sweep_cmd->add_option("--config", sweep_config, "sweep spec (json)")->required();
  sweep_cmd->add_option("--out", sweep_out, "csv output path");
  sweep_cmd->add_option("--svg", sweep_svg, "svg plot path");
  sweep_cmd->add_option("--threads", sweep_threads, "worker pool size");
  sweep_cmd->add_flag("--timing", sweep_timing,
                      "record measured wall times (breaks byte-reproducibility)");

  // adapt
  std::string adapt_in;
  std::string adapt_u;
  std::vector<int> adapt_m_plus;
  int adapt_tasks = 200;
  double adapt_sigma = 0.1;
  std::uint64_t adapt_seed = 0;
  std::string adapt_out;
  auto* adapt_cmd =
      app.add_subcommand("adapt", "few-shot adaptation on fresh tasks");
  adapt_cmd->add_option("--in", adapt_in, "instance directory (ground truth)")
      ->required();
  adapt_cmd->add_option("--u", adapt_u, "learned basis file (bin)")->required();
  adapt_cmd->add_option("--m-plus", adapt_m_plus, "shot counts (repeatable)");
  adapt_cmd->add_option("--tasks", adapt_tasks, "fresh tasks per shot count");
  adapt_cmd->add_option("--sigma", adapt_sigma, "noise on fresh tasks");
  adapt_cmd->add_option("--seed", adapt_seed, "seed for fresh tasks");
  adapt_cmd->add_option("--out", adapt_out, "summary output (json)");

  // plot
  std::string plot_in;
  std::string plot_out;
  int plot_r = 0;
  auto* plot_cmd = app.add_subcommand("plot", "render a sweep csv as svg");
  plot_cmd->add_option("--in", plot_in, "sweep csv")->required();
  plot_cmd->add_option("--out", plot_out, "svg output path")->required();
  plot_cmd->add_option("--r", plot_r, "override the subspace dimension");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (generate->parsed()) {
      return run_generate(d, r, t, m, sigma, seed, out_dir);
    }
    if (fit_cmd->parsed()) {
      return run_fit(fit_in, fit_method, fit_k, fit_schedule, fit_init, fit_seed,
                     fit_u_solver, fit_out, fit_save_u);
    }
    if (sweep_cmd->parsed()) {
      return run_sweep_cmd(sweep_config, sweep_out, sweep_svg, sweep_threads,
                           sweep_timing);
    }
    if (adapt_cmd->parsed()) {
      return run_adapt(adapt_in, adapt_u, adapt_m_plus, adapt_tasks, adapt_sigma,
                       adapt_seed, adapt_out);
    }
    if (plot_cmd->parsed()) {
      return run_plot(plot_in, plot_out, plot_r);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
