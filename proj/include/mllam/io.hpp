// On-disk formats.
//
// A problem instance serializes to a directory:
//   instance.json     d, r, t, m, sigma, seed, has_ground_truth
//   examples.bin      (t*m) x d, tasks stacked in order
//   observations.bin  (t*m) x 1
//   u_star.bin        d x r     (ground truth only)
//   v_star.bin        t x r     (ground truth only)
// Each .bin is the 8-byte magic "MLLAM\0v1", then u64 rows, u64 cols, then
// row-major float64, all little-endian.

#pragma once

#include <bit>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "mllam/model.hpp"
#include "mllam/solvers.hpp"

static_assert(std::endian::native == std::endian::little,
              "matrix files are little-endian; big-endian hosts are unsupported");

namespace mllam::io {

using json = nlohmann::json;

inline constexpr char kMagic[8] = {'M', 'L', 'L', 'A', 'M', '\0', 'v', '1'};

namespace detail {

inline void write_matrix_header(std::ofstream& out, std::uint64_t rows,
                                std::uint64_t cols) {
  out.write(kMagic, sizeof(kMagic));
  out.write(reinterpret_cast<const char*>(&rows), sizeof(rows));
  out.write(reinterpret_cast<const char*>(&cols), sizeof(cols));
}

inline void append_row_major(std::ofstream& out, const Matrix& mat) {
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>
      row_major = mat;
  out.write(reinterpret_cast<const char*>(row_major.data()),
            static_cast<std::streamsize>(sizeof(double) *
                                         static_cast<std::size_t>(mat.size())));
}

}  // namespace detail

inline void write_matrix(const std::filesystem::path& path, const Matrix& mat) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  detail::write_matrix_header(out, static_cast<std::uint64_t>(mat.rows()),
                              static_cast<std::uint64_t>(mat.cols()));
  detail::append_row_major(out, mat);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

inline Matrix read_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || !std::equal(magic, magic + 8, kMagic)) {
    throw std::runtime_error("bad magic in matrix file: " + path.string());
  }
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;
  in.read(reinterpret_cast<char*>(&rows), sizeof(rows));
  in.read(reinterpret_cast<char*>(&cols), sizeof(cols));
  if (!in || rows == 0 || cols == 0 || rows * cols > (1ULL << 30) ||
      rows > (1ULL << 30) || cols > (1ULL << 30)) {
    throw std::runtime_error("bad dimensions in matrix file: " + path.string());
  }
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> row_major(
      static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  in.read(reinterpret_cast<char*>(row_major.data()),
          static_cast<std::streamsize>(sizeof(double) * rows * cols));
  if (!in) throw std::runtime_error("truncated matrix file: " + path.string());
  return row_major;
}

inline void save_instance(const ProblemInstance& instance,
                          const std::filesystem::path& dir) {
  mllam::detail::require(instance.t() >= 1, "save_instance: no tasks");
  const int m = instance.tasks.front().m();
  for (const auto& task : instance.tasks) {
    mllam::detail::require(task.m() == m,
                    "save_instance: tasks must share the same m");
    mllam::detail::require(task.d() == instance.ambient_dim,
                    "save_instance: tasks must share the same d");
  }
  std::filesystem::create_directories(dir);

  json header;
  header["d"] = instance.ambient_dim;
  header["r"] = instance.subspace_dim;
  header["t"] = instance.t();
  header["m"] = m;
  header["sigma"] = instance.noise_sigma;
  header["seed"] = instance.seed;
  header["has_ground_truth"] = instance.ground_truth.has_value();
  std::ofstream out(dir / "instance.json");
  if (!out) throw std::runtime_error("cannot write " + (dir / "instance.json").string());
  out << header.dump(2) << '\n';

  // tasks are streamed out one at a time; the stacked matrices can be large
  const std::uint64_t total_rows =
      static_cast<std::uint64_t>(instance.t()) * static_cast<std::uint64_t>(m);
  {
    std::ofstream out(dir / "examples.bin", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write examples.bin in " + dir.string());
    detail::write_matrix_header(out, total_rows,
                                static_cast<std::uint64_t>(instance.ambient_dim));
    for (const auto& task : instance.tasks) detail::append_row_major(out, task.examples);
    if (!out) throw std::runtime_error("write failed: examples.bin");
  }
  {
    std::ofstream out(dir / "observations.bin", std::ios::binary);
    if (!out) {
      throw std::runtime_error("cannot write observations.bin in " + dir.string());
    }
    detail::write_matrix_header(out, total_rows, 1);
    for (const auto& task : instance.tasks) {
      detail::append_row_major(out, task.observations);
    }
    if (!out) throw std::runtime_error("write failed: observations.bin");
  }
  if (instance.ground_truth.has_value()) {
    write_matrix(dir / "u_star.bin", instance.ground_truth->u_star.basis);
    write_matrix(dir / "v_star.bin", instance.ground_truth->v_star.coefficients);
  }
}

inline ProblemInstance load_instance(const std::filesystem::path& dir) {
  std::ifstream in(dir / "instance.json");
  if (!in) throw std::runtime_error("cannot read " + (dir / "instance.json").string());
  json header = json::parse(in);
  const int d = header.at("d").get<int>();
  const int r = header.at("r").get<int>();
  const int t = header.at("t").get<int>();
  const int m = header.at("m").get<int>();

  const Matrix examples = read_matrix(dir / "examples.bin");
  const Matrix observations = read_matrix(dir / "observations.bin");
  if (examples.rows() != static_cast<Eigen::Index>(t) * m || examples.cols() != d ||
      observations.rows() != static_cast<Eigen::Index>(t) * m ||
      observations.cols() != 1) {
    throw std::runtime_error("instance data does not match header: " + dir.string());
  }

  ProblemInstance instance;
  instance.ambient_dim = d;
  instance.subspace_dim = r;
  instance.noise_sigma = header.at("sigma").get<double>();
  instance.seed = header.at("seed").get<std::uint64_t>();
  instance.tasks.reserve(static_cast<std::size_t>(t));
  for (int i = 0; i < t; ++i) {
    instance.tasks.emplace_back(
        Matrix(examples.middleRows(static_cast<Eigen::Index>(i) * m, m)),
        Vector(observations.col(0).segment(static_cast<Eigen::Index>(i) * m, m)), i);
  }
  if (header.at("has_ground_truth").get<bool>()) {
    Matrix u = read_matrix(dir / "u_star.bin");
    Matrix v = read_matrix(dir / "v_star.bin");
    if (u.rows() != d || u.cols() != r || v.rows() != t || v.cols() != r) {
      throw std::runtime_error("ground-truth shapes do not match header: " +
                               dir.string());
    }
    instance.ground_truth = GroundTruth{Subspace(std::move(u)),
                                        RegressorSet{std::move(v)}};
  }
  return instance;
}

inline json fit_report_to_json(const FitReport& report) {
  json j;
  j["iterations"] = report.selected_task_counts.size();
  json frob = json::array();
  json spectral = json::array();
  json rescaled = json::array();
  for (const auto& err : report.per_iteration_errors) {
    frob.push_back(err.frob);
    spectral.push_back(err.spectral);
    rescaled.push_back(err.rescaled_frob);
  }
  j["frob"] = std::move(frob);
  j["spectral"] = std::move(spectral);
  j["rescaled"] = std::move(rescaled);
  j["selected_task_counts"] = report.selected_task_counts;
  j["wall_ms"] = report.wall_ms;
  j["warnings"] = report.warnings;
  if (report.init_condition_held.has_value()) {
    j["init_condition_held"] = *report.init_condition_held;
  } else {
    j["init_condition_held"] = nullptr;
  }
  std::vector<std::vector<double>> basis(
      static_cast<std::size_t>(report.final_u.d()));
  for (int i = 0; i < report.final_u.d(); ++i) {
    basis[static_cast<std::size_t>(i)].resize(
        static_cast<std::size_t>(report.final_u.r()));
    for (int c = 0; c < report.final_u.r(); ++c)
      basis[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] =
          report.final_u.basis(i, c);
  }
  j["final_u"] = std::move(basis);
  return j;
}

inline void save_fit_report(const FitReport& report,
                            const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << fit_report_to_json(report).dump(2) << '\n';
}

}  // namespace mllam::io
