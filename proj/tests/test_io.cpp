#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>

#include "mllam/init.hpp"
#include "mllam/io.hpp"
#include "mllam/model.hpp"
#include "mllam/solvers.hpp"

using namespace mllam;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("mllam_io_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  static int& counter() {
    static int n = 0;
    return n;
  }
};

}  // namespace

TEST_SUITE("io") {

TEST_CASE("matrix files round-trip bit-exactly") {
  TempDir tmp;
  const Matrix original = sample_examples(7, 5, 31, 0);
  io::write_matrix(tmp.path / "a.bin", original);
  const Matrix loaded = io::read_matrix(tmp.path / "a.bin");
  CHECK(loaded == original);
}

TEST_CASE("matrix files carry the magic prefix") {
  TempDir tmp;
  io::write_matrix(tmp.path / "a.bin", Matrix::Identity(3, 2));
  std::ifstream in(tmp.path / "a.bin", std::ios::binary);
  char head[8];
  in.read(head, 8);
  CHECK(std::string(head, head + 8) == std::string("MLLAM\0v1", 8));
}

TEST_CASE("corrupt or truncated matrix files are rejected") {
  TempDir tmp;
  io::write_matrix(tmp.path / "a.bin", Matrix::Identity(3, 2));

  {
    std::fstream f(tmp.path / "a.bin",
                   std::ios::binary | std::ios::in | std::ios::out);
    f.seekp(0);
    f.put('X');
  }
  CHECK_THROWS_AS(io::read_matrix(tmp.path / "a.bin"), std::runtime_error);

  io::write_matrix(tmp.path / "b.bin", Matrix::Identity(3, 2));
  fs::resize_file(tmp.path / "b.bin", 30);
  CHECK_THROWS_AS(io::read_matrix(tmp.path / "b.bin"), std::runtime_error);

  CHECK_THROWS_AS(io::read_matrix(tmp.path / "missing.bin"), std::runtime_error);
}

TEST_CASE("instances round-trip through a directory") {
  TempDir tmp;
  const auto inst = generate_instance(8, 2, 5, 6, 0.25, 99);
  io::save_instance(inst, tmp.path / "inst");
  const auto loaded = io::load_instance(tmp.path / "inst");

  CHECK(loaded.ambient_dim == 8);
  CHECK(loaded.subspace_dim == 2);
  CHECK(loaded.noise_sigma == 0.25);
  CHECK(loaded.seed == 99);
  REQUIRE(loaded.t() == 5);
  for (int i = 0; i < 5; ++i) {
    CHECK(loaded.tasks[i].examples == inst.tasks[i].examples);
    CHECK(loaded.tasks[i].observations == inst.tasks[i].observations);
    CHECK(loaded.tasks[i].task_id == i);
  }
  REQUIRE(loaded.ground_truth.has_value());
  CHECK(loaded.ground_truth->u_star.basis == inst.ground_truth->u_star.basis);
  CHECK(loaded.ground_truth->v_star.coefficients ==
        inst.ground_truth->v_star.coefficients);
}

TEST_CASE("instances without ground truth omit the truth files") {
  TempDir tmp;
  auto inst = generate_instance(6, 2, 3, 4, 0.0, 1);
  inst.ground_truth.reset();
  io::save_instance(inst, tmp.path / "anon");
  CHECK_FALSE(fs::exists(tmp.path / "anon" / "u_star.bin"));
  const auto loaded = io::load_instance(tmp.path / "anon");
  CHECK_FALSE(loaded.ground_truth.has_value());
  CHECK(loaded.t() == 3);
}

TEST_CASE("loading a missing instance directory fails") {
  TempDir tmp;
  CHECK_THROWS_AS(io::load_instance(tmp.path / "nowhere"), std::runtime_error);
}

TEST_CASE("fit reports serialize to json") {
  const auto inst = generate_instance(8, 2, 6, 6, 0.1, 5);
  SolverConfig cfg;
  cfg.iterations = 3;
  const FitReport report = fit(inst, random_init(8, 2, 6), cfg);
  const auto j = io::fit_report_to_json(report);

  CHECK(j.at("iterations").get<int>() == 3);
  CHECK(j.at("frob").size() == 3);
  CHECK(j.at("spectral").size() == 3);
  CHECK(j.at("rescaled").size() == 3);
  CHECK(j.at("selected_task_counts").size() == 3);
  CHECK(j.at("wall_ms").size() == 3);
  CHECK(j.at("final_u").size() == 8);
  CHECK(j.at("final_u").at(0).size() == 2);
  CHECK(j.at("init_condition_held").is_boolean());

  TempDir tmp;
  io::save_fit_report(report, tmp.path / "report.json");
  std::ifstream in(tmp.path / "report.json");
  const auto parsed = nlohmann::json::parse(in);
  CHECK(parsed.at("frob") == j.at("frob"));
}

}  // TEST_SUITE
