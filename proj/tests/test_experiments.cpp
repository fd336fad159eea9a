#include <doctest.h>

#include <atomic>
#include <filesystem>
#include <fstream>

#include "darkdimer/experiments.hpp"
#include "darkdimer/export.hpp"

using namespace darkdimer;
using doctest::Approx;

namespace {

ExperimentConfig fast_config() {
  ExperimentConfig cfg;
  cfg.dt = 0.01;
  cfg.record_stride = 100;
  return cfg;
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("darkdimer_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("default configuration") {
  const ExperimentConfig cfg;
  CHECK(cfg.n_ph == 0.88);
  CHECK(cfg.phi == 0.0);
  CHECK(cfg.gamma == 1.0);
  CHECK(cfg.dt == 0.005);
  CHECK(cfg.t_max == 2.0e4);
  CHECK(cfg.tol == 1e-9);
  CHECK(cfg.initial == "ground");
  CHECK(cfg.grid_zc.count == 65);
  CHECK(cfg.grid_a.stop == Approx(M_PI));
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("validation names the field") {
  auto field_of = [](ExperimentConfig cfg) {
    try {
      cfg.validate();
    } catch (const ConfigError& e) {
      return e.field();
    }
    return std::string("none");
  };
  ExperimentConfig c;
  c.n_ph = -1.0;
  CHECK(field_of(c) == "n_ph");
  c = {};
  c.n_at = 9;
  CHECK(field_of(c) == "n_at");
  c = {};
  c.dt = 0.2;
  CHECK(field_of(c) == "dt");
  c = {};
  c.k0a = -0.1;
  CHECK(field_of(c) == "k0a");
  c = {};
  c.workers = 0;
  CHECK(field_of(c) == "workers");
  c = {};
  c.grid_a.count = 0;
  CHECK(field_of(c) == "grid_a");
}

TEST_CASE("grid axis") {
  const GridAxis g{0.0, M_PI, 9};
  const auto v = g.values();
  REQUIRE(v.size() == 9);
  CHECK(v[2] == Approx(M_PI / 4));
  CHECK(v.back() == M_PI);
  CHECK(GridAxis{0.5, 2.0, 1}.values() == std::vector<double>{0.5});
}

TEST_CASE("initial states") {
  ExperimentConfig cfg;
  cfg.n_at = 2;
  CHECK(std::abs(initial_state(cfg).matrix()(0, 0) - 1.0) < 1e-15);

  const PureState p = plus_pi4_state(2);
  CHECK(std::abs(p.amplitudes()(3) - std::exp(kI * (M_PI / 2)) / 2.0) < 1e-15);
  cfg.initial = "plus-pi-4";
  CHECK(purity(initial_state(cfg)) == Approx(1.0));

  const auto dir = scratch_dir("state");
  const auto file = (dir / "psi.txt").string();
  std::ofstream(file) << "# bell\n1 0\n0,0\n\n0 0\n1 0 # ee\n";
  cfg.initial = file;
  const DensityMatrix rho = initial_state(cfg);
  CHECK(rho.matrix()(0, 3).real() == Approx(0.5));

  std::ofstream(file) << "1 0\n0 0\n";
  CHECK_THROWS_AS(read_pure_state_file(file, 2), ConfigError);
  std::ofstream(file) << "1 x\n0 0\n0 0\n0 0\n";
  CHECK_THROWS_AS(read_pure_state_file(file, 2), ConfigError);
  CHECK_THROWS_AS(read_pure_state_file((dir / "missing").string(), 2), ConfigError);
}

TEST_CASE("parallel_for visits every index once and propagates errors") {
  std::vector<std::atomic<int>> hits(50);
  parallel_for(hits.size(), 4, [&](std::size_t i) { ++hits[i]; });
  for (const auto& h : hits) CHECK(h.load() == 1);
  CHECK_THROWS_AS(parallel_for(10, 3,
                               [](std::size_t i) {
                                 if (i == 7) throw std::runtime_error("boom");
                               }),
                  std::runtime_error);
}

TEST_CASE("sweep order and worker independence") {
  ExperimentConfig cfg = fast_config();
  cfg.n_at = 2;
  const std::vector<double> axis = {0.0, M_PI / 4, M_PI / 2};
  const auto serial = run_sweep(cfg, axis, axis);
  REQUIRE(serial.size() == 9);
  CHECK(serial[1].k0zc == 0.0);
  CHECK(serial[1].k0a == axis[1]);
  CHECK(serial[3].k0zc == axis[1]);
  CHECK(serial[3].k0a == 0.0);
  cfg.workers = 3;
  const auto parallel = run_sweep(cfg, axis, axis);
  CHECK(sweep_table(serial).str() == sweep_table(parallel).str());
}

TEST_CASE("sweep records non-convergence without aborting") {
  ExperimentConfig cfg = fast_config();
  cfg.n_at = 2;
  cfg.t_max = 0.5;
  const auto cells = run_sweep(cfg, {0.0}, {M_PI / 4, M_PI / 2});
  REQUIRE(cells.size() == 2);
  CHECK_FALSE(cells[0].converged);
  CHECK(cells[0].t_converge == Approx(0.5));
}

TEST_CASE("four-atom sweep cells: dark point pure, generic point mixed") {
  ExperimentConfig cfg = fast_config();
  cfg.n_at = 4;
  const auto cells = run_sweep(cfg, {M_PI / 4, M_PI / 8}, {M_PI / 4, M_PI / 3});
  CHECK(cells[0].converged);
  CHECK(cells[0].purity >= 0.999);
  CHECK(cells[3].purity < 0.99);
}

TEST_CASE("purity settling time") {
  TimeSeries s;
  const double pur[] = {1.0, 0.5, 0.8, 0.95, 0.9995, 1.0};
  for (int i = 0; i < 6; ++i) s.records.push_back({static_cast<double>(i), pur[i], {}, {}});
  CHECK(purity_settling_time(s) == 4.0);
  CHECK(purity_settling_time(TimeSeries{}) == 0.0);
}
