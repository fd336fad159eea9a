#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli_app.hpp"

using namespace darkdimer;
using namespace darkdimer::cli;
using doctest::Approx;

namespace {

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("darkdimer_cli_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

Invocation parse(const std::vector<std::string>& args) {
  std::ostringstream out;
  return parse_command_line(args, out);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("angle literals") {
  CHECK(parse_angle("0.5", "k0a") == 0.5);
  CHECK(parse_angle("pi", "k0a") == Approx(M_PI));
  CHECK(parse_angle("pi/4", "k0a") == Approx(M_PI / 4));
  CHECK(parse_angle("3*pi/4", "k0a") == Approx(3 * M_PI / 4));
  CHECK(parse_angle("2pi", "k0a") == Approx(2 * M_PI));
  CHECK(parse_angle("-pi/2", "k0zc") == Approx(-M_PI / 2));
  CHECK(parse_angle("1e-3", "k0zc") == Approx(1e-3));
  CHECK_THROWS_AS(parse_angle("pie", "k0a"), ConfigError);
  CHECK_THROWS_AS(parse_angle("", "k0a"), ConfigError);
  CHECK_THROWS_AS(parse_angle("pi/0", "k0a"), ConfigError);
}

TEST_CASE("grid literals") {
  const GridAxis g = parse_grid("0:pi:9", "grid_zc");
  CHECK(g.start == 0.0);
  CHECK(g.stop == Approx(M_PI));
  CHECK(g.count == 9);
  CHECK_THROWS_AS(parse_grid("0:pi", "grid_zc"), ConfigError);
  CHECK_THROWS_AS(parse_grid("0:pi:x", "grid_zc"), ConfigError);
  CHECK_THROWS_AS(parse_grid("0:pi:0", "grid_zc"), ConfigError);
}

TEST_CASE("no flags gives the default configuration") {
  const Invocation inv = parse({"steady"});
  CHECK(inv.command == "steady");
  const ExperimentConfig def;
  CHECK(inv.config.n_at == def.n_at);
  CHECK(inv.config.n_ph == def.n_ph);
  CHECK(inv.config.k0a == Approx(def.k0a).epsilon(1e-11));
  CHECK(inv.config.dt == def.dt);
  CHECK(inv.config.t_max == def.t_max);
  CHECK(inv.config.tol == def.tol);
  CHECK(inv.config.grid_a.count == def.grid_a.count);
}

TEST_CASE("flags before or after the subcommand") {
  const Invocation a = parse({"--n-at", "3", "steady", "--k0a", "pi/2", "--n-ph=0.5"});
  CHECK(a.config.n_at == 3);
  CHECK(a.config.n_ph == 0.5);
  CHECK(a.config.k0a == Approx(M_PI / 2));
  const Invocation b = parse({"experiment", "fig4", "--workers", "2"});
  CHECK(b.experiment == "fig4");
  CHECK(b.config.workers == 2);
}

TEST_CASE("range error names the field") {
  try {
    parse({"--n-ph=-1", "steady"});
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "n_ph");
  }
  std::ostringstream out, err;
  CHECK(run({"--n-ph=-1", "steady"}, out, err) == kExitUsage);
  CHECK(err.str().find("n_ph") != std::string::npos);
}

TEST_CASE("usage errors exit with 2") {
  std::ostringstream out, err;
  CHECK(run({"experiment", "fig9"}, out, err) == kExitUsage);
  CHECK(run({}, out, err) == kExitUsage);
  CHECK(run({"steady", "--bogus"}, out, err) == kExitUsage);
  CHECK(run({"--n-at", "x", "steady"}, out, err) == kExitUsage);
  CHECK(run({"--help"}, out, err) == kExitOk);
}

TEST_CASE("config file values yield to flags") {
  const auto dir = scratch("config");
  const auto file = (dir / "run.ini").string();
  std::ofstream(file) << "# comment\nn-at = 6\nn-ph = 0.5\nk0a = pi/4\ngrid-zc = 0:pi/2:3\n";
  const Invocation inv = parse({"steady", "--config", file, "--n-at=4"});
  CHECK(inv.config.n_at == 4);
  CHECK(inv.config.n_ph == 0.5);
  CHECK(inv.config.k0a == Approx(M_PI / 4));
  CHECK(inv.config.grid_zc.count == 3);
  CHECK(inv.config.grid_zc.stop == Approx(M_PI / 2));

  std::ofstream(file) << "n-ph = -2\n";
  try {
    parse({"steady", "--config", file});
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "n_ph");
  }
  std::ostringstream out, err;
  std::ofstream(file) << "dt = fast\n";
  CHECK(run({"steady", "--config", file}, out, err) == kExitUsage);
  CHECK(run({"steady", "--config", (dir / "missing.ini").string()}, out, err) == kExitUsage);
}

TEST_CASE("steady command writes a series and manifest") {
  const auto dir = scratch("steady");
  std::ostringstream out, err;
  const int code = run({"steady", "--n-at", "2", "--dt", "0.01", "--out", dir.string()}, out, err);
  CHECK(code == kExitOk);
  CHECK(out.str().find("purity") != std::string::npos);
  CHECK(std::filesystem::exists(dir / "steady.csv"));
  CHECK(std::filesystem::exists(dir / "steady.json"));
  CHECK(slurp(dir / "steady.csv").rfind("t,purity,mean_x", 0) == 0);
}

TEST_CASE("non-convergence in a single run exits with 1") {
  const auto dir = scratch("noconv");
  std::ostringstream out, err;
  CHECK(run({"steady", "--n-at", "2", "--dt", "0.01", "--t-max", "1", "--out", dir.string()}, out,
            err) == kExitRuntime);
}

TEST_CASE("precondition failures exit with 1") {
  const auto dir = scratch("dark");
  std::ostringstream out, err;
  CHECK(run({"darkstate", "--n-at", "4", "--k0zc", "0", "--out", dir.string()}, out, err) ==
        kExitRuntime);
  CHECK(run({"darkstate", "--n-at", "4", "--k0zc", "pi/4", "--out", dir.string()}, out, err) ==
        kExitOk);
  CHECK(run({"darkstate", "--state", "melted", "--k0a", "pi", "--out", dir.string()}, out, err) ==
        kExitOk);
}

TEST_CASE("sweep output is byte-identical across runs and worker counts") {
  const auto a = scratch("sweep_a");
  const auto b = scratch("sweep_b");
  std::ostringstream out, err;
  const std::vector<std::string> common = {"sweep", "--n-at", "2", "--dt", "0.01",
                                           "--grid-zc", "0:pi/2:3", "--grid-a", "0:pi/2:3"};
  auto with = [&](std::vector<std::string> extra) {
    std::vector<std::string> args = common;
    args.insert(args.end(), extra.begin(), extra.end());
    return args;
  };
  CHECK(run(with({"--out", a.string()}), out, err) == kExitOk);
  CHECK(run(with({"--out", b.string(), "--workers", "3"}), out, err) == kExitOk);
  const std::string csv = slurp(a / "sweep.csv");
  CHECK(csv == slurp(b / "sweep.csv"));
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 10);
  CHECK(csv.back() == '\n');
}
