#include "darkdimer/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

namespace darkdimer {
namespace {

constexpr int kMaxAtoms = 8;

DensityMatrix ground_state(int n_at) {
  return DensityMatrix::from_pure(PureState(basis_vector(std::vector<bool>(n_at, false))));
}

SteadyStateResult solve(const ArrayGeometry& geo, const ExperimentConfig& cfg,
                        const DensityMatrix& rho0) {
  const ModelOperators model = build_model(geo, cfg.bath(), cfg.gamma);
  return steady_state(rho0, model, cfg.evolve_config());
}

template <typename T>
std::vector<T> unwrap(std::vector<std::optional<T>>& slots) {
  std::vector<T> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace

std::vector<double> GridAxis::values() const {
  if (count == 1) return {start};
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i) v.push_back(start + (stop - start) * i / (count - 1));
  return v;
}

void ExperimentConfig::validate() const {
  auto require = [](bool ok, const char* field, const std::string& what) {
    if (!ok) throw ConfigError(field, what);
  };
  require(n_at >= 1 && n_at <= kMaxAtoms, "n_at",
          "must lie in [1, 8], got " + std::to_string(n_at));
  require(std::isfinite(n_ph) && n_ph >= 0.0, "n_ph", "must be finite and >= 0");
  require(std::isfinite(phi), "phi", "must be finite");
  require(std::isfinite(k0a) && k0a >= 0.0, "k0a", "must be finite and >= 0");
  require(std::isfinite(k0zc), "k0zc", "must be finite");
  require(std::isfinite(gamma) && gamma > 0.0, "gamma", "must be finite and > 0");
  require(dt > 0.0 && dt < 0.1, "dt", "must lie in (0, 0.1)");
  require(std::isfinite(t_max) && t_max > 0.0, "t_max", "must be finite and > 0");
  require(tol > 0.0, "tol", "must be > 0");
  require(record_stride >= 1, "record_stride", "must be >= 1");
  require(workers >= 1, "workers", "must be >= 1");
  require(grid_zc.count >= 1 && std::isfinite(grid_zc.start) && std::isfinite(grid_zc.stop),
          "grid_zc", "needs a finite range and count >= 1");
  require(grid_a.count >= 1 && std::isfinite(grid_a.start) && std::isfinite(grid_a.stop) &&
              grid_a.start >= 0.0 && grid_a.stop >= 0.0,
          "grid_a", "needs a finite non-negative range and count >= 1");
  require(!initial.empty(), "initial", "must be ground, plus-pi-4 or a file path");
  require(!out.empty(), "out", "must not be empty");
}

EvolveConfig ExperimentConfig::evolve_config() const {
  EvolveConfig c;
  c.dt = dt;
  c.t_max = t_max;
  c.record_stride = record_stride;
  c.convergence_tol = tol;
  return c;
}

BathParams ExperimentConfig::bath() const { return make_bath(n_ph, phi); }

ArrayGeometry ExperimentConfig::geometry() const { return make_geometry(n_at, k0a, k0zc); }

PureState plus_pi4_state(int n_at) {
  ComplexMatrix single(2, 1);
  single << 1.0, std::exp(kI * (M_PI / 4));
  ComplexMatrix v = ComplexMatrix::Ones(1, 1);
  for (int n = 0; n < n_at; ++n) v = kron(v, single);
  return PureState::normalized(v.col(0));
}

PureState read_pure_state_file(const std::string& path, int n_at) {
  std::ifstream in(path);
  if (!in) throw ConfigError("initial", "cannot open pure-state file '" + path + "'");
  std::vector<Complex> amps;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    double re = 0.0;
    double im = 0.0;
    if (!(fields >> re)) {
      if (line.find_first_not_of(" \t\r") != std::string::npos) {
        throw ConfigError("initial", path + ":" + std::to_string(line_no) + ": not a number");
      }
      continue;
    }
    if (!(fields >> im)) {
      if (!fields.eof()) {
        throw ConfigError("initial", path + ":" + std::to_string(line_no) + ": not a number");
      }
      im = 0.0;
    }
    std::string extra;
    if (fields >> extra) {
      throw ConfigError("initial", path + ":" + std::to_string(line_no) + ": expected 're im'");
    }
    amps.emplace_back(re, im);
  }
  const std::size_t dim = hilbert_dim(n_at);
  if (amps.size() != dim) {
    throw ConfigError("initial", "pure-state file has " + std::to_string(amps.size()) +
                                     " amplitudes, expected " + std::to_string(dim));
  }
  ComplexVector v =
      Eigen::Map<const ComplexVector>(amps.data(), static_cast<Eigen::Index>(amps.size()));
  if (v.norm() == 0.0) throw ConfigError("initial", "pure-state file holds a zero vector");
  return PureState::normalized(std::move(v));
}

DensityMatrix initial_state(const ExperimentConfig& cfg) {
  if (cfg.initial == "ground") return ground_state(cfg.n_at);
  if (cfg.initial == "plus-pi-4") return DensityMatrix::from_pure(plus_pi4_state(cfg.n_at));
  return DensityMatrix::from_pure(read_pure_state_file(cfg.initial, cfg.n_at));
}

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn) {
  const std::size_t n_threads =
      std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, workers)));
  if (n_threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
}

std::vector<SweepCell> run_sweep(const ExperimentConfig& cfg, const std::vector<double>& zc_values,
                                 const std::vector<double>& a_values) {
  cfg.validate();
  const BathParams bath = cfg.bath();
  const DensityMatrix rho0 = ground_state(cfg.n_at);
  const EvolveConfig ecfg = cfg.evolve_config();
  const CollectiveSpin spin(cfg.n_at);
  std::vector<SweepCell> cells(zc_values.size() * a_values.size());
  parallel_for(cells.size(), cfg.workers, [&](std::size_t idx) {
    SweepCell& cell = cells[idx];
    cell.k0zc = zc_values[idx / a_values.size()];
    cell.k0a = a_values[idx % a_values.size()];
    try {
      const ModelOperators model =
          build_model(make_geometry(cfg.n_at, cell.k0a, cell.k0zc), bath, cfg.gamma);
      const SteadyStateResult ss = steady_state(rho0, model, ecfg);
      const PolarizationMoments pm = spin.moments(ss.state.matrix());
      cell.var_x = pm.var_x;
      cell.var_y = pm.var_y;
      cell.mean_z = pm.mean_z;
      cell.purity = purity(ss.state);
      cell.t_converge = ss.t_converge;
      cell.converged = ss.converged;
    } catch (const IntegrationError&) {
      cell.var_x = cell.var_y = cell.mean_z = cell.purity = cell.t_converge = NAN;
      cell.converged = false;
    }
  });
  return cells;
}

double purity_settling_time(const TimeSeries& series, double tolerance) {
  if (series.records.empty()) return 0.0;
  const double final_purity = series.records.back().purity;
  double settle = series.records.back().t;
  for (auto it = series.records.rbegin(); it != series.records.rend(); ++it) {
    if (std::abs(it->purity - final_purity) > tolerance) break;
    settle = it->t;
  }
  return settle;
}

std::vector<SweepCell> run_fig2(const ExperimentConfig& cfg) {
  ExperimentConfig c = cfg;
  c.n_at = 4;
  return run_sweep(c, c.grid_zc.values(), c.grid_a.values());
}

std::vector<Fig3Panel> run_fig3(const ExperimentConfig& cfg) {
  cfg.validate();
  const BathParams bath = cfg.bath();
  constexpr int kAtoms = 6;
  const std::vector<std::pair<std::string, double>> specs = {{"dimer", M_PI / 4},
                                                             {"melted", M_PI}};
  std::vector<std::optional<Fig3Panel>> panels(specs.size());
  parallel_for(specs.size(), cfg.workers, [&](std::size_t i) {
    const ArrayGeometry geo = make_geometry(kAtoms, specs[i].second, 0.0);
    SteadyStateResult ss = solve(geo, cfg, ground_state(kAtoms));
    PureState analytic =
        specs[i].first == "dimer" ? dimer_chain(geo, bath) : melted_dark(geo, bath, kAtoms / 2);
    const double fid = fidelity(analytic, ss.state);
    CorrelationMatrix corr = pair_correlations(ss.state, geo);
    panels[i].emplace(Fig3Panel{specs[i].first, geo, std::move(ss), std::move(corr),
                                std::move(analytic), fid});
  });
  return unwrap(panels);
}

std::vector<Fig4Trace> run_fig4(const ExperimentConfig& cfg, const std::vector<int>& sizes) {
  cfg.validate();
  struct Job {
    std::string kind;
    int n_at;
    double k0a;
    double k0zc;
  };
  // The chain is centred on zc. At k0a = pi/4 the pair centres meet the
  // dimer condition with zc = 0 for an odd number of pairs and zc = pi/4
  // for an even number.
  std::vector<Job> jobs;
  for (int n : sizes) jobs.push_back({"dimer", n, M_PI / 4, (n / 2) % 2 == 1 ? 0.0 : M_PI / 4});
  for (int n : sizes) jobs.push_back({"melted", n, M_PI, 0.0});
  std::vector<std::optional<Fig4Trace>> traces(jobs.size());
  parallel_for(jobs.size(), cfg.workers, [&](std::size_t i) {
    const ArrayGeometry geo = make_geometry(jobs[i].n_at, jobs[i].k0a, jobs[i].k0zc);
    SteadyStateResult ss = solve(geo, cfg, ground_state(jobs[i].n_at));
    const double settle = purity_settling_time(ss.series);
    traces[i].emplace(Fig4Trace{jobs[i].kind, jobs[i].n_at, std::move(ss), settle});
  });
  return unwrap(traces);
}

std::vector<Fig5Panel> run_fig5(const ExperimentConfig& cfg) {
  cfg.validate();
  const BathParams bath = cfg.bath();
  constexpr int kAtoms = 6;
  struct Spec {
    std::string name;
    PopulationLaw law;
    double k0zc;
    double k0a;
  };
  // k0zc = 0 for the dimer panel puts every nearest-neighbour pair centre on
  // an antinode of the field correlations at k0a = pi/4.
  const std::vector<Spec> specs = {{"thermal", PopulationLaw::kThermal, M_PI / 4, 2 * M_PI},
                                   {"squeezed", PopulationLaw::kSqueezed, 0.0, 2 * M_PI},
                                   {"dimer", PopulationLaw::kDimer, 0.0, M_PI / 4}};
  const DensityMatrix rho0 = DensityMatrix::from_pure(plus_pi4_state(kAtoms));
  std::vector<std::optional<Fig5Panel>> panels(specs.size());
  parallel_for(specs.size(), cfg.workers, [&](std::size_t i) {
    const ArrayGeometry geo = make_geometry(kAtoms, specs[i].k0a, specs[i].k0zc);
    SteadyStateResult ss = solve(geo, cfg, rho0);
    std::vector<double> pops = excitation_populations(ss.state);
    panels[i].emplace(Fig5Panel{specs[i].name, specs[i].law, geo, std::move(ss), std::move(pops),
                                predicted_populations(specs[i].law, kAtoms, bath)});
  });
  return unwrap(panels);
}

}  // namespace darkdimer
