#pragma once

// Figure reproduction and parameter sweeps on top of the library layer.

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "darkdimer/darkstates.hpp"
#include "darkdimer/dynamics.hpp"
#include "darkdimer/errors.hpp"
#include "darkdimer/model.hpp"
#include "darkdimer/observables.hpp"

namespace darkdimer {

/// A configuration value out of range. `field()` names the offending key
/// using the underscore spelling (n_ph, t_max, ...).
class ConfigError : public ArgumentError {
 public:
  ConfigError(std::string field, const std::string& what)
      : ArgumentError(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// `count` evenly spaced values from start to stop inclusive.
struct GridAxis {
  double start = 0.0;
  double stop = M_PI;
  int count = 65;

  std::vector<double> values() const;
};

struct ExperimentConfig {
  int n_at = 4;
  double n_ph = 0.88;
  double phi = 0.0;
  double k0a = M_PI / 4;
  double k0zc = 0.0;
  double gamma = 1.0;
  /// "ground", "plus-pi-4" or a path to a pure-state file.
  std::string initial = "ground";
  double dt = 0.005;
  double t_max = 2.0e4;
  double tol = 1e-9;
  int record_stride = 200;
  GridAxis grid_zc;
  GridAxis grid_a;
  int workers = 1;
  std::string out = "out";

  /// Throws ConfigError naming the first invalid field.
  void validate() const;

  EvolveConfig evolve_config() const;
  BathParams bath() const;
  ArrayGeometry geometry() const;
};

/// Each atom in (|g> + e^{i pi/4} |e>) / sqrt(2).
PureState plus_pi4_state(int n_at);

/// Pure state from a text file: one amplitude per line as "re im" or
/// "re,im"; blank lines and '#' comments are skipped. The vector is
/// normalized and must have 2^n_at entries.
PureState read_pure_state_file(const std::string& path, int n_at);

DensityMatrix initial_state(const ExperimentConfig& cfg);

/// Runs fn(i) for i in [0, count) on up to `workers` threads. Exceptions are
/// rethrown on the caller's thread after all workers finish.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn);

struct SweepCell {
  double k0zc = 0.0;
  double k0a = 0.0;
  double var_x = 0.0;
  double var_y = 0.0;
  double purity = 0.0;
  double mean_z = 0.0;
  double t_converge = 0.0;
  bool converged = false;
};

/// Steady state from the ground state for every (zc, a) cell, zc-major.
/// Per-cell failures are recorded as converged = false.
std::vector<SweepCell> run_sweep(const ExperimentConfig& cfg, const std::vector<double>& zc_values,
                                 const std::vector<double>& a_values);

/// Earliest recorded time after which the purity stays within `tolerance`
/// of its final value.
double purity_settling_time(const TimeSeries& series, double tolerance = 1e-3);

// Figure presets fix atom numbers, geometries and initial states; bath,
// integration settings, grids and workers come from the config.

struct Fig3Panel {
  std::string name;  // "dimer" or "melted"
  ArrayGeometry geometry;
  SteadyStateResult steady;
  CorrelationMatrix correlations;
  PureState analytic;  // dimer_chain or melted_dark(l = n_at/2)
  double fidelity = 0.0;
};

struct Fig4Trace {
  std::string kind;  // "dimer" or "melted"
  int n_at = 0;
  SteadyStateResult steady;
  double t_settle = 0.0;
};

struct Fig5Panel {
  std::string name;  // "thermal", "squeezed", "dimer"
  PopulationLaw law;
  ArrayGeometry geometry;
  SteadyStateResult steady;
  std::vector<double> final_populations;
  std::vector<double> predicted;
};

std::vector<SweepCell> run_fig2(const ExperimentConfig& cfg);
std::vector<Fig3Panel> run_fig3(const ExperimentConfig& cfg);
std::vector<Fig4Trace> run_fig4(const ExperimentConfig& cfg, const std::vector<int>& sizes = {2, 4, 6});
std::vector<Fig5Panel> run_fig5(const ExperimentConfig& cfg);

}  // namespace darkdimer
