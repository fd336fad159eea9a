#include "cli_app.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <regex>
#include <sstream>

#include "darkdimer/export.hpp"

namespace darkdimer::cli {
namespace {

const std::vector<std::string> kExperiments = {"fig2", "fig3", "fig4", "fig5"};

// Text-valued options are parsed after CLI11 so range and syntax errors can
// name the config field.
struct RawOptions {
  std::string k0a;
  std::string k0zc;
  std::string phi;
  std::string grid_zc;
  std::string grid_a;
};

std::string axis_text(const GridAxis& g) {
  return format_number(g.start) + ":" + format_number(g.stop) + ":" + std::to_string(g.count);
}

std::string pad(const std::string& key) {
  std::ostringstream s;
  s << std::left << std::setw(18) << key;
  return s.str();
}

void report(std::ostream& out, const std::string& key, double value) {
  out << pad(key) << format_number(value) << '\n';
}

void report(std::ostream& out, const std::string& key, const std::string& value) {
  out << pad(key) << value << '\n';
}

void report_steady(std::ostream& out, const SteadyStateResult& ss, int n_at) {
  const PolarizationMoments pm = CollectiveSpin(n_at).moments(ss.state.matrix());
  report(out, "converged", ss.converged ? "yes" : "no");
  report(out, "t_converge", ss.t_converge);
  report(out, "residual", ss.residual);
  report(out, "purity", purity(ss.state));
  report(out, "mean_z", pm.mean_z);
  report(out, "var_x", pm.var_x);
  report(out, "var_y", pm.var_y);
  report(out, "min_eigenvalue", ss.hygiene.min_eigenvalue);
}

void written(std::ostream& out, const std::string& path) { out << "wrote " << path << '\n'; }

int cmd_sweep(const Invocation& inv, std::ostream& out) {
  const ExperimentConfig& cfg = inv.config;
  const auto cells = run_sweep(cfg, cfg.grid_zc.values(), cfg.grid_a.values());
  const auto n_conv = std::count_if(cells.begin(), cells.end(), [](const SweepCell& c) { return c.converged; });
  out << "cells " << cells.size() << ", converged " << n_conv << '\n';
  written(out, write_table(sweep_table(cells), cfg.out, "sweep", cfg, "sweep"));
  return kExitOk;
}

int cmd_evolve(const Invocation& inv, std::ostream& out) {
  const ExperimentConfig& cfg = inv.config;
  const ModelOperators model = build_model(cfg.geometry(), cfg.bath(), cfg.gamma);
  const EvolveResult res = evolve(initial_state(cfg), model, cfg.evolve_config());
  report(out, "t_final", res.t_final);
  report(out, "purity", purity(res.final_state));
  report(out, "max_trace_drift", res.hygiene.max_trace_drift);
  report(out, "min_eigenvalue", res.hygiene.min_eigenvalue);
  written(out, write_table(series_table(res.series, cfg.n_at), cfg.out, "evolve", cfg, "evolve"));
  return kExitOk;
}

SteadyStateResult steady_for(const ExperimentConfig& cfg) {
  const ModelOperators model = build_model(cfg.geometry(), cfg.bath(), cfg.gamma);
  return steady_state(initial_state(cfg), model, cfg.evolve_config());
}

int cmd_steady(const Invocation& inv, std::ostream& out) {
  const ExperimentConfig& cfg = inv.config;
  const SteadyStateResult ss = steady_for(cfg);
  report_steady(out, ss, cfg.n_at);
  written(out, write_table(series_table(ss.series, cfg.n_at), cfg.out, "steady", cfg, "steady"));
  return ss.converged ? kExitOk : kExitRuntime;
}

int cmd_correlations(const Invocation& inv, std::ostream& out) {
  const ExperimentConfig& cfg = inv.config;
  const SteadyStateResult ss = steady_for(cfg);
  report_steady(out, ss, cfg.n_at);
  const CorrelationMatrix c = pair_correlations(ss.state, cfg.geometry());
  for (int n = 0; n < c.n_at; ++n) {
    for (int m = 0; m < c.n_at; ++m) out << (m ? " " : "") << std::setw(10) << format_number(c.at(n, m));
    out << '\n';
  }
  written(out, write_table(correlation_table(c), cfg.out, "correlations", cfg, "correlations"));
  return ss.converged ? kExitOk : kExitRuntime;
}

PairSpec parse_pair(const Invocation& inv) {
  static const std::regex re(R"(^\s*(\d+)\s*,\s*(\d+)\s*$)");
  std::smatch m;
  if (!std::regex_match(inv.pair, m, re)) throw ConfigError("pair", "expected 'n,m', got '" + inv.pair + "'");
  PairSpec spec{std::stoi(m[1]), std::stoi(m[2]), PairKind::kSqueezed};
  if (inv.pair_kind == "sym") {
    spec.kind = PairKind::kSym;
  } else if (inv.pair_kind != "squeezed") {
    throw ConfigError("kind", "must be squeezed or sym");
  }
  if (spec.n < 1 || spec.m > inv.config.n_at || spec.n >= spec.m) {
    throw ConfigError("pair", "needs 1 <= n < m <= n_at");
  }
  return spec;
}

int cmd_darkstate(const Invocation& inv, std::ostream& out) {
  const ExperimentConfig& cfg = inv.config;
  const ArrayGeometry geo = cfg.geometry();
  const BathParams bath = cfg.bath();
  const int l = inv.l >= 0 ? inv.l : cfg.n_at / 2;
  const PureState psi = [&] {
    if (inv.state == "dimer") return dimer_chain(geo, bath);
    if (inv.state == "pair") return pair_state(geo, bath, parse_pair(inv));
    if (inv.state == "melted") return melted_dark(geo, bath, l);
    return agarwal_puri_state(geo, bath, l);
  }();
  const auto [jx, jy] = squeezed_jumps(geo, bath);
  const ModelOperators model = build_model(geo, bath, cfg.gamma);
  report(out, "state", inv.state);
  report(out, "jx_residual", (jx * psi.amplitudes()).norm());
  report(out, "jy_residual", (jy * psi.amplitudes()).norm());
  report(out, "h_residual", stability_residual(psi, model));
  report(out, "dark_condition", dark_condition(geo, bath));
  CsvTable amps({"index", "re", "im"});
  for (Eigen::Index i = 0; i < psi.amplitudes().size(); ++i) {
    amps.add_row(std::vector<double>{static_cast<double>(i), psi.amplitudes()(i).real(),
                                     psi.amplitudes()(i).imag()});
  }
  written(out, write_table(amps, cfg.out, "darkstate_" + inv.state, cfg, "darkstate"));
  return kExitOk;
}

std::vector<double> prediction_or_nan(PopulationLaw law, int n_at, const BathParams& bath) {
  try {
    return predicted_populations(law, n_at, bath);
  } catch (const ArgumentError&) {
    return std::vector<double>(static_cast<std::size_t>(n_at) + 1, NAN);
  }
}

int cmd_populations(const Invocation& inv, std::ostream& out) {
  const ExperimentConfig& cfg = inv.config;
  const SteadyStateResult ss = steady_for(cfg);
  report_steady(out, ss, cfg.n_at);
  const BathParams bath = cfg.bath();
  const auto sim = excitation_populations(ss.state);
  const auto thermal = prediction_or_nan(PopulationLaw::kThermal, cfg.n_at, bath);
  const auto squeezed = prediction_or_nan(PopulationLaw::kSqueezed, cfg.n_at, bath);
  const auto dimer = prediction_or_nan(PopulationLaw::kDimer, cfg.n_at, bath);
  CsvTable t({"n_e", "simulated", "thermal", "squeezed", "dimer"});
  for (int n = 0; n <= cfg.n_at; ++n) {
    const auto k = static_cast<std::size_t>(n);
    t.add_row(std::vector<double>{static_cast<double>(n), sim[k], thermal[k], squeezed[k], dimer[k]});
  }
  out << t.str();
  written(out, write_table(t, cfg.out, "populations", cfg, "populations"));
  return ss.converged ? kExitOk : kExitRuntime;
}

int cmd_experiment(const Invocation& inv, std::ostream& out) {
  const ExperimentConfig& cfg = inv.config;
  const std::string cmd = "experiment " + inv.experiment;
  bool all_converged = true;
  if (inv.experiment == "fig2") {
    const auto cells = run_fig2(cfg);
    ExperimentConfig resolved = cfg;
    resolved.n_at = 4;
    written(out, write_table(sweep_table(cells), cfg.out, "fig2_sweep", resolved, cmd));
    return kExitOk;
  }
  if (inv.experiment == "fig3") {
    for (const Fig3Panel& p : run_fig3(cfg)) {
      all_converged = all_converged && p.steady.converged;
      out << p.name << ": fidelity " << format_number(p.fidelity) << ", purity "
          << format_number(purity(p.steady.state)) << '\n';
      written(out, write_table(correlation_table(p.correlations), cfg.out,
                               "fig3_" + p.name + "_correlations", cfg, cmd));
    }
  } else if (inv.experiment == "fig4") {
    CsvTable summary({"kind", "n_at", "t_settle", "t_converge", "final_purity"});
    for (const Fig4Trace& tr : run_fig4(cfg)) {
      all_converged = all_converged && tr.steady.converged;
      const std::string stem = "fig4_" + tr.kind + "_n" + std::to_string(tr.n_at);
      written(out, write_table(series_table(tr.steady.series, tr.n_at), cfg.out, stem, cfg, cmd));
      summary.add_row(std::vector<std::string>{tr.kind, std::to_string(tr.n_at),
                                               format_number(tr.t_settle),
                                               format_number(tr.steady.t_converge),
                                               format_number(purity(tr.steady.state))});
    }
    out << summary.str();
    written(out, write_table(summary, cfg.out, "fig4_summary", cfg, cmd));
  } else {
    for (const Fig5Panel& p : run_fig5(cfg)) {
      all_converged = all_converged && p.steady.converged;
      const std::string stem = "fig5_" + p.name;
      written(out, write_table(series_table(p.steady.series, p.geometry.n_at), cfg.out,
                               stem + "_series", cfg, cmd));
      CsvTable pops({"n_e", "simulated", "predicted"});
      for (std::size_t n = 0; n < p.final_populations.size(); ++n) {
        pops.add_row(std::vector<double>{static_cast<double>(n), p.final_populations[n], p.predicted[n]});
      }
      written(out, write_table(pops, cfg.out, stem + "_populations", cfg, cmd));
    }
  }
  return all_converged ? kExitOk : kExitRuntime;
}

}  // namespace

double parse_angle(const std::string& text, const std::string& field) {
  // sign, optional coefficient, optional "pi" with optional '*', optional "/divisor"
  static const std::regex re(
      R"(^\s*([+-]?)\s*((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*(\*?\s*pi)?\s*(?:/\s*((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?))?\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, re) || (!m[2].matched && !m[3].matched) ||
      (m[3].matched && m[3].str().find('*') != std::string::npos && !m[2].matched)) {
    throw ConfigError(field, "cannot parse '" + text + "' as a number or multiple of pi");
  }
  double value = m[2].matched ? std::stod(m[2]) : 1.0;
  if (m[3].matched) value *= M_PI;
  if (m[4].matched) {
    const double div = std::stod(m[4]);
    if (div == 0.0) throw ConfigError(field, "division by zero in '" + text + "'");
    value /= div;
  }
  return m[1] == "-" ? -value : value;
}

GridAxis parse_grid(const std::string& text, const std::string& field) {
  const auto first = text.find(':');
  const auto second = first == std::string::npos ? first : text.find(':', first + 1);
  if (second == std::string::npos || text.find(':', second + 1) != std::string::npos) {
    throw ConfigError(field, "expected start:stop:count, got '" + text + "'");
  }
  GridAxis g;
  g.start = parse_angle(text.substr(0, first), field);
  g.stop = parse_angle(text.substr(first + 1, second - first - 1), field);
  const std::string count = text.substr(second + 1);
  std::size_t used = 0;
  try {
    g.count = std::stoi(count, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || count.find_first_not_of(" \t", used) != std::string::npos) {
    throw ConfigError(field, "grid count '" + count + "' is not an integer");
  }
  if (g.count < 1) throw ConfigError(field, "grid count must be >= 1");
  return g;
}

Invocation parse_command_line(const std::vector<std::string>& args, std::ostream& out) {
  Invocation inv;
  ExperimentConfig& cfg = inv.config;
  RawOptions raw{format_number(cfg.k0a), format_number(cfg.k0zc), format_number(cfg.phi),
                 axis_text(cfg.grid_zc), axis_text(cfg.grid_a)};

  CLI::App app{"Steady states of emitter arrays in a squeezed-vacuum waveguide", "darkdimer"};
  app.set_version_flag("--version", std::string(DARKDIMER_VERSION));
  app.set_config("--config", "", "key = value file mirroring the long flags; flags win");
  app.require_subcommand(1);
  app.add_option("--n-at", cfg.n_at, "number of atoms")->capture_default_str();
  app.add_option("--n-ph", cfg.n_ph, "photons per bath mode N")->capture_default_str();
  app.add_option("--phi", raw.phi, "squeezing phase of M")->capture_default_str();
  app.add_option("--k0a", raw.k0a, "lattice phase k0*a (accepts pi/4 style)")->capture_default_str();
  app.add_option("--k0zc", raw.k0zc, "array centre k0*zc")->capture_default_str();
  app.add_option("--gamma", cfg.gamma, "single-atom decay rate")->capture_default_str();
  app.add_option("--dt", cfg.dt, "RK4 time step")->capture_default_str();
  app.add_option("--t-max", cfg.t_max, "integration horizon")->capture_default_str();
  app.add_option("--tol", cfg.tol, "steady-state tolerance on ||drho/dt||")->capture_default_str();
  app.add_option("--record-stride", cfg.record_stride, "steps between recorded samples")->capture_default_str();
  app.add_option("--initial", cfg.initial, "ground, plus-pi-4 or a pure-state file")->capture_default_str();
  app.add_option("--grid-zc", raw.grid_zc, "k0zc axis start:stop:count")->capture_default_str();
  app.add_option("--grid-a", raw.grid_a, "k0a axis start:stop:count")->capture_default_str();
  app.add_option("--workers", cfg.workers, "worker threads")->capture_default_str();
  app.add_option("--out", cfg.out, "output directory")->capture_default_str();

  std::vector<CLI::App*> subs;
  subs.push_back(app.add_subcommand("sweep", "steady-state map over the (k0zc, k0a) grid"));
  subs.push_back(app.add_subcommand("evolve", "time series up to t_max"));
  subs.push_back(app.add_subcommand("steady", "integrate until the steady state is reached"));
  subs.push_back(app.add_subcommand("correlations", "steady-state sigma_x pair correlations"));
  CLI::App* dark = app.add_subcommand("darkstate", "build an analytic dark state and print its residuals");
  dark->add_option("--state", inv.state, "dimer, pair, melted or agarwal-puri")
      ->check(CLI::IsMember({"dimer", "pair", "melted", "agarwal-puri"}))
      ->capture_default_str();
  dark->add_option("--l", inv.l, "number of squeezed pairs (default n_at/2)");
  dark->add_option("--pair", inv.pair, "atoms n,m of a single pair")->capture_default_str();
  dark->add_option("--kind", inv.pair_kind, "squeezed or sym")
      ->check(CLI::IsMember({"squeezed", "sym"}))
      ->capture_default_str();
  subs.push_back(dark);
  subs.push_back(app.add_subcommand("populations", "steady excitation populations and predicted laws"));
  CLI::App* exp = app.add_subcommand("experiment", "reproduce the data of one figure");
  exp->add_option("name", inv.experiment, "fig2, fig3, fig4 or fig5")
      ->required()
      ->check(CLI::IsMember(kExperiments));
  subs.push_back(exp);
  for (CLI::App* s : subs) s->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return inv;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return inv;
  } catch (const CLI::CallForVersion&) {
    out << DARKDIMER_VERSION << '\n';
    return inv;
  } catch (const CLI::ConversionError& e) {
    throw UsageError(e.what());
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  for (CLI::App* s : subs) {
    if (s->parsed()) inv.command = s->get_name();
  }
  cfg.phi = parse_angle(raw.phi, "phi");
  cfg.k0a = parse_angle(raw.k0a, "k0a");
  cfg.k0zc = parse_angle(raw.k0zc, "k0zc");
  cfg.grid_zc = parse_grid(raw.grid_zc, "grid_zc");
  cfg.grid_a = parse_grid(raw.grid_a, "grid_a");
  cfg.validate();
  return inv;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Invocation inv;
  try {
    inv = parse_command_line(args, out);
  } catch (const ConfigError& e) {
    err << "darkdimer: config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "darkdimer: usage error: " << e.what() << '\n';
    return kExitUsage;
  }
  if (inv.command.empty()) return kExitOk;

  try {
    if (inv.command == "sweep") return cmd_sweep(inv, out);
    if (inv.command == "evolve") return cmd_evolve(inv, out);
    if (inv.command == "steady") return cmd_steady(inv, out);
    if (inv.command == "correlations") return cmd_correlations(inv, out);
    if (inv.command == "darkstate") return cmd_darkstate(inv, out);
    if (inv.command == "populations") return cmd_populations(inv, out);
    return cmd_experiment(inv, out);
  } catch (const ConfigError& e) {
    err << "darkdimer: config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "darkdimer: " << inv.command << " failed: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace darkdimer::cli
