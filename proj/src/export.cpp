#include "darkdimer/export.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>

#include "json.hpp"

#include "darkdimer/errors.hpp"

namespace darkdimer {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(const std::vector<std::string>& row) {
  if (row.size() != header_.size()) {
    throw ArgumentError("csv row has " + std::to_string(row.size()) + " fields, header has " +
                        std::to_string(header_.size()));
  }
  rows_.push_back(row);
}

void CsvTable::add_row(const std::vector<double>& row) {
  std::vector<std::string> text;
  text.reserve(row.size());
  for (double v : row) text.push_back(format_number(v));
  add_row(text);
}

std::string CsvTable::str() const {
  std::string out;
  auto emit = [&out](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out += ',';
      out += fields[i];
    }
    out += '\n';
  };
  emit(header_);
  for (const auto& r : rows_) emit(r);
  return out;
}

CsvTable sweep_table(const std::vector<SweepCell>& cells) {
  CsvTable t({"k0zc", "k0a", "var_x", "var_y", "purity", "mean_z", "t_converge", "converged"});
  for (const auto& c : cells) {
    t.add_row(std::vector<std::string>{format_number(c.k0zc), format_number(c.k0a),
                                       format_number(c.var_x), format_number(c.var_y),
                                       format_number(c.purity), format_number(c.mean_z),
                                       format_number(c.t_converge), c.converged ? "1" : "0"});
  }
  return t;
}

CsvTable series_table(const TimeSeries& series, int n_at) {
  std::vector<std::string> header = {"t",      "purity", "mean_x", "mean_y",
                                     "mean_z", "var_x",  "var_y"};
  for (int n = 0; n <= n_at; ++n) header.push_back("P" + std::to_string(n));
  CsvTable t(std::move(header));
  for (const auto& r : series.records) {
    std::vector<double> row = {r.t,
                               r.purity,
                               r.moments.mean_x,
                               r.moments.mean_y,
                               r.moments.mean_z,
                               r.moments.var_x,
                               r.moments.var_y};
    row.insert(row.end(), r.populations.begin(), r.populations.end());
    t.add_row(row);
  }
  return t;
}

CsvTable correlation_table(const CorrelationMatrix& c) {
  CsvTable t({"n", "m", "C"});
  for (int n = 0; n < c.n_at; ++n) {
    for (int m = 0; m < c.n_at; ++m) {
      t.add_row(std::vector<std::string>{std::to_string(n + 1), std::to_string(m + 1),
                                         format_number(c.at(n, m))});
    }
  }
  return t;
}

std::string manifest_json(const ExperimentConfig& cfg, const std::string& command,
                          const std::string& table) {
  auto axis = [](const GridAxis& g) {
    return nlohmann::ordered_json{{"start", g.start}, {"stop", g.stop}, {"count", g.count}};
  };
  nlohmann::ordered_json j;
  j["library"] = "darkdimer";
  j["version"] = DARKDIMER_VERSION;
  j["command"] = command;
  j["table"] = table;
  j["config"] = {{"n_at", cfg.n_at},
                 {"n_ph", cfg.n_ph},
                 {"phi", cfg.phi},
                 {"k0a", cfg.k0a},
                 {"k0zc", cfg.k0zc},
                 {"gamma", cfg.gamma},
                 {"initial", cfg.initial},
                 {"dt", cfg.dt},
                 {"t_max", cfg.t_max},
                 {"tol", cfg.tol},
                 {"record_stride", cfg.record_stride},
                 {"grid_zc", axis(cfg.grid_zc)},
                 {"grid_a", axis(cfg.grid_a)},
                 {"workers", cfg.workers},
                 {"out", cfg.out}};
  return j.dump(2) + "\n";
}

std::string write_table(const CsvTable& table, const std::string& dir, const std::string& stem,
                        const ExperimentConfig& cfg, const std::string& command) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ResourceError("cannot create output directory '" + dir + "': " + ec.message());
  const fs::path csv = fs::path(dir) / (stem + ".csv");
  const fs::path json = fs::path(dir) / (stem + ".json");
  auto write = [](const fs::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    f << text;
    if (!f) throw ResourceError("cannot write '" + p.string() + "'");
  };
  write(csv, table.str());
  write(json, manifest_json(cfg, command, csv.filename().string()));
  return csv.string();
}

}  // namespace darkdimer
