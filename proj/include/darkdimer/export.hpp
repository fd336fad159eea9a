#pragma once

// Plain-text output: CSV tables with a fixed number format and a JSON
// manifest written next to each table.

#include <string>
#include <vector>

#include "darkdimer/dynamics.hpp"
#include "darkdimer/experiments.hpp"
#include "darkdimer/observables.hpp"

namespace darkdimer {

/// 12 significant digits, '.' decimal separator, locale independent.
std::string format_number(double value);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  /// Throws ArgumentError when the row width differs from the header.
  void add_row(const std::vector<std::string>& row);
  void add_row(const std::vector<double>& row);

  const std::vector<std::string>& header() const { return header_; }
  std::size_t rows() const { return rows_.size(); }

  /// Header line then one line per row, every line newline-terminated.
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

CsvTable sweep_table(const std::vector<SweepCell>& cells);
CsvTable series_table(const TimeSeries& series, int n_at);
/// 1-based atom indices.
CsvTable correlation_table(const CorrelationMatrix& c);

/// Resolved configuration plus library version; no timestamps, so equal
/// inputs give equal bytes.
std::string manifest_json(const ExperimentConfig& cfg, const std::string& command,
                          const std::string& table);

/// Writes `<stem>.csv` and `<stem>.json` into `dir`, creating it if needed.
/// Returns the CSV path. Throws ResourceError on I/O failure.
std::string write_table(const CsvTable& table, const std::string& dir, const std::string& stem,
                        const ExperimentConfig& cfg, const std::string& command);

}  // namespace darkdimer
