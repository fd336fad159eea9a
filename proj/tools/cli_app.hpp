#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "darkdimer/experiments.hpp"

namespace darkdimer::cli {

/// Exit codes of the command line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Angle literal: a plain number or a multiple of pi such as "pi/4",
/// "3*pi/4", "-pi", "2pi". Throws ConfigError naming `field`.
double parse_angle(const std::string& text, const std::string& field);

/// "start:stop:count" with angle literals for start and stop.
GridAxis parse_grid(const std::string& text, const std::string& field);

struct Invocation {
  std::string command;  // sweep, evolve, steady, ...
  ExperimentConfig config;
  std::string experiment;          // fig2..fig5 for `experiment`
  std::string state = "dimer";     // darkstate selector
  int l = -1;                      // darkstate sector, -1 means n_at/2
  std::string pair = "1,2";        // darkstate pair atoms
  std::string pair_kind = "squeezed";
};

/// Parses argv (without the program name). Flags override values read via
/// --config. Throws ConfigError on range errors and UsageError on malformed
/// input. Returns an Invocation with an empty command when help was shown.
Invocation parse_command_line(const std::vector<std::string>& args, std::ostream& out);

class UsageError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

/// Full tool: parse, run, write outputs, report. Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace darkdimer::cli
