#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fgsi/diagnostics.hpp"

namespace fgsi {

enum class Indicator { Fli, ZeroOne };
enum class Classification { Ordered, Chaotic, Infeasible, Failed };

const char* to_string(Indicator indicator);
const char* to_string(Classification c);

/// One-dimensional sweep of a chaos indicator over initial conditions. The
/// closure momentum is solved from `energy` at every grid point; variables
/// neither swept, fixed nor closed start at zero.
struct ScanSpec {
  std::string system = "mhh";
  std::string scheme = "omf4gp";
  std::string swept = "y";
  double start = -2.3;
  double stop = -0.95;
  int count = 500;
  std::vector<std::pair<std::string, double>> fixed;
  double energy = 1.0 / 120.0;
  std::string closure = "px";

  Indicator indicator = Indicator::Fli;
  double tau = 0.1;
  double t_end = 3000.0;  // FLI integration time, or t_max of the 0-1 test
  /// FLI: 4. 0-1 test: 0.5.
  std::optional<double> threshold;
  FliOptions fli;
  ZeroOneOptions zero_one;
  int workers = 0;

  double effective_threshold() const;
};

struct ScanPoint {
  double value = 0.0;      // swept initial value
  double indicator = 0.0;  // final FLI or Lambda; NaN when not computed
  Classification classification = Classification::Failed;
  double seconds = 0.0;
  std::string message;  // reason for infeasible / failed points
};

struct ScanResult {
  std::string swept;
  Indicator indicator = Indicator::Fli;
  double threshold = 0.0;
  std::vector<ScanPoint> points;  // grid order
};

/// Throws Error(Config) naming the offending field.
void validate_scan(const ScanSpec& spec);

/// count points uniformly spaced on [start, stop], both ends included.
std::vector<double> scan_grid(double start, double stop, int count);

/// Initial state for one grid point. Throws Error(InfeasibleEnergy) when the
/// closure momentum has no positive root.
State scan_initial_state(const SystemModel& system, const ScanSpec& spec, double swept_value);

Classification classify(double indicator_value, double threshold);

/// Points are independent tasks run on up to spec.workers threads; results
/// land in grid order, and per-point failures are recorded, not thrown.
ScanResult run_scan(const ScanSpec& spec);

struct Agreement {
  int valid = 0;  // points ordered or chaotic in both scans
  int agreeing = 0;
  std::optional<double> fraction;  // empty when no point is valid in both
};

/// Throws Error(Input) when the grids differ.
Agreement compare_indicators(const ScanResult& a, const ScanResult& b);

}  // namespace fgsi
