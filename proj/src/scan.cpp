#include "fgsi/scan.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "fgsi/parallel.hpp"

namespace fgsi {

const char* to_string(Indicator indicator) {
  return indicator == Indicator::Fli ? "fli" : "zero_one";
}

const char* to_string(Classification c) {
  switch (c) {
    case Classification::Ordered: return "ordered";
    case Classification::Chaotic: return "chaotic";
    case Classification::Infeasible: return "infeasible";
    case Classification::Failed: return "failed";
  }
  return "failed";
}

double ScanSpec::effective_threshold() const {
  if (threshold) return *threshold;
  return indicator == Indicator::Fli ? 4.0 : 0.5;
}

void validate_scan(const ScanSpec& spec) {
  auto fail = [](const std::string& why) { throw Error(ErrorKind::Config, why); };
  const SystemPtr system = make_system(spec.system);
  if (spec.scheme != "rk4") find_scheme(spec.scheme);
  if (spec.count < 2) fail("count: a scan needs at least 2 grid points");
  if (!std::isfinite(spec.start) || !std::isfinite(spec.stop)) fail("grid endpoints must be finite");
  if (!(spec.tau > 0.0)) fail("tau must be positive");
  if (!(spec.t_end > 0.0)) fail("t_end must be positive");
  if (!std::isfinite(spec.energy)) fail("energy must be finite");
  const auto [closure_is_p, closure_idx] = variable_index(*system, spec.closure);
  if (!closure_is_p) fail("closure: '" + spec.closure + "' is not a momentum");
  (void)closure_idx;
  variable_index(*system, spec.swept);
  if (spec.swept == spec.closure) fail("swept: the swept variable is the closure momentum");
  for (const auto& [name, value] : spec.fixed) {
    variable_index(*system, name);
    if (name == spec.closure) fail("fixed: '" + name + "' is the closure momentum");
    if (name == spec.swept) fail("fixed: '" + name + "' is the swept variable");
    if (!std::isfinite(value)) fail("fixed: '" + name + "' is not finite");
  }
}

std::vector<double> scan_grid(double start, double stop, int count) {
  if (count < 2) throw Error(ErrorKind::Config, "count: a scan needs at least 2 grid points");
  std::vector<double> grid(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i)
    grid[i] = start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
  grid.back() = stop;
  return grid;
}

State scan_initial_state(const SystemModel& system, const ScanSpec& spec, double swept_value) {
  State s(Vec::Zero(system.dim()), Vec::Zero(system.dim()), 0.0);
  auto assign = [&](const std::string& name, double value) {
    const auto [is_p, idx] = variable_index(system, name);
    (is_p ? s.p : s.q)[idx] = value;
  };
  for (const auto& [name, value] : spec.fixed) assign(name, value);
  assign(spec.swept, swept_value);
  return solve_missing_momentum(system, s, variable_index(system, spec.closure).second,
                                spec.energy);
}

Classification classify(double indicator_value, double threshold) {
  if (!std::isfinite(indicator_value)) return Classification::Failed;
  return indicator_value >= threshold ? Classification::Chaotic : Classification::Ordered;
}

ScanResult run_scan(const ScanSpec& spec) {
  validate_scan(spec);
  const SystemPtr system = make_system(spec.system);
  const Method method = Method::by_name(spec.scheme);
  const std::vector<double> grid = scan_grid(spec.start, spec.stop, spec.count);

  ScanResult result;
  result.swept = spec.swept;
  result.indicator = spec.indicator;
  result.threshold = spec.effective_threshold();
  result.points.resize(grid.size());

  parallel_for(grid.size(), spec.workers, [&](std::size_t i) {
    const auto t0 = std::chrono::steady_clock::now();
    ScanPoint& pt = result.points[i];
    pt.value = grid[i];
    pt.indicator = std::numeric_limits<double>::quiet_NaN();
    try {
      const State s0 = scan_initial_state(*system, spec, grid[i]);
      if (spec.indicator == Indicator::Fli) {
        pt.indicator = fli(method, *system, s0, spec.tau, spec.t_end, spec.fli).final_value();
      } else {
        pt.indicator = zero_one_test(method, *system, s0, spec.tau, spec.t_end, spec.zero_one).lambda;
      }
      pt.classification = classify(pt.indicator, result.threshold);
    } catch (const Error& e) {
      pt.classification = e.kind() == ErrorKind::InfeasibleEnergy ? Classification::Infeasible
                                                                  : Classification::Failed;
      pt.message = e.what();
    }
    pt.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  });
  return result;
}

Agreement compare_indicators(const ScanResult& a, const ScanResult& b) {
  if (a.points.size() != b.points.size())
    throw Error(ErrorKind::Input, "scan grids have different sizes");
  Agreement out;
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    const ScanPoint& pa = a.points[i];
    const ScanPoint& pb = b.points[i];
    if (std::abs(pa.value - pb.value) > 1e-12 * std::max(1.0, std::abs(pa.value)))
      throw Error(ErrorKind::Input, "scan grids differ");
    const auto valid = [](Classification c) {
      return c == Classification::Ordered || c == Classification::Chaotic;
    };
    if (!valid(pa.classification) || !valid(pb.classification)) continue;
    ++out.valid;
    if (pa.classification == pb.classification) ++out.agreeing;
  }
  if (out.valid > 0) out.fraction = static_cast<double>(out.agreeing) / out.valid;
  return out;
}

}  // namespace fgsi
