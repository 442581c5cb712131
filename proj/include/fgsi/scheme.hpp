#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace fgsi {

/// Exact K-flow over c * tau.
struct Drift {
  double c = 0.0;
};

/// Momentum update exp(d tau B + g tau^3 D). A plain kick has g = 0.
struct GradKick {
  double d = 0.0;
  double g = 0.0;
};

using Stage = std::variant<Drift, GradKick>;

/// Splitting scheme as an ordered stage table. Stages act on the state
/// first to last.
struct SchemeSpec {
  std::string name;   // CLI name, e.g. "omf4gp"
  std::string label;  // family label, e.g. "N4P"
  int order = 2;
  std::vector<Stage> stages;
  bool gradient = false;

  int drift_count() const;
  int kick_count() const;
  /// Kicks carrying a nonzero D-coefficient; each costs one Hessian and
  /// one kinetic-tensor evaluation on top of the force.
  int gradient_kick_count() const;
};

/// Throws Error(Parameter) if a table breaks consistency (drift and kick
/// coefficients each summing to one), symmetry (palindromic stages), or
/// alternation of stage kinds.
void validate_scheme(const SchemeSpec& scheme);

/// The ten splitting schemes, validated on first use.
const std::vector<SchemeSpec>& scheme_registry();

/// Throws Error(Config) listing valid names when `name` is unknown.
const SchemeSpec& find_scheme(std::string_view name);

}  // namespace fgsi
