#include "fgsi/scheme.hpp"

#include <cmath>
#include <sstream>

#include "fgsi/errors.hpp"

namespace fgsi {

int SchemeSpec::drift_count() const {
  int n = 0;
  for (const auto& s : stages) n += std::holds_alternative<Drift>(s);
  return n;
}

int SchemeSpec::kick_count() const {
  return static_cast<int>(stages.size()) - drift_count();
}

int SchemeSpec::gradient_kick_count() const {
  int n = 0;
  for (const auto& s : stages)
    if (const auto* k = std::get_if<GradKick>(&s); k && k->g != 0.0) ++n;
  return n;
}

void validate_scheme(const SchemeSpec& scheme) {
  auto fail = [&](const std::string& why) {
    throw Error(ErrorKind::Parameter, "scheme '" + scheme.name + "': " + why);
  };
  if (scheme.stages.empty()) fail("no stages");
  double drift_sum = 0.0, kick_sum = 0.0;
  for (const auto& s : scheme.stages) {
    if (const auto* d = std::get_if<Drift>(&s)) {
      if (!std::isfinite(d->c)) fail("non-finite drift coefficient");
      drift_sum += d->c;
    } else {
      const auto& k = std::get<GradKick>(s);
      if (!std::isfinite(k.d) || !std::isfinite(k.g)) fail("non-finite kick coefficient");
      kick_sum += k.d;
    }
  }
  if (std::abs(drift_sum - 1.0) > 1e-14) fail("drift coefficients do not sum to 1");
  if (std::abs(kick_sum - 1.0) > 1e-14) fail("kick coefficients do not sum to 1");

  const std::size_t n = scheme.stages.size();
  for (std::size_t i = 0; i < n / 2; ++i) {
    const Stage& a = scheme.stages[i];
    const Stage& b = scheme.stages[n - 1 - i];
    if (a.index() != b.index()) fail("stage kinds are not palindromic");
    if (const auto* da = std::get_if<Drift>(&a)) {
      if (da->c != std::get<Drift>(b).c) fail("drift coefficients are not palindromic");
    } else {
      const auto& ka = std::get<GradKick>(a);
      const auto& kb = std::get<GradKick>(b);
      if (ka.d != kb.d || ka.g != kb.g) fail("kick coefficients are not palindromic");
    }
  }
  for (std::size_t i = 1; i < n; ++i)
    if (scheme.stages[i].index() == scheme.stages[i - 1].index())
      fail("adjacent stages of the same kind");

  bool has_gradient = false;
  for (const auto& s : scheme.stages)
    if (const auto* k = std::get_if<GradKick>(&s); k && k->g != 0.0) has_gradient = true;
  if (has_gradient != scheme.gradient) fail("gradient flag does not match the stages");
}

namespace {

std::vector<SchemeSpec> build_registry() {
  std::vector<SchemeSpec> r;

  r.push_back({"verlet2", "M2", 2, {GradKick{0.5}, Drift{1.0}, GradKick{0.5}}, false});

  {
    const double beta = 1.0 / (2.0 - std::cbrt(2.0));
    const double alpha = beta / 2.0;
    r.push_back({"fr4", "M4", 4,
                 {Drift{alpha}, GradKick{beta}, Drift{0.5 - alpha}, GradKick{1.0 - 2.0 * beta},
                  Drift{0.5 - alpha}, GradKick{beta}, Drift{alpha}},
                 false});
  }
  {
    const double xi = 0.1644986515575760;
    const double lambda = -0.2094333910398989e-01;
    const double chi = 0.1235692651138917e+01;
    r.push_back({"omf4v", "M4V", 4,
                 {GradKick{xi}, Drift{(1.0 - 2.0 * lambda) / 2.0}, GradKick{chi}, Drift{lambda},
                  GradKick{1.0 - 2.0 * (chi + xi)}, Drift{lambda}, GradKick{chi},
                  Drift{(1.0 - 2.0 * lambda) / 2.0}, GradKick{xi}},
                 false});
  }
  {
    const double xi = 0.1786178958448091;
    const double lambda = -0.2123418310626054;
    const double chi = -0.6626458266981849e-01;
    r.push_back({"omf4p", "M4P", 4,
                 {Drift{xi}, GradKick{(1.0 - 2.0 * lambda) / 2.0}, Drift{chi}, GradKick{lambda},
                  Drift{1.0 - 2.0 * (chi + xi)}, GradKick{lambda}, Drift{chi},
                  GradKick{(1.0 - 2.0 * lambda) / 2.0}, Drift{xi}},
                 false});
  }

  r.push_back({"grad2", "N2", 2,
               {GradKick{0.5, 1.0 / 48.0}, Drift{1.0}, GradKick{0.5, 1.0 / 48.0}}, true});

  {
    const double s3 = std::sqrt(3.0);
    const double outer = 0.5 * (1.0 - 1.0 / s3);
    const double g = (2.0 - s3) / 48.0;
    r.push_back({"chin4", "N4", 4,
                 {Drift{outer}, GradKick{0.5, g}, Drift{1.0 / s3}, GradKick{0.5, g}, Drift{outer}},
                 true});
  }

  r.push_back({"grad4s", "N4*", 4,
               {GradKick{1.0 / 6.0, 1.0 / 432.0}, Drift{0.5}, GradKick{2.0 / 3.0, 1.0 / 108.0},
                Drift{0.5}, GradKick{1.0 / 6.0, 1.0 / 432.0}},
               true});

  // In the three optimized gradient schemes the outer kicks carry the
  // D-coefficient xi and the inner kicks chi. For omf4go, 2 xi + chi = 1/72
  // is the fourth-order condition of its drift/kick layout.
  {
    const double lambda = 1.0 / 6.0;
    const double xi = -17.0 / 18000.0;
    const double chi = 71.0 / 4500.0;
    r.push_back({"omf4go", "N4O", 4,
                 {GradKick{lambda, xi}, Drift{0.5}, GradKick{1.0 - 2.0 * lambda, chi}, Drift{0.5},
                  GradKick{lambda, xi}},
                 true});
  }
  {
    const double theta = 0.2728983001988755;
    const double lambda = 0.8002565306418866e-01;
    const double chi = 0.2960781208329478e-02;
    const double xi = 0.2725753410753895e-03;
    const double mid = (1.0 - 2.0 * lambda) / 2.0;
    r.push_back({"omf4gv", "N4V", 4,
                 {GradKick{lambda, xi}, Drift{theta}, GradKick{mid, chi}, Drift{1.0 - 2.0 * theta},
                  GradKick{mid, chi}, Drift{theta}, GradKick{lambda, xi}},
                 true});
  }
  {
    const double theta = 0.1159953608486416;
    const double lambda = 0.2825633404177051;
    const double chi = 0.3035236056708454e-02;
    const double xi = 0.1226088989536361e-02;
    const double mid = 1.0 - 2.0 * lambda;
    r.push_back({"omf4gp", "N4P", 4,
                 {Drift{theta}, GradKick{lambda, xi}, Drift{(1.0 - 2.0 * theta) / 2.0},
                  GradKick{mid, chi}, Drift{(1.0 - 2.0 * theta) / 2.0}, GradKick{lambda, xi},
                  Drift{theta}},
                 true});
  }

  for (const auto& s : r) validate_scheme(s);
  return r;
}

}  // namespace

const std::vector<SchemeSpec>& scheme_registry() {
  static const std::vector<SchemeSpec> registry = build_registry();
  return registry;
}

const SchemeSpec& find_scheme(std::string_view name) {
  for (const auto& s : scheme_registry())
    if (s.name == name) return s;
  std::ostringstream os;
  os << "unknown scheme '" << name << "' (valid:";
  for (const auto& s : scheme_registry()) os << ' ' << s.name;
  os << ')';
  throw Error(ErrorKind::Config, os.str());
}

}  // namespace fgsi
