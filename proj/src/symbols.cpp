#include "splab/oscillation/symbols.hpp"

#include <cmath>
#include <stdexcept>

namespace splab::oscillation {

namespace {

double smooth_bump(double t) {
  // C^inf bump on (0,1), 1 near 0
  if (t <= 0) return 1.0;
  if (t >= 1) return 0.0;
  const double a = std::exp(-1.0 / (1.0 - t));
  const double b = std::exp(-1.0 / t);
  return a / (a + b);
}

}  // namespace

Symbol make_symbol(std::shared_ptr<const Domain> dom, const std::string& id,
                   double delta_cap, double expo) {
  Symbol s;
  s.id = id;
  auto delta = [dom](const Cn& z) { return boundary_distance(*dom, z); };

  if (id == "bounded_smooth") {
    s.cls = SymbolClass::bounded_smooth;
    s.expected = {true, true, true};
    s.eval = [](const Cn& z) {
      return cxd{std::sin(2.0 * z[0].real()) + 0.5 * std::cos(z[0].imag() * 3.0),
                 0.0};
    };
  } else if (id == "compact_support") {
    s.cls = SymbolClass::compact_support;
    s.expected = {true, true, true};
    const double inr = dom->inradius();
    s.eval = [delta, inr](const Cn& z) {
      // smooth, vanishes where delta < 0.15 inradius
      const double t = delta(z) / inr;
      return cxd{smooth_bump((0.45 - t) / 0.3), 0.0};
    };
  } else if (id == "logdelta") {
    s.cls = SymbolClass::log_delta;
    s.expected = {true, false, true};
    s.eval = [delta, delta_cap](const Cn& z) {
      return cxd{std::log(std::max(delta(z), 1e-3 * delta_cap)), 0.0};
    };
  } else if (id == "deltapow") {
    s.cls = SymbolClass::delta_power;
    s.expected = {false, false, true};
    s.eval = [delta, delta_cap, expo](const Cn& z) {
      return cxd{std::pow(std::max(delta(z), delta_cap), expo), 0.0};
    };
  } else if (id == "oscillating") {
    s.cls = SymbolClass::oscillating;
    s.expected = {true, false, true};
    s.eval = [delta, delta_cap](const Cn& z) {
      return cxd{std::sin(std::log(std::max(delta(z), 1e-3 * delta_cap))), 0.0};
    };
  } else if (id == "conjz1") {
    s.cls = SymbolClass::conj_holomorphic;
    s.expected = {true, false, false};  // recorded, not asserted a priori
    s.eval = [](const Cn& z) { return std::conj(z[0]); };
  } else {
    throw std::invalid_argument("make_symbol: unknown id " + id);
  }
  return s;
}

std::vector<Symbol> symbol_family(std::shared_ptr<const Domain> dom,
                                  double delta_cap, double expo) {
  std::vector<Symbol> out;
  for (const char* id : {"bounded_smooth", "compact_support", "logdelta",
                         "deltapow", "conjz1"})
    out.push_back(make_symbol(dom, id, delta_cap, expo));
  return out;
}

}  // namespace splab::oscillation
