#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "splab/core/cn.hpp"
#include "splab/domain/domain.hpp"

namespace splab::oscillation {

enum class SymbolClass {
  bounded_smooth,
  compact_support,
  log_delta,
  delta_power,
  oscillating,
  conj_holomorphic,
};

/// Expected membership per analytic reasoning; recorded with the symbol so
/// classification audits can cross-check.
struct ExpectedClass {
  bool bmo = false;
  bool vmo = false;
  bool asserted = true;  // conj_holomorphic is recorded, not asserted
};

/// A symbol b : D -> C with analytic metadata. delta_power evaluators are
/// capped at a configurable floor so values stay finite while the divergence
/// remains visible in profile slopes.
struct Symbol {
  std::string id;
  SymbolClass cls;
  ExpectedClass expected;
  std::function<cxd(const Cn&)> eval;
};

/// The registered family over a domain. delta_cap bounds the delta_power
/// evaluator from below (the cloud's delta_min in production runs).
std::vector<Symbol> symbol_family(std::shared_ptr<const Domain> dom,
                                  double delta_cap,
                                  double delta_power_exponent = -0.3);

/// Single symbol by id ("bounded_smooth", "compact_support", "logdelta",
/// "deltapow", "oscillating", "conjz1").
Symbol make_symbol(std::shared_ptr<const Domain> dom, const std::string& id,
                   double delta_cap, double delta_power_exponent = -0.3);

}  // namespace splab::oscillation
