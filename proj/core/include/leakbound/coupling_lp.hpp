#pragma once

#include <cstddef>
#include <span>

#include "leakbound/coupling.hpp"
#include "leakbound/error.hpp"
#include "leakbound/pmf.hpp"

namespace leakbound {

struct LpOptions {
  /// Refuse problems with more tuple variables than this (CapacityError).
  std::size_t max_variables = kDefaultMaxStates;
};

struct LpResult {
  Rational optimal_value;
  Coupling witness;
  /// optimal_value == tau_max of the marginal family.
  bool achieves_tau_max = false;
};

/// Exact minimum of sum_y P(union_i {Y_i = y}) over all couplings of the
/// family (m >= 2, shared alphabet).
///
/// The union objective is linear in the tuple masses: a tuple contributes
/// once to the event {union_i Y_i = y} for each distinct value y among its
/// coordinates, so its cost is its number of distinct coordinates.
/// Tuples touching a symbol outside some marginal's support are fixed at
/// zero and left out of the program.
LpResult min_union_coupling(std::span<const Pmf> marginals, const LpOptions& options = {});

/// Same program with the extra constraints mass(y, ..., y) >= min_i P_i(y).
/// Because a diagonal tuple can never carry more than min_i P_i(y), these
/// pin the diagonal to exactly P_min.
LpResult min_union_coupling_diag(std::span<const Pmf> marginals, const LpOptions& options = {});

}  // namespace leakbound
