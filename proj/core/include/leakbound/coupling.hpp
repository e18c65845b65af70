#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "leakbound/pmf.hpp"
#include "leakbound/rational.hpp"

namespace leakbound {

/// Index tuple (y_1, ..., y_m) into a shared alphabet.
using Tuple = std::vector<std::uint32_t>;

/// Sparse joint mass keyed by tuple; lexicographic iteration order.
using TupleMass = std::map<Tuple, Rational>;

/// Number of distinct values among the coordinates of `tuple`.
std::size_t distinct_count(std::span<const std::uint32_t> tuple);

/// A joint PMF over Y^m whose coordinate marginals equal the declared PMFs
/// exactly. Only nonzero tuples are stored.
class Coupling {
 public:
  /// Validates masses (nonnegative, total 1) and every coordinate marginal.
  /// Throws ConstructionError naming the first violation; this is how
  /// constructions report internal bugs.
  Coupling(std::vector<Pmf> marginals, TupleMass mass);

  const std::vector<Pmf>& marginals() const noexcept { return marginals_; }
  const Alphabet& alphabet() const { return marginals_.front().alphabet(); }
  std::size_t arity() const noexcept { return marginals_.size(); }
  const TupleMass& mass() const noexcept { return mass_; }

  /// Mass of one tuple (zero when absent).
  Rational at(const Tuple& tuple) const;

  /// P(Y_i = y for every i in subset).
  Rational intersection_mass(std::span<const std::size_t> subset, std::uint32_t symbol) const;

  /// Mass of (y, ..., y).
  Rational diagonal_mass(std::uint32_t symbol) const;

 private:
  std::vector<Pmf> marginals_;
  TupleMass mass_;
};

/// Checks a candidate coupling without throwing. Returns a description of
/// the first violated invariant, or nullopt.
std::optional<std::string> coupling_violation(std::span<const Pmf> marginals,
                                              const TupleMass& mass);

/// sum_y P(union_i {Y_i = y}) = sum over tuples of mass * distinct_count.
Rational union_mass(const Coupling& coupling);

/// The independent product coupling of a family.
Coupling independent_coupling(std::vector<Pmf> marginals);

}  // namespace leakbound
