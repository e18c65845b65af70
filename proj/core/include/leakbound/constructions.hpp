#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "leakbound/coupling.hpp"
#include "leakbound/pmf.hpp"
#include "leakbound/rational.hpp"

namespace leakbound {

/// Classical maximal coupling of two PMFs: min{p, q} on the diagonal, the
/// two residuals coupled independently off it. Union mass is 1 + TV(p, q).
Coupling maximal_coupling_pair(const Pmf& p, const Pmf& q);

/// Minimal coupling for any family with tau_max2 <= 1.
///
/// For each symbol y the coordinates are layered by their mass at y: the
/// slab between consecutive distinct levels is a block tying together every
/// coordinate at or above it. Blocks tying two or more coordinates have
/// total weight tau_max2, so at most one is drawn per outcome; coordinates
/// outside the drawn block (or all of them, with the leftover weight
/// 1 - tau_max2) draw from their normalized excess over the other rows.
/// Every intersection P(Y_i = y, i in I) equals min_{i in I} P_i(y), so the
/// union mass is tau_max. Throws PreconditionError if tau_max2 > 1.
Coupling layered_coupling(std::span<const Pmf> family);

// ---------------------------------------------------------------------------
// Four-PMF construction with the relaxed existence condition.

/// Unordered pairs of {0,1,2,3} in the order 01, 02, 03, 12, 13, 23.
inline constexpr std::array<std::array<std::size_t, 2>, 6> kPairs{
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

/// Index in kPairs of the pair complementary to pair `p` (01 <-> 23, ...).
constexpr std::size_t complement_pair(std::size_t p) { return 5 - p; }

/// Every quantity the four-PMF mixture is built from. Subsets of {0,1,2,3}
/// are bit masks.
struct N4Ingredients {
  Rational tau;
  Rational tau_max;
  Rational tau_max2;
  /// tau_I for every non-empty mask (index = mask, entry 0 unused).
  std::array<Rational, 16> tau_subset;
  /// Unnormalized residual of P_i: (P_i(y) - max_{j != i} P_j(y))^+.
  std::array<std::vector<Rational>, 4> residual;
  /// Normalizer N_{R_i} of each residual (its total mass).
  std::array<Rational, 4> residual_norm;
  /// T_ij(y) = (min{P_i, P_j} - max{P_k, P_l})^+, indexed like kPairs.
  std::array<std::vector<Rational>, 6> pair_excess;
  /// N_ij = sum_y T_ij(y).
  std::array<Rational, 6> pair_norm;
  /// min_{i in I} P_i(y) per symbol, for every mask; entry 15 is P_min.
  std::array<std::vector<Rational>, 16> subset_min;
};

struct N4Condition {
  bool holds = false;
  /// min{N12,N34} + min{N13,N24} + min{N14,N23}.
  Rational capacity;
  /// tau_max2 - 1.
  Rational demand;
  N4Ingredients ingredients;
};

/// Evaluates the relaxed condition
///   min{N12,N34} + min{N13,N24} + min{N14,N23} >= tau_max2 - 1
/// exactly and returns all ingredients.
N4Condition n4_condition(std::span<const Pmf> family);

struct MixtureWeights {
  /// alpha for the double-tie patterns 12|34, 13|24, 14|23.
  std::array<Rational, 3> alpha;
  /// beta_ij indexed like kPairs: weight of the component tying pair ij with
  /// the other two coordinates free.
  std::array<Rational, 6> beta;
  Rational a, b, c;
  /// Weight of the all-free component R_1 x R_2 x R_3 x R_4; nonzero only
  /// when tau_max2 < 1.
  Rational gamma;
};

/// Splits the demand tau_max2 - 1 over the three double-tie patterns by
/// greedy water-filling in the order (12|34), (13|24), (14|23), then derives
/// beta from the pairwise constraints. When tau_max2 <= 1 the alphas are
/// zero and (a, b, c) = (1, 0, 0). Throws PreconditionError when the
/// condition fails.
MixtureWeights choose_abc(const N4Ingredients& ingredients);

/// Builds the four-PMF minimal coupling. Components with zero weight are
/// omitted. Throws PreconditionError if n4_condition fails and
/// ConstructionError (naming the offending tuple) on any internal
/// inconsistency.
Coupling build_n4_coupling(std::span<const Pmf> family);

struct IntersectionCounterexample {
  std::vector<std::size_t> subset;
  std::uint32_t symbol = 0;
  Rational coupling_mass;
  Rational expected;
};

struct IntersectionCheck {
  bool holds = true;
  std::optional<IntersectionCounterexample> counterexample;
};

/// Checks P(Y_i = y for all i in I) = min_{i in I} P_i(y) for every subset I
/// with |I| >= 2 and every symbol y.
IntersectionCheck verify_intersection_property(const Coupling& coupling,
                                               std::span<const Pmf> family);

}  // namespace leakbound
