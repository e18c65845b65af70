#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "leakbound/pmf.hpp"
#include "leakbound/rational.hpp"

namespace leakbound {

/// Leakage exponent (max-Doeblin): sum over outputs of the column maximum.
/// exp of the maximal leakage for any full-support prior.
Rational tau_max(const DiscreteChannel& channel);

/// Sum over outputs of the second-largest column entry, ties counted with
/// multiplicity. Throws PreconditionError when the channel has one row.
Rational tau_max2(const DiscreteChannel& channel);

/// Doeblin coefficient: sum over outputs of the column minimum.
Rational doeblin(const DiscreteChannel& channel);

/// tau_I = sum_y min_{i in I} P_i(y). Throws ValidationError for an empty
/// subset or an out-of-range index.
Rational tau_subset(const DiscreteChannel& channel, std::span<const std::size_t> subset);

/// Sum of tau_I over all |I| = 2 subsets.
Rational tau_pair(const DiscreteChannel& channel);
/// Sum of tau_I over all |I| = 3 subsets.
Rational tau_trip(const DiscreteChannel& channel);

/// Maximal leakage L(X -> Y) = log tau_max, in nats.
double maximal_leakage(const DiscreteChannel& channel);

struct MeasureSet {
  Rational tau;
  Rational tau_max;
  /// Unset for single-row channels, where it is undefined.
  std::optional<Rational> tau_max2;
  double leakage_log = 0.0;
};

MeasureSet measure_set(const DiscreteChannel& channel);

/// q-ary symmetric channel: P(y|x) = 1 - delta on the diagonal and
/// delta / (q - 1) elsewhere. Requires q >= 2 and delta in [0, 1].
DiscreteChannel make_q_ary_symmetric(std::size_t q, const Rational& delta);

/// Erasure channel over q inputs: outputs are the inputs plus "e", with
/// P(x|x) = 1 - eps and P(e|x) = eps. Requires q >= 1 and eps in [0, 1].
DiscreteChannel make_erasure(std::size_t q, const Rational& eps);

}  // namespace leakbound
