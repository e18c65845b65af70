#include "leakbound/constructions.hpp"

#include <algorithm>
#include <bit>

#include "leakbound/error.hpp"
#include "leakbound/measures.hpp"

namespace leakbound {
namespace {

constexpr std::size_t kAll = 15;

std::size_t bit(std::size_t i) { return std::size_t{1} << i; }

std::size_t pair_mask(std::size_t p) { return bit(kPairs[p][0]) | bit(kPairs[p][1]); }

// Index 0, 1, 2 of the double-tie pattern containing pair p.
std::size_t pattern_of(std::size_t p) { return std::min(p, complement_pair(p)); }

std::string tuple_text(const Tuple& t) {
  return "(" + std::to_string(t[0]) + "," + std::to_string(t[1]) + "," + std::to_string(t[2]) +
         "," + std::to_string(t[3]) + ")";
}

}  // namespace

N4Condition n4_condition(std::span<const Pmf> family) {
  if (family.size() != 4) throw ValidationError("four-PMF condition needs exactly four PMFs");
  const auto channel = DiscreteChannel::from_family(family);
  const auto k = channel.output_size();

  N4Ingredients ing;
  for (std::size_t mask = 1; mask <= kAll; ++mask) {
    auto& mins = ing.subset_min[mask];
    mins.resize(k);
    ing.tau_subset[mask] = 0;
    for (std::size_t y = 0; y < k; ++y) {
      std::optional<Rational> lo;
      for (std::size_t i = 0; i < 4; ++i) {
        if (mask & bit(i)) lo = lo ? std::min(*lo, family[i][y]) : family[i][y];
      }
      mins[y] = *lo;
      ing.tau_subset[mask] += *lo;
    }
  }
  ing.tau = ing.tau_subset[kAll];
  ing.tau_max = tau_max(channel);
  ing.tau_max2 = tau_max2(channel);

  for (std::size_t i = 0; i < 4; ++i) {
    auto& r = ing.residual[i];
    r.assign(k, Rational(0));
    ing.residual_norm[i] = 0;
    for (std::size_t y = 0; y < k; ++y) {
      Rational others = 0;
      for (std::size_t j = 0; j < 4; ++j) {
        if (j != i) others = std::max(others, family[j][y]);
      }
      if (family[i][y] > others) r[y] = family[i][y] - others;
      ing.residual_norm[i] += r[y];
    }
    // Normalizer by the max-min identity: 1 - sum of pair overlaps with i
    // + sum of triple overlaps with i - tau.
    Rational expected = 1 - ing.tau;
    for (std::size_t j = 0; j < 4; ++j) {
      if (j != i) expected -= ing.tau_subset[bit(i) | bit(j)];
    }
    for (std::size_t mask = 1; mask <= kAll; ++mask) {
      if (std::popcount(mask) == 3 && (mask & bit(i))) expected += ing.tau_subset[mask];
    }
    if (expected != ing.residual_norm[i]) {
      throw ConstructionError("residual normalizer of R_" + std::to_string(i + 1) + " is " +
                              to_string(ing.residual_norm[i]) + " but the overlap formula gives " +
                              to_string(expected));
    }
  }

  for (std::size_t p = 0; p < kPairs.size(); ++p) {
    const auto ij = pair_mask(p);
    const auto kl = kAll & ~ij;
    const auto k_bit = kl & (~kl + 1);
    const auto l_bit = kl & ~k_bit;
    auto& t = ing.pair_excess[p];
    t.resize(k);
    ing.pair_norm[p] = 0;
    for (std::size_t y = 0; y < k; ++y) {
      t[y] = ing.subset_min[ij][y] - ing.subset_min[ij | k_bit][y] - ing.subset_min[ij | l_bit][y] +
             ing.subset_min[kAll][y];
      if (t[y] < 0) {
        throw ConstructionError("T for pair " + std::to_string(p) + " is negative at symbol " +
                                std::to_string(y));
      }
      ing.pair_norm[p] += t[y];
    }
  }

  N4Condition out;
  out.capacity = 0;
  for (std::size_t t = 0; t < 3; ++t) {
    out.capacity += std::min(ing.pair_norm[t], ing.pair_norm[complement_pair(t)]);
  }
  out.demand = ing.tau_max2 - 1;
  out.holds = out.capacity >= out.demand;
  out.ingredients = std::move(ing);
  return out;
}

MixtureWeights choose_abc(const N4Ingredients& ing) {
  MixtureWeights w;
  const Rational demand = ing.tau_max2 - 1;
  std::array<Rational, 3> cap;
  Rational total_cap = 0;
  for (std::size_t t = 0; t < 3; ++t) {
    cap[t] = std::min(ing.pair_norm[t], ing.pair_norm[complement_pair(t)]);
    total_cap += cap[t];
  }
  if (total_cap < demand) {
    throw PreconditionError("four-PMF condition fails: pair capacity " + to_string(total_cap) +
                            " < tau_max2 - 1 = " + to_string(demand));
  }
  if (demand <= 0) {
    w.a = 1;
    w.b = 0;
    w.c = 0;
    w.alpha = {Rational(0), Rational(0), Rational(0)};
    w.gamma = -demand;
  } else {
    w.a = std::min(Rational(1), cap[0] / demand);
    w.b = std::min(Rational(1 - w.a), cap[1] / demand);
    w.c = 1 - w.a - w.b;
    if (w.c * demand > cap[2]) {
      throw PreconditionError("no feasible (a, b, c) split");
    }
    w.alpha = {w.a * demand, w.b * demand, w.c * demand};
    w.gamma = 0;
  }
  for (std::size_t p = 0; p < kPairs.size(); ++p) {
    w.beta[p] = ing.pair_norm[p] - w.alpha[pattern_of(p)];
  }
  return w;
}

Coupling build_n4_coupling(std::span<const Pmf> family) {
  auto condition = n4_condition(family);
  if (!condition.holds) {
    throw PreconditionError("four-PMF condition fails: capacity " + to_string(condition.capacity) +
                            " < tau_max2 - 1 = " + to_string(condition.demand));
  }
  const auto& ing = condition.ingredients;
  const auto weights = choose_abc(ing);
  const auto k = family.front().size();
  const auto& pmin = ing.subset_min[kAll];

  auto normalized_residual = [&](std::size_t i) {
    if (ing.residual_norm[i] == 0) {
      throw ConstructionError("component needs R_" + std::to_string(i + 1) +
                              " but its normalizer is zero");
    }
    std::vector<std::pair<std::uint32_t, Rational>> out;
    for (std::uint32_t y = 0; y < k; ++y) {
      if (ing.residual[i][y] > 0) out.emplace_back(y, ing.residual[i][y] / ing.residual_norm[i]);
    }
    return out;
  };
  auto normalized_excess = [&](std::size_t p) {
    if (ing.pair_norm[p] == 0) {
      throw ConstructionError("component needs T for pair " + std::to_string(p) +
                              " but N is zero");
    }
    std::vector<std::pair<std::uint32_t, Rational>> out;
    for (std::uint32_t y = 0; y < k; ++y) {
      if (ing.pair_excess[p][y] > 0) out.emplace_back(y, ing.pair_excess[p][y] / ing.pair_norm[p]);
    }
    return out;
  };

  TupleMass mass;
  Rational weight_total = 0;

  // All four tied at y with mass P_min(y).
  for (std::uint32_t y = 0; y < k; ++y) {
    if (pmin[y] > 0) mass[{y, y, y, y}] += pmin[y];
  }
  weight_total += ing.tau;

  // One coordinate free from its residual, the other three tied.
  for (std::size_t i = 0; i < 4; ++i) {
    const auto rest = kAll & ~bit(i);
    const Rational weight = ing.tau_subset[rest] - ing.tau;
    weight_total += weight;
    if (weight == 0) continue;
    const auto r = normalized_residual(i);
    for (std::uint32_t y = 0; y < k; ++y) {
      const Rational tie = ing.subset_min[rest][y] - pmin[y];
      if (tie == 0) continue;
      for (const auto& [yi, pr] : r) {
        Tuple t{y, y, y, y};
        t[i] = yi;
        mass[t] += pr * tie;
      }
    }
  }

  // Pair p tied through T_p, the complementary pair free from residuals.
  for (std::size_t p = 0; p < kPairs.size(); ++p) {
    const Rational& weight = weights.beta[p];
    if (weight < 0) throw ConstructionError("negative beta for pair " + std::to_string(p));
    weight_total += weight;
    if (weight == 0) continue;
    const auto [i, j] = kPairs[complement_pair(p)];
    const auto [a, b] = kPairs[p];
    const auto ri = normalized_residual(i);
    const auto rj = normalized_residual(j);
    const auto tie = normalized_excess(p);
    for (const auto& [y, pt] : tie) {
      for (const auto& [yi, pi] : ri) {
        for (const auto& [yj, pj] : rj) {
          Tuple t(4);
          t[a] = y;
          t[b] = y;
          t[i] = yi;
          t[j] = yj;
          mass[t] += weight * pt * pi * pj;
        }
      }
    }
  }

  // Both pairs of a pattern tied, at different symbols.
  for (std::size_t pattern = 0; pattern < 3; ++pattern) {
    const Rational& weight = weights.alpha[pattern];
    weight_total += weight;
    if (weight == 0) continue;
    const auto first = normalized_excess(pattern);
    const auto second = normalized_excess(complement_pair(pattern));
    const auto [a, b] = kPairs[pattern];
    const auto [c, d] = kPairs[complement_pair(pattern)];
    for (const auto& [y, p1] : first) {
      for (const auto& [y2, p2] : second) {
        Tuple t(4);
        t[a] = y;
        t[b] = y;
        t[c] = y2;
        t[d] = y2;
        mass[t] += weight * p1 * p2;
      }
    }
  }

  // Every coordinate free; carries the weight left when tau_max2 < 1.
  weight_total += weights.gamma;
  if (weights.gamma > 0) {
    std::array<std::vector<std::pair<std::uint32_t, Rational>>, 4> r;
    for (std::size_t i = 0; i < 4; ++i) r[i] = normalized_residual(i);
    for (const auto& [y0, p0] : r[0]) {
      for (const auto& [y1, p1] : r[1]) {
        for (const auto& [y2, p2] : r[2]) {
          for (const auto& [y3, p3] : r[3]) {
            mass[{y0, y1, y2, y3}] += weights.gamma * p0 * p1 * p2 * p3;
          }
        }
      }
    }
  }

  if (weight_total != 1) {
    throw ConstructionError("mixture weights sum to " + to_string(weight_total));
  }
  for (const auto& [t, w] : mass) {
    if (w < 0) throw ConstructionError("negative mass at " + tuple_text(t));
  }
  Coupling coupling(std::vector<Pmf>(family.begin(), family.end()), std::move(mass));
  if (union_mass(coupling) != ing.tau_max) {
    throw ConstructionError("four-PMF coupling union mass " + to_string(union_mass(coupling)) +
                            " differs from tau_max " + to_string(ing.tau_max));
  }
  return coupling;
}

}  // namespace leakbound
