#include "leakbound/constructions.hpp"

#include <algorithm>
#include <bit>
#include <functional>

#include "leakbound/error.hpp"
#include "leakbound/measures.hpp"

namespace leakbound {
namespace {

void check_shared_alphabet(std::span<const Pmf> family) {
  if (family.empty()) throw ValidationError("empty PMF family");
  for (const auto& p : family) {
    if (p.alphabet() != family.front().alphabet()) {
      throw ValidationError("PMF family does not share one alphabet");
    }
  }
}

// Per coordinate either a fixed symbol or a list of (symbol, probability);
// adds weight * product to every tuple of the product support.
using Choices = std::vector<std::pair<std::uint32_t, Rational>>;

void add_product(TupleMass& out, const Rational& weight, const std::vector<Choices>& coords) {
  Tuple t(coords.size());
  std::function<void(std::size_t, const Rational&)> walk = [&](std::size_t i, const Rational& w) {
    if (i == coords.size()) {
      out[t] += w;
      return;
    }
    for (const auto& [symbol, p] : coords[i]) {
      t[i] = symbol;
      walk(i + 1, w * p);
    }
  };
  walk(0, weight);
}

}  // namespace

Coupling maximal_coupling_pair(const Pmf& p, const Pmf& q) {
  if (p.alphabet() != q.alphabet()) throw ValidationError("PMFs do not share one alphabet");
  const auto k = p.size();
  TupleMass mass;
  Choices rp, rq;
  Rational tv = 0;
  for (std::uint32_t y = 0; y < k; ++y) {
    const Rational lo = std::min(p[y], q[y]);
    if (lo > 0) mass[{y, y}] += lo;
    if (p[y] > lo) {
      rp.emplace_back(y, p[y] - lo);
      tv += p[y] - lo;
    }
    if (q[y] > lo) rq.emplace_back(y, q[y] - lo);
  }
  // Residual supports are disjoint, so these tuples are off the diagonal.
  for (const auto& [y1, a] : rp) {
    for (const auto& [y2, b] : rq) mass[{y1, y2}] += a * b / tv;
  }
  return Coupling({p, q}, std::move(mass));
}

Coupling layered_coupling(std::span<const Pmf> family) {
  check_shared_alphabet(family);
  const auto m = family.size();
  const auto k = family.front().size();
  std::vector<Pmf> marginals(family.begin(), family.end());
  if (m == 1) {
    TupleMass mass;
    for (std::uint32_t y = 0; y < k; ++y) {
      if (family[0][y] > 0) mass[{y}] = family[0][y];
    }
    return Coupling(std::move(marginals), std::move(mass));
  }
  const auto channel = DiscreteChannel::from_family(family);
  const Rational second = tau_max2(channel);
  if (second > 1) {
    throw PreconditionError("layered coupling needs tau_max2 <= 1, got " + to_string(second));
  }

  // Normalized excess of each row over all the others.
  std::vector<Choices> free(m);
  for (std::size_t i = 0; i < m; ++i) {
    Rational norm = 0;
    for (std::uint32_t y = 0; y < k; ++y) {
      Rational others = 0;
      for (std::size_t j = 0; j < m; ++j) {
        if (j != i) others = std::max(others, family[j][y]);
      }
      if (family[i][y] > others) {
        free[i].emplace_back(y, family[i][y] - others);
        norm += family[i][y] - others;
      }
    }
    for (auto& entry : free[i]) entry.second /= norm;
  }

  auto require_free = [&](std::size_t i) {
    if (free[i].empty()) {
      throw ConstructionError("layered coupling: coordinate " + std::to_string(i) +
                              " must draw freely but has no excess mass");
    }
  };

  TupleMass mass;
  Rational tied_total = 0;
  for (std::uint32_t y = 0; y < k; ++y) {
    std::vector<Rational> levels;
    for (const auto& p : family) levels.push_back(p[y]);
    std::sort(levels.begin(), levels.end(), std::greater<>());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    for (std::size_t l = 0; l < levels.size(); ++l) {
      if (levels[l] == 0) break;
      const Rational below = l + 1 < levels.size() ? levels[l + 1] : Rational(0);
      const Rational thickness = levels[l] - below;
      std::vector<Choices> coords(m);
      std::size_t tied = 0;
      for (std::size_t i = 0; i < m; ++i) {
        if (family[i][y] >= levels[l]) {
          coords[i] = {{y, Rational(1)}};
          ++tied;
        }
      }
      if (tied < 2) continue;  // the top-only slab is the free excess
      for (std::size_t i = 0; i < m; ++i) {
        if (coords[i].empty()) {
          require_free(i);
          coords[i] = free[i];
        }
      }
      add_product(mass, thickness, coords);
      tied_total += thickness;
    }
  }
  const Rational leftover = 1 - tied_total;
  if (leftover > 0) {
    for (std::size_t i = 0; i < m; ++i) require_free(i);
    add_product(mass, leftover, free);
  }
  return Coupling(std::move(marginals), std::move(mass));
}

IntersectionCheck verify_intersection_property(const Coupling& coupling,
                                               std::span<const Pmf> family) {
  const auto m = coupling.arity();
  if (family.size() != m) throw ValidationError("family size does not match coupling arity");
  if (m > 16) throw CapacityError("intersection check supports at most 16 coordinates");
  const auto k = family.front().size();
  const std::size_t masks = std::size_t{1} << m;

  // got[mask][y] = P(Y_i = y for all i in mask).
  std::vector<std::vector<Rational>> got(masks, std::vector<Rational>(k, Rational(0)));
  for (const auto& [tuple, w] : coupling.mass()) {
    for (std::size_t i = 0; i < m; ++i) {
      const auto y = tuple[i];
      bool first = true;
      for (std::size_t j = 0; j < i; ++j) first = first && tuple[j] != y;
      if (!first) continue;
      std::size_t equal = 0;
      for (std::size_t j = 0; j < m; ++j) {
        if (tuple[j] == y) equal |= std::size_t{1} << j;
      }
      for (std::size_t sub = equal; sub; sub = (sub - 1) & equal) {
        if (std::popcount(sub) >= 2) got[sub][y] += w;
      }
    }
  }

  IntersectionCheck result;
  for (std::size_t mask = 1; mask < masks; ++mask) {
    if (std::popcount(mask) < 2) continue;
    for (std::uint32_t y = 0; y < k; ++y) {
      std::optional<Rational> expected;
      for (std::size_t i = 0; i < m; ++i) {
        if (mask >> i & 1) expected = expected ? std::min(*expected, family[i][y]) : family[i][y];
      }
      if (got[mask][y] != *expected) {
        IntersectionCounterexample ce;
        for (std::size_t i = 0; i < m; ++i) {
          if (mask >> i & 1) ce.subset.push_back(i);
        }
        ce.symbol = y;
        ce.coupling_mass = got[mask][y];
        ce.expected = *expected;
        result.holds = false;
        result.counterexample = std::move(ce);
        return result;
      }
    }
  }
  return result;
}

}  // namespace leakbound
