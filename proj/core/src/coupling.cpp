#include "leakbound/coupling.hpp"

#include <algorithm>

#include "leakbound/error.hpp"

namespace leakbound {
namespace {

std::string tuple_text(const Tuple& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(t[i]);
  }
  return s + ")";
}

}  // namespace

std::size_t distinct_count(std::span<const std::uint32_t> tuple) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    bool seen = false;
    for (std::size_t j = 0; j < i && !seen; ++j) seen = tuple[j] == tuple[i];
    if (!seen) ++count;
  }
  return count;
}

std::optional<std::string> coupling_violation(std::span<const Pmf> marginals,
                                              const TupleMass& mass) {
  if (marginals.empty()) return "coupling has no coordinates";
  const auto m = marginals.size();
  const auto k = marginals.front().size();
  for (const auto& p : marginals) {
    if (p.alphabet() != marginals.front().alphabet()) return "marginals do not share an alphabet";
  }
  std::vector<std::vector<Rational>> sums(m, std::vector<Rational>(k, Rational(0)));
  Rational total = 0;
  for (const auto& [tuple, w] : mass) {
    if (tuple.size() != m) return "tuple " + tuple_text(tuple) + " has the wrong arity";
    if (w < 0) return "negative mass " + to_string(w) + " at " + tuple_text(tuple);
    for (std::size_t i = 0; i < m; ++i) {
      if (tuple[i] >= k) return "tuple " + tuple_text(tuple) + " is out of the alphabet";
      sums[i][tuple[i]] += w;
    }
    total += w;
  }
  if (total != 1) return "total mass is " + to_string(total);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t y = 0; y < k; ++y) {
      if (sums[i][y] != marginals[i][y]) {
        return "marginal " + std::to_string(i) + " at symbol " + std::to_string(y) + " is " +
               to_string(sums[i][y]) + ", expected " + to_string(marginals[i][y]);
      }
    }
  }
  return std::nullopt;
}

Coupling::Coupling(std::vector<Pmf> marginals, TupleMass mass)
    : marginals_(std::move(marginals)), mass_(std::move(mass)) {
  std::erase_if(mass_, [](const auto& entry) { return entry.second == 0; });
  if (auto problem = coupling_violation(marginals_, mass_)) {
    throw ConstructionError("invalid coupling: " + *problem);
  }
}

Rational Coupling::at(const Tuple& tuple) const {
  auto it = mass_.find(tuple);
  return it == mass_.end() ? Rational(0) : it->second;
}

Rational Coupling::intersection_mass(std::span<const std::size_t> subset,
                                     std::uint32_t symbol) const {
  Rational total = 0;
  for (const auto& [tuple, w] : mass_) {
    if (std::all_of(subset.begin(), subset.end(), [&](std::size_t i) { return tuple[i] == symbol; })) {
      total += w;
    }
  }
  return total;
}

Rational Coupling::diagonal_mass(std::uint32_t symbol) const {
  return at(Tuple(arity(), symbol));
}

Rational union_mass(const Coupling& coupling) {
  Rational total = 0;
  for (const auto& [tuple, w] : coupling.mass()) {
    total += w * static_cast<long>(distinct_count(tuple));
  }
  return total;
}

Coupling independent_coupling(std::vector<Pmf> marginals) {
  TupleMass mass;
  mass[Tuple{}] = 1;
  for (const auto& p : marginals) {
    TupleMass next;
    for (const auto& [prefix, w] : mass) {
      for (std::uint32_t y = 0; y < p.size(); ++y) {
        if (p[y] == 0) continue;
        Tuple t = prefix;
        t.push_back(y);
        next.emplace(std::move(t), w * p[y]);
      }
    }
    mass = std::move(next);
  }
  return Coupling(std::move(marginals), std::move(mass));
}

}  // namespace leakbound
