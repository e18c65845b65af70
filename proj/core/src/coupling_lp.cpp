#include "leakbound/coupling_lp.hpp"

#include <algorithm>

#include "leakbound/exact_simplex.hpp"
#include "leakbound/measures.hpp"

namespace leakbound {
namespace {

void check_family(std::span<const Pmf> marginals) {
  if (marginals.size() < 2) throw ValidationError("coupling LP needs at least two marginals");
  for (const auto& p : marginals) {
    if (p.alphabet() != marginals.front().alphabet()) {
      throw ValidationError("marginals do not share an alphabet");
    }
  }
}

LpResult solve_coupling_lp(std::span<const Pmf> marginals, bool pin_diagonal,
                           const LpOptions& options) {
  check_family(marginals);
  const auto m = marginals.size();
  const auto k = marginals.front().size();

  std::vector<std::vector<std::uint32_t>> support(m);
  std::size_t variables = 1;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::uint32_t y = 0; y < k; ++y) {
      if (marginals[i][y] > 0) support[i].push_back(y);
    }
    if (variables > options.max_variables / support[i].size()) {
      throw CapacityError("coupling LP would need more than " +
                          std::to_string(options.max_variables) + " variables");
    }
    variables *= support[i].size();
  }

  // Row (i, y) for every supported y, except the last supported symbol of
  // coordinates after the first: those rows are implied by total mass 1.
  std::vector<std::vector<std::optional<std::size_t>>> row_of(
      m, std::vector<std::optional<std::size_t>>(k));
  std::size_t rows = 0;
  lp::StandardFormLp lp;
  for (std::size_t i = 0; i < m; ++i) {
    const auto last = i == 0 ? support[i].size() : support[i].size() - 1;
    for (std::size_t s = 0; s < last; ++s) {
      row_of[i][support[i][s]] = rows++;
      lp.rhs.push_back(marginals[i][support[i][s]]);
    }
  }
  lp.rows = rows;

  // Lexicographic tuple enumeration over the supports.
  std::vector<Tuple> tuples;
  tuples.reserve(variables);
  std::vector<std::size_t> cursor(m, 0);
  for (std::size_t v = 0; v < variables; ++v) {
    Tuple t(m);
    for (std::size_t i = 0; i < m; ++i) t[i] = support[i][cursor[i]];
    tuples.push_back(std::move(t));
    for (std::size_t i = m; i-- > 0;) {
      if (++cursor[i] < support[i].size()) break;
      cursor[i] = 0;
    }
  }

  std::vector<Rational> lower(variables, Rational(0));
  Rational objective_offset = 0;
  lp.columns.resize(variables);
  lp.cost.resize(variables);
  for (std::size_t v = 0; v < variables; ++v) {
    const auto& t = tuples[v];
    lp.cost[v] = static_cast<long>(distinct_count(t));
    for (std::size_t i = 0; i < m; ++i) {
      if (auto r = row_of[i][t[i]]) lp.columns[v].emplace_back(*r, Rational(1));
    }
    if (pin_diagonal && distinct_count(t) == 1) {
      Rational pmin = marginals[0][t[0]];
      for (std::size_t i = 1; i < m; ++i) pmin = std::min(pmin, marginals[i][t[0]]);
      lower[v] = pmin;
      objective_offset += pmin;
      for (const auto& [r, a] : lp.columns[v]) lp.rhs[r] -= a * pmin;
    }
  }

  const auto solution = lp::solve(lp);

  TupleMass mass;
  for (std::size_t v = 0; v < variables; ++v) {
    Rational w = solution.x[v] + lower[v];
    if (w != 0) mass.emplace(tuples[v], std::move(w));
  }
  std::vector<Pmf> family(marginals.begin(), marginals.end());
  Coupling witness(std::move(family), std::move(mass));
  Rational value = solution.objective + objective_offset;
  const bool achieves = value == tau_max(DiscreteChannel::from_family(marginals));
  return LpResult{std::move(value), std::move(witness), achieves};
}

}  // namespace

LpResult min_union_coupling(std::span<const Pmf> marginals, const LpOptions& options) {
  return solve_coupling_lp(marginals, false, options);
}

LpResult min_union_coupling_diag(std::span<const Pmf> marginals, const LpOptions& options) {
  return solve_coupling_lp(marginals, true, options);
}

}  // namespace leakbound
