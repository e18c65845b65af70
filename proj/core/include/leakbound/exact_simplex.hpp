#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "leakbound/rational.hpp"

namespace leakbound::lp {

/// Nonzero entries (row, coefficient) of one constraint column.
using SparseColumn = std::vector<std::pair<std::size_t, Rational>>;

/// minimize cost . x  subject to  A x = rhs,  x >= 0.
/// A is stored column-wise.
struct StandardFormLp {
  std::size_t rows = 0;
  std::vector<SparseColumn> columns;
  std::vector<Rational> cost;
  std::vector<Rational> rhs;
};

struct LpSolution {
  Rational objective;
  std::vector<Rational> x;
  std::size_t iterations = 0;
};

/// Two-phase revised simplex in exact arithmetic with Bland's rule (lowest
/// eligible index enters, lowest basic index leaves on ratio ties), so it
/// terminates and is deterministic. Redundant equality rows are tolerated.
/// Throws InfeasibleError when no feasible point exists and Error when the
/// objective is unbounded below.
LpSolution solve(const StandardFormLp& problem);

}  // namespace leakbound::lp
