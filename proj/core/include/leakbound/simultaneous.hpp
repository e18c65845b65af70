#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "leakbound/coupling.hpp"
#include "leakbound/error.hpp"
#include "leakbound/pmf.hpp"
#include "leakbound/rational.hpp"

namespace leakbound {

/// Exact joint PMF over X x Y, stored row-major (x major).
class JointPmf {
 public:
  /// Throws ValidationError unless masses are nonnegative, sum to 1 and
  /// match |X| * |Y|.
  JointPmf(Alphabet x_alphabet, Alphabet y_alphabet, std::vector<Rational> mass);

  const Alphabet& x_alphabet() const noexcept { return x_alphabet_; }
  const Alphabet& y_alphabet() const noexcept { return y_alphabet_; }
  std::size_t x_size() const noexcept { return x_alphabet_.size(); }
  std::size_t y_size() const noexcept { return y_alphabet_.size(); }
  const Rational& at(std::size_t x, std::size_t y) const { return mass_[x * y_size() + y]; }

  Pmf x_marginal() const;
  Pmf y_marginal() const;

  friend bool operator==(const JointPmf&, const JointPmf&) = default;

 private:
  Alphabet x_alphabet_;
  Alphabet y_alphabet_;
  std::vector<Rational> mass_;
};

/// Where the minimal Y-coupling behind the construction comes from.
enum class IngredientSource {
  /// Closed forms: maximal pair (m = 2), the four-PMF mixture (m = 4 under
  /// the relaxed condition), the layered coupling (tau_max2 <= 1).
  automatic,
  /// The exact LP with the diagonal pinned to P_min.
  lp,
};

struct SimulOptions {
  IngredientSource ingredient = IngredientSource::automatic;
  std::size_t max_states = kDefaultMaxStates;
};

/// Coupling of m joint PMFs P_{X_i,Y_i} whose Y-part is a minimal coupling,
/// kept in factored form:
///
///   c_XY * G1 + (c_Y - c_XY) * G2 + (1 - c_Y) * G3
///
/// G1 ties every coordinate to (x, y) with weight P_min(x, y); G2 ties the
/// Y coordinates to y and draws each X_i from its conditional residual at y;
/// G3 draws Y^m from the excess of the ingredient Y-coupling over its
/// diagonal and each X_i from its conditional residual at y_i.
/// Tuples in the materialized form are (x_1..x_m, y_1..y_m).
class SimulCoupling {
 public:
  const std::vector<JointPmf>& sources() const noexcept { return sources_; }
  std::size_t arity() const noexcept { return sources_.size(); }
  const Rational& c_xy() const noexcept { return c_xy_; }
  const Rational& c_y() const noexcept { return c_y_; }

  /// The minimal Y-coupling the construction was built around; its diagonal
  /// is exactly P_{Y_min}.
  const Coupling& y_coupling() const noexcept { return y_coupling_; }
  /// "identical", "maximal-pair", "n4", "layered" or "lp-diag".
  const std::string& ingredient_name() const noexcept { return ingredient_name_; }

  /// min_i P_{X_i,Y_i}(x, y).
  const Rational& pmin_xy(std::size_t x, std::size_t y) const {
    return pmin_xy_[x * y_size() + y];
  }
  /// min_i P_{Y_i}(y).
  const Rational& pmin_y(std::size_t y) const { return pmin_y_[y]; }
  /// Weight of G2 at symbol y: P_{Y_min}(y) - sum_x P_min(x, y).
  const Rational& tied_residual_weight(std::size_t y) const { return g2_weight_[y]; }
  /// P(X_i = x | Y_i = y) restricted to the part not covered by P_min;
  /// zero for every x when that part is empty.
  const Rational& residual(std::size_t i, std::size_t x, std::size_t y) const {
    return residual_[i][x * y_size() + y];
  }

  /// Expands the factored form to explicit tuples. Throws CapacityError if
  /// the support would exceed `max_states`.
  TupleMass materialize(std::size_t max_states = kDefaultMaxStates) const;

 private:
  friend SimulCoupling build_simultaneous_coupling(std::span<const JointPmf>,
                                                   const SimulOptions&);
  SimulCoupling(std::vector<JointPmf> sources, Coupling y_coupling);

  std::size_t x_size() const { return sources_.front().x_size(); }
  std::size_t y_size() const { return sources_.front().y_size(); }

  std::vector<JointPmf> sources_;
  Coupling y_coupling_;
  std::string ingredient_name_;
  Rational c_xy_;
  Rational c_y_;
  std::vector<Rational> pmin_xy_;
  std::vector<Rational> pmin_y_;
  std::vector<Rational> g2_weight_;
  std::vector<std::vector<Rational>> residual_;
};

/// Builds the simultaneous coupling. Requires shared alphabets and either
/// tau_max2 of the Y-marginals <= 1, or m = 4 with the relaxed four-PMF
/// condition on the Y-marginals. Throws PreconditionError naming the
/// tau_max2 value otherwise. Every marginal identity is checked exactly
/// before returning.
SimulCoupling build_simultaneous_coupling(std::span<const JointPmf> sources,
                                          const SimulOptions& options = {});

/// sum_y P(union_i {Y_i = y}) under the coupling.
Rational y_union_mass(const SimulCoupling& coupling);

/// sum_y P(X_1 = ... = X_m, union_j {Y_j = y}): the mass of "all X
/// coordinates agree", weighted by the number of distinct Y values.
Rational f_quantity(const SimulCoupling& coupling);

/// Sums a materialized coupling over its X coordinates, leaving Y^m.
TupleMass marginalize_x(const TupleMass& materialized, std::size_t arity);

}  // namespace leakbound
