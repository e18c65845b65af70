#include "leakbound/exact_simplex.hpp"

#include <optional>

#include "leakbound/error.hpp"

namespace leakbound::lp {
namespace {

// Revised simplex state over n structural columns plus one artificial column
// per row (index n + r, the unit vector e_r after sign normalization).
class RevisedSimplex {
 public:
  explicit RevisedSimplex(const StandardFormLp& lp)
      : lp_(lp), k_(lp.rows), n_(lp.columns.size()), sign_(k_, 1) {
    binv_.assign(k_, std::vector<Rational>(k_, Rational(0)));
    basis_.resize(k_);
    xb_.resize(k_);
    for (std::size_t r = 0; r < k_; ++r) {
      if (lp.rhs[r] < 0) sign_[r] = -1;
      basis_[r] = n_ + r;
      binv_[r][r] = 1;
      xb_[r] = sign_[r] < 0 ? Rational(-lp.rhs[r]) : lp.rhs[r];
    }
    is_basic_.assign(n_ + k_, false);
    for (std::size_t r = 0; r < k_; ++r) is_basic_[n_ + r] = true;
  }

  LpSolution run() {
    // Phase 1: minimize the sum of artificials.
    std::vector<Rational> phase1(n_ + k_, Rational(0));
    for (std::size_t r = 0; r < k_; ++r) phase1[n_ + r] = 1;
    optimize(phase1);
    Rational infeasibility = 0;
    for (std::size_t r = 0; r < k_; ++r) {
      if (basis_[r] >= n_) infeasibility += xb_[r];
    }
    if (infeasibility != 0) {
      throw InfeasibleError("linear program is infeasible (phase 1 optimum " +
                            to_string(infeasibility) + ")");
    }
    drive_out_artificials();

    std::vector<Rational> phase2(n_ + k_, Rational(0));
    for (std::size_t j = 0; j < n_; ++j) phase2[j] = lp_.cost[j];
    optimize(phase2);

    LpSolution out;
    out.x.assign(n_, Rational(0));
    for (std::size_t r = 0; r < k_; ++r) {
      if (basis_[r] < n_) out.x[basis_[r]] = xb_[r];
    }
    out.objective = 0;
    for (std::size_t j = 0; j < n_; ++j) {
      if (out.x[j] != 0) out.objective += lp_.cost[j] * out.x[j];
    }
    out.iterations = iterations_;
    return out;
  }

 private:
  // B^{-1} A_j for a structural or artificial column.
  std::vector<Rational> ftran(std::size_t j) const {
    std::vector<Rational> u(k_, Rational(0));
    if (j >= n_) {
      const auto row = j - n_;
      for (std::size_t r = 0; r < k_; ++r) u[r] = binv_[r][row];
      return u;
    }
    for (const auto& [row, a] : lp_.columns[j]) {
      const Rational coef = sign_[row] < 0 ? Rational(-a) : a;
      for (std::size_t r = 0; r < k_; ++r) {
        if (binv_[r][row] != 0) u[r] += binv_[r][row] * coef;
      }
    }
    return u;
  }

  void pivot(std::size_t p, std::size_t q, const std::vector<Rational>& u) {
    const Rational pivot_value = u[p];
    const Rational theta = xb_[p] / pivot_value;
    for (std::size_t c = 0; c < k_; ++c) {
      if (binv_[p][c] != 0) binv_[p][c] /= pivot_value;
    }
    for (std::size_t r = 0; r < k_; ++r) {
      if (r == p || u[r] == 0) continue;
      for (std::size_t c = 0; c < k_; ++c) {
        if (binv_[p][c] != 0) binv_[r][c] -= u[r] * binv_[p][c];
      }
      xb_[r] -= theta * u[r];
    }
    xb_[p] = theta;
    is_basic_[basis_[p]] = false;
    is_basic_[q] = true;
    basis_[p] = q;
    ++iterations_;
  }

  // Bland's rule on structural columns only; artificials never re-enter.
  void optimize(const std::vector<Rational>& cost) {
    std::vector<Rational> y(k_);
    for (;;) {
      for (std::size_t c = 0; c < k_; ++c) {
        y[c] = 0;
        for (std::size_t r = 0; r < k_; ++r) {
          const Rational& cb = cost[basis_[r]];
          if (cb != 0 && binv_[r][c] != 0) y[c] += cb * binv_[r][c];
        }
      }
      std::optional<std::size_t> entering;
      for (std::size_t j = 0; j < n_ && !entering; ++j) {
        if (is_basic_[j]) continue;
        Rational reduced = cost[j];
        for (const auto& [row, a] : lp_.columns[j]) {
          if (y[row] != 0) reduced -= y[row] * (sign_[row] < 0 ? Rational(-a) : a);
        }
        if (reduced < 0) entering = j;
      }
      if (!entering) return;

      const auto u = ftran(*entering);
      std::optional<std::size_t> leaving;
      Rational best_ratio;
      for (std::size_t r = 0; r < k_; ++r) {
        if (u[r] <= 0) continue;
        Rational ratio = xb_[r] / u[r];
        if (!leaving || ratio < best_ratio ||
            (ratio == best_ratio && basis_[r] < basis_[*leaving])) {
          leaving = r;
          best_ratio = std::move(ratio);
        }
      }
      if (!leaving) throw Error("linear program is unbounded");
      pivot(*leaving, *entering, u);
    }
  }

  // Pivot zero-level artificials out of the basis where a structural column
  // can replace them. Rows where none can are redundant; their artificial
  // stays basic at zero and, since B^{-1} A is zero on that row for every
  // structural column, never moves again.
  void drive_out_artificials() {
    for (std::size_t r = 0; r < k_; ++r) {
      if (basis_[r] < n_) continue;
      for (std::size_t j = 0; j < n_; ++j) {
        if (is_basic_[j]) continue;
        Rational entry = 0;
        for (const auto& [row, a] : lp_.columns[j]) {
          if (binv_[r][row] != 0) entry += binv_[r][row] * (sign_[row] < 0 ? Rational(-a) : a);
        }
        if (entry != 0) {
          pivot(r, j, ftran(j));
          break;
        }
      }
    }
  }

  const StandardFormLp& lp_;
  std::size_t k_;
  std::size_t n_;
  std::vector<int> sign_;
  std::vector<std::vector<Rational>> binv_;
  std::vector<std::size_t> basis_;
  std::vector<Rational> xb_;
  std::vector<bool> is_basic_;
  std::size_t iterations_ = 0;
};

}  // namespace

LpSolution solve(const StandardFormLp& problem) {
  if (problem.rhs.size() != problem.rows || problem.cost.size() != problem.columns.size()) {
    throw ValidationError("linear program dimensions are inconsistent");
  }
  for (const auto& column : problem.columns) {
    for (const auto& entry : column) {
      if (entry.first >= problem.rows) throw ValidationError("column entry outside the row range");
    }
  }
  return RevisedSimplex(problem).run();
}

}  // namespace leakbound::lp
