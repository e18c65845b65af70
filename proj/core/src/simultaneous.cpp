#include "leakbound/simultaneous.hpp"

#include <algorithm>
#include <functional>

#include "leakbound/constructions.hpp"
#include "leakbound/coupling_lp.hpp"
#include "leakbound/measures.hpp"

namespace leakbound {

JointPmf::JointPmf(Alphabet x_alphabet, Alphabet y_alphabet, std::vector<Rational> mass)
    : x_alphabet_(std::move(x_alphabet)), y_alphabet_(std::move(y_alphabet)), mass_(std::move(mass)) {
  if (x_alphabet_.empty() || y_alphabet_.empty()) throw ValidationError("joint PMF needs non-empty alphabets");
  if (mass_.size() != x_alphabet_.size() * y_alphabet_.size()) {
    throw ValidationError("joint PMF has " + std::to_string(mass_.size()) + " entries, expected " +
                          std::to_string(x_alphabet_.size() * y_alphabet_.size()));
  }
  Rational total = 0;
  for (const auto& v : mass_) {
    if (v < 0) throw ValidationError("joint PMF has a negative entry " + to_string(v));
    total += v;
  }
  if (total != 1) throw ValidationError("joint PMF sums to " + to_string(total));
}

Pmf JointPmf::x_marginal() const {
  std::vector<Rational> out(x_size(), Rational(0));
  for (std::size_t x = 0; x < x_size(); ++x) {
    for (std::size_t y = 0; y < y_size(); ++y) out[x] += at(x, y);
  }
  return Pmf(x_alphabet_, std::move(out));
}

Pmf JointPmf::y_marginal() const {
  std::vector<Rational> out(y_size(), Rational(0));
  for (std::size_t x = 0; x < x_size(); ++x) {
    for (std::size_t y = 0; y < y_size(); ++y) out[y] += at(x, y);
  }
  return Pmf(y_alphabet_, std::move(out));
}

SimulCoupling::SimulCoupling(std::vector<JointPmf> sources, Coupling y_coupling)
    : sources_(std::move(sources)), y_coupling_(std::move(y_coupling)) {}

namespace {

struct Ingredient {
  Coupling coupling;
  std::string name;
};

Ingredient choose_ingredient(const std::vector<Pmf>& ys, const SimulOptions& options) {
  const auto m = ys.size();
  if (std::all_of(ys.begin(), ys.end(), [&](const Pmf& p) { return p == ys.front(); })) {
    TupleMass mass;
    for (std::uint32_t y = 0; y < ys.front().size(); ++y) {
      if (ys.front()[y] > 0) mass[Tuple(m, y)] = ys.front()[y];
    }
    return {Coupling(ys, std::move(mass)), "identical"};
  }
  if (options.ingredient == IngredientSource::lp) {
    auto lp = min_union_coupling_diag(ys, LpOptions{options.max_states});
    if (!lp.achieves_tau_max) {
      throw PreconditionError("no coupling of the Y-marginals reaches tau_max (LP optimum " +
                              to_string(lp.optimal_value) + ")");
    }
    return {std::move(lp.witness), "lp-diag"};
  }
  if (m == 2) return {maximal_coupling_pair(ys[0], ys[1]), "maximal-pair"};
  if (m == 4 && n4_condition(ys).holds) return {build_n4_coupling(ys), "n4"};
  const auto t2 = tau_max2(DiscreteChannel::from_family(ys));
  if (t2 <= 1) return {layered_coupling(ys), "layered"};
  throw PreconditionError("simultaneous coupling needs tau_max2 <= 1 of the Y-marginals, got " +
                          to_string(t2));
}

using Choices = std::vector<std::pair<std::uint32_t, Rational>>;

}  // namespace

SimulCoupling build_simultaneous_coupling(std::span<const JointPmf> sources,
                                          const SimulOptions& options) {
  if (sources.empty()) throw ValidationError("simultaneous coupling needs at least one source");
  for (const auto& s : sources) {
    if (s.x_alphabet() != sources.front().x_alphabet() ||
        s.y_alphabet() != sources.front().y_alphabet()) {
      throw ValidationError("joint PMFs do not share their alphabets");
    }
  }
  const auto m = sources.size();
  const auto nx = sources.front().x_size();
  const auto ny = sources.front().y_size();

  std::vector<Pmf> ys;
  for (const auto& s : sources) ys.push_back(s.y_marginal());
  auto ingredient = choose_ingredient(ys, options);

  SimulCoupling out(std::vector<JointPmf>(sources.begin(), sources.end()),
                    std::move(ingredient.coupling));
  out.ingredient_name_ = std::move(ingredient.name);

  out.pmin_xy_.assign(nx * ny, Rational(0));
  out.c_xy_ = 0;
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t y = 0; y < ny; ++y) {
      Rational lo = sources[0].at(x, y);
      for (std::size_t i = 1; i < m; ++i) lo = std::min(lo, sources[i].at(x, y));
      out.pmin_xy_[x * ny + y] = lo;
      out.c_xy_ += lo;
    }
  }
  out.pmin_y_.assign(ny, Rational(0));
  out.g2_weight_.assign(ny, Rational(0));
  out.c_y_ = 0;
  for (std::size_t y = 0; y < ny; ++y) {
    Rational lo = ys[0][y];
    for (std::size_t i = 1; i < m; ++i) lo = std::min(lo, ys[i][y]);
    out.pmin_y_[y] = lo;
    out.c_y_ += lo;
    if (out.y_coupling_.diagonal_mass(static_cast<std::uint32_t>(y)) != lo) {
      throw ConstructionError("ingredient coupling has diagonal mass " +
                              to_string(out.y_coupling_.diagonal_mass(static_cast<std::uint32_t>(y))) +
                              " at y=" + std::to_string(y) + ", expected " + to_string(lo));
    }
    Rational covered = 0;
    for (std::size_t x = 0; x < nx; ++x) covered += out.pmin_xy_[x * ny + y];
    out.g2_weight_[y] = lo - covered;
    if (out.g2_weight_[y] < 0) throw ConstructionError("negative tied-residual weight");
  }

  out.residual_.assign(m, std::vector<Rational>(nx * ny, Rational(0)));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t y = 0; y < ny; ++y) {
      Rational covered = 0;
      for (std::size_t x = 0; x < nx; ++x) covered += out.pmin_xy_[x * ny + y];
      const Rational denom = ys[i][y] - covered;
      if (denom == 0) continue;
      for (std::size_t x = 0; x < nx; ++x) {
        out.residual_[i][x * ny + y] = (sources[i].at(x, y) - out.pmin_xy_[x * ny + y]) / denom;
      }
    }
  }

  // Factored marginal identity:
  // P_min(x,y) + res_i(x|y) * (G2(y) + P_{Y_i}(y) - P_{Y_min}(y)) = P_i(x,y).
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t x = 0; x < nx; ++x) {
      for (std::size_t y = 0; y < ny; ++y) {
        const Rational rebuilt =
            out.pmin_xy_[x * ny + y] +
            out.residual_[i][x * ny + y] * (out.g2_weight_[y] + ys[i][y] - out.pmin_y_[y]);
        if (rebuilt != sources[i].at(x, y)) {
          throw ConstructionError("simultaneous coupling marginal " + std::to_string(i) + " is " +
                                  to_string(rebuilt) + " at (x=" + std::to_string(x) +
                                  ", y=" + std::to_string(y) + "), expected " +
                                  to_string(sources[i].at(x, y)));
        }
      }
    }
  }
  return out;
}

TupleMass SimulCoupling::materialize(std::size_t max_states) const {
  const auto m = arity();
  const auto nx = x_size();
  const auto ny = y_size();

  auto support = [&](std::size_t i, std::uint32_t y) {
    Choices out;
    for (std::uint32_t x = 0; x < nx; ++x) {
      const auto& r = residual(i, x, y);
      if (r > 0) out.emplace_back(x, r);
    }
    return out;
  };

  // Count first so oversized requests fail before allocating.
  auto product_size = [&](const Tuple& ytuple) {
    std::size_t count = 1;
    for (std::size_t i = 0; i < m; ++i) {
      const auto s = support(i, ytuple[i]).size();
      if (s != 0 && count > max_states / s) return max_states + 1;
      count *= s;
    }
    return count;
  };
  std::size_t states = 0;
  auto charge = [&](std::size_t n) {
    states += n;
    if (states > max_states) {
      throw CapacityError("materialized simultaneous coupling exceeds " +
                          std::to_string(max_states) + " states");
    }
  };
  for (std::size_t k = 0; k < pmin_xy_.size(); ++k) {
    if (pmin_xy_[k] > 0) charge(1);
  }
  for (std::uint32_t y = 0; y < ny; ++y) {
    if (g2_weight_[y] > 0) charge(product_size(Tuple(m, y)));
  }
  for (const auto& [yt, w] : y_coupling_.mass()) {
    if (distinct_count(yt) > 1) charge(product_size(yt));
  }

  TupleMass out;
  for (std::uint32_t x = 0; x < nx; ++x) {
    for (std::uint32_t y = 0; y < ny; ++y) {
      const auto& w = pmin_xy(x, y);
      if (w == 0) continue;
      Tuple t(2 * m);
      std::fill(t.begin(), t.begin() + m, x);
      std::fill(t.begin() + m, t.end(), y);
      out[t] += w;
    }
  }
  auto expand = [&](const Tuple& yt, const Rational& weight) {
    std::vector<Choices> coords;
    for (std::size_t i = 0; i < m; ++i) coords.push_back(support(i, yt[i]));
    Tuple t(2 * m);
    std::copy(yt.begin(), yt.end(), t.begin() + m);
    std::function<void(std::size_t, const Rational&)> walk = [&](std::size_t i, const Rational& w) {
      if (i == m) {
        out[t] += w;
        return;
      }
      for (const auto& [x, p] : coords[i]) {
        t[i] = x;
        walk(i + 1, w * p);
      }
    };
    walk(0, weight);
  };
  for (std::uint32_t y = 0; y < ny; ++y) {
    if (g2_weight_[y] > 0) expand(Tuple(m, y), g2_weight_[y]);
  }
  for (const auto& [yt, w] : y_coupling_.mass()) {
    if (distinct_count(yt) > 1) expand(yt, w);
  }
  return out;
}

Rational y_union_mass(const SimulCoupling& coupling) {
  Rational total = coupling.c_xy();
  for (std::size_t y = 0; y < coupling.sources().front().y_size(); ++y) {
    total += coupling.tied_residual_weight(y);
  }
  for (const auto& [yt, w] : coupling.y_coupling().mass()) {
    if (distinct_count(yt) > 1) total += w * static_cast<long>(distinct_count(yt));
  }
  return total;
}

Rational f_quantity(const SimulCoupling& coupling) {
  const auto m = coupling.arity();
  const auto nx = coupling.sources().front().x_size();
  const auto ny = coupling.sources().front().y_size();
  auto agree = [&](const Tuple& yt) {
    Rational total = 0;
    for (std::size_t x = 0; x < nx; ++x) {
      Rational p = 1;
      for (std::size_t i = 0; i < m && p != 0; ++i) p *= coupling.residual(i, x, yt[i]);
      total += p;
    }
    return total;
  };
  Rational total = coupling.c_xy();
  for (std::uint32_t y = 0; y < ny; ++y) {
    if (coupling.tied_residual_weight(y) > 0) {
      total += coupling.tied_residual_weight(y) * agree(Tuple(m, y));
    }
  }
  for (const auto& [yt, w] : coupling.y_coupling().mass()) {
    const auto d = distinct_count(yt);
    if (d > 1) total += w * static_cast<long>(d) * agree(yt);
  }
  return total;
}

TupleMass marginalize_x(const TupleMass& materialized, std::size_t arity) {
  TupleMass out;
  for (const auto& [t, w] : materialized) {
    if (t.size() != 2 * arity) throw ValidationError("tuple length does not match 2 * arity");
    out[Tuple(t.begin() + static_cast<std::ptrdiff_t>(arity), t.end())] += w;
  }
  return out;
}

}  // namespace leakbound
