#include "leakbound/measures.hpp"

#include <algorithm>
#include <functional>

#include "leakbound/error.hpp"

namespace leakbound {
namespace {

// Sum over output columns of some order statistic of the column.
template <typename Pick>
Rational column_sum(const DiscreteChannel& channel, Pick pick) {
  Rational total = 0;
  std::vector<Rational> col;
  for (std::size_t y = 0; y < channel.output_size(); ++y) {
    col = channel.column(y);
    total += pick(col);
  }
  return total;
}

Rational subset_sum(const DiscreteChannel& channel, std::size_t size) {
  const auto n = channel.input_size();
  Rational total = 0;
  std::vector<std::size_t> subset;
  std::function<void(std::size_t)> walk = [&](std::size_t next) {
    if (subset.size() == size) {
      total += tau_subset(channel, subset);
      return;
    }
    for (std::size_t i = next; i < n; ++i) {
      subset.push_back(i);
      walk(i + 1);
      subset.pop_back();
    }
  };
  walk(0);
  return total;
}

void check_probability(const Rational& value, const char* name) {
  if (value < 0 || value > 1) {
    throw ValidationError(std::string(name) + " = " + to_string(value) + " is outside [0, 1]");
  }
}

}  // namespace

Rational tau_max(const DiscreteChannel& channel) {
  return column_sum(channel, [](std::vector<Rational>& col) {
    return *std::max_element(col.begin(), col.end());
  });
}

Rational tau_max2(const DiscreteChannel& channel) {
  if (channel.input_size() < 2) {
    throw PreconditionError("tau_max2 needs at least two rows");
  }
  return column_sum(channel, [](std::vector<Rational>& col) {
    std::partial_sort(col.begin(), col.begin() + 2, col.end(), std::greater<>());
    return col[1];
  });
}

Rational doeblin(const DiscreteChannel& channel) {
  return column_sum(channel, [](std::vector<Rational>& col) {
    return *std::min_element(col.begin(), col.end());
  });
}

Rational tau_subset(const DiscreteChannel& channel, std::span<const std::size_t> subset) {
  if (subset.empty()) throw ValidationError("tau_I needs a non-empty subset");
  for (auto i : subset) {
    if (i >= channel.input_size()) {
      throw ValidationError("subset index " + std::to_string(i) + " out of range");
    }
  }
  Rational total = 0;
  for (std::size_t y = 0; y < channel.output_size(); ++y) {
    Rational m = channel.at(subset[0], y);
    for (auto i : subset.subspan(1)) m = std::min(m, channel.at(i, y));
    total += m;
  }
  return total;
}

Rational tau_pair(const DiscreteChannel& channel) { return subset_sum(channel, 2); }

Rational tau_trip(const DiscreteChannel& channel) { return subset_sum(channel, 3); }

double maximal_leakage(const DiscreteChannel& channel) { return log_of(tau_max(channel)); }

MeasureSet measure_set(const DiscreteChannel& channel) {
  MeasureSet m;
  m.tau = doeblin(channel);
  m.tau_max = tau_max(channel);
  if (channel.input_size() >= 2) m.tau_max2 = tau_max2(channel);
  m.leakage_log = log_of(m.tau_max);
  return m;
}

DiscreteChannel make_q_ary_symmetric(std::size_t q, const Rational& delta) {
  if (q < 2) throw ValidationError("q-ary symmetric channel needs q >= 2");
  check_probability(delta, "crossover probability");
  const Rational off = delta / Rational(static_cast<long>(q - 1));
  std::vector<std::vector<Rational>> rows(q, std::vector<Rational>(q, off));
  for (std::size_t x = 0; x < q; ++x) rows[x][x] = 1 - delta;
  return DiscreteChannel(numbered_alphabet(q), numbered_alphabet(q), std::move(rows));
}

DiscreteChannel make_erasure(std::size_t q, const Rational& eps) {
  if (q < 1) throw ValidationError("erasure channel needs q >= 1");
  check_probability(eps, "erasure probability");
  Alphabet out = numbered_alphabet(q);
  out.push_back("e");
  std::vector<std::vector<Rational>> rows(q, std::vector<Rational>(q + 1, Rational(0)));
  for (std::size_t x = 0; x < q; ++x) {
    rows[x][x] = 1 - eps;
    rows[x][q] = eps;
  }
  return DiscreteChannel(numbered_alphabet(q), std::move(out), std::move(rows));
}

}  // namespace leakbound
