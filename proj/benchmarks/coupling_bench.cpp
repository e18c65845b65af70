#include <benchmark/benchmark.h>

#include "leakbound/constructions.hpp"
#include "leakbound/coupling_lp.hpp"
#include "leakbound/measures.hpp"
#include "leakbound/simultaneous.hpp"

namespace {

using namespace leakbound;

std::vector<Pmf> symmetric_family(std::size_t q, std::size_t m) {
  auto rows = make_q_ary_symmetric(q, Rational(1, 3)).rows_as_pmfs();
  rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(m), rows.end());
  return rows;
}

void BM_MinUnionLp(benchmark::State& state) {
  const auto fam = symmetric_family(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(min_union_coupling(fam).optimal_value);
}
BENCHMARK(BM_MinUnionLp)->Args({3, 2})->Args({3, 3})->Args({4, 3})->Args({4, 4});

void BM_Layered(benchmark::State& state) {
  const auto fam = symmetric_family(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(union_mass(layered_coupling(fam)));
}
BENCHMARK(BM_Layered)->Arg(3)->Arg(5)->Arg(8);

void BM_N4(benchmark::State& state) {
  const std::vector<Pmf> fam{Pmf(numbered_alphabet(4), {0, Rational(1, 4), Rational(3, 4), 0}),
                             Pmf(numbered_alphabet(4), {Rational(1, 6), Rational(1, 6), Rational(1, 6), Rational(1, 2)}),
                             Pmf(numbered_alphabet(4), {Rational(1, 2), Rational(1, 2), 0, 0}),
                             Pmf(numbered_alphabet(4), {0, Rational(2, 3), 0, Rational(1, 3)})};
  for (auto _ : state) benchmark::DoNotOptimize(union_mass(build_n4_coupling(fam)));
}
BENCHMARK(BM_N4);

void BM_Simultaneous(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto ch = make_q_ary_symmetric(3, Rational(1, 4));
  std::vector<JointPmf> joints;
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<Rational> mass;
    for (const auto& v : ch.row(i)) {
      mass.push_back(v / 2);
    }
    for (const auto& v : ch.row(i)) {
      mass.push_back(v / 2);
    }
    joints.emplace_back(numbered_alphabet(2), numbered_alphabet(3), mass);
  }
  for (auto _ : state) benchmark::DoNotOptimize(f_quantity(build_simultaneous_coupling(joints)));
}
BENCHMARK(BM_Simultaneous)->Arg(2)->Arg(3);

}  // namespace
