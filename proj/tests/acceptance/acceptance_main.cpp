// Acceptance suite. Usage: leakbound_acceptance [criterion]
// Prints one PASS/FAIL line per criterion; exit status is nonzero if any
// selected criterion fails. All comparisons are exact rational equalities
// or inequalities: the pinned tolerance is zero.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "commands.hpp"
#include "generators.hpp"
#include "leakbound/bounds.hpp"
#include "leakbound/constructions.hpp"
#include "leakbound/coupling_lp.hpp"
#include "leakbound/measures.hpp"
#include "leakbound/network_io.hpp"
#include "leakbound/simultaneous.hpp"
#include "oracles.hpp"

namespace {

using namespace leakbound;
using testing::Rng;

// Exact arithmetic throughout; kept explicit so the tolerance is on record.
const Rational kTolerance = 0;

bool exact_eq(const Rational& a, const Rational& b) { return abs(a - b) <= kTolerance; }
bool exact_le(const Rational& a, const Rational& b) { return a <= b + kTolerance; }

const std::string kFixtures = LEAKBOUND_FIXTURE_DIR;

struct Outcome {
  bool pass = true;
  std::string detail;
  std::string first_failure;

  void fail(const std::string& why) {
    if (pass) first_failure = why;
    pass = false;
  }
};

std::vector<std::size_t> ids(const BayesNet& net, const std::vector<std::string>& names) {
  std::vector<std::size_t> out;
  for (const auto& n : names) out.push_back(net.index_of(n));
  return out;
}

// 1. Minimal union coupling equals tau_max below the threshold; strictly
// above it for three PMFs past the threshold.
Outcome criterion_1() {
  Outcome o;
  Rng rng(1001);
  int equal_cases = 0;
  int strict_cases = 0;
  while (equal_cases < 1000) {
    const auto m = rng.uniform(2, 4);
    const auto k = rng.uniform(2, 5);
    std::vector<Pmf> fam;
    for (std::size_t i = 0; i < m; ++i) {
      fam.emplace_back(numbered_alphabet(k), rng.coin() ? testing::noisy_point(rng, k)
                                                        : testing::random_masses(rng, k));
    }
    const auto ch = DiscreteChannel::from_family(fam);
    if (tau_max2(ch) > 1) continue;
    ++equal_cases;
    const auto r = min_union_coupling(fam);
    if (!exact_eq(r.optimal_value, tau_max(ch))) {
      o.fail("optimum " + to_string(r.optimal_value) + " != tau_max " + to_string(tau_max(ch)));
    }
  }
  while (strict_cases < 200) {
    const auto fam = testing::random_family(rng, 3, rng.uniform(2, 5));
    const auto ch = DiscreteChannel::from_family(fam);
    if (tau_max2(ch) <= 1) continue;
    ++strict_cases;
    const auto r = min_union_coupling(fam);
    if (!(r.optimal_value > tau_max(ch))) {
      o.fail("m=3 tau_max2=" + to_string(tau_max2(ch)) + " optimum not above tau_max");
    }
  }
  o.detail = std::to_string(equal_cases) + " families at tau_max2<=1, " + std::to_string(strict_cases) +
             " triples above";
  return o;
}

// Total weight of the four-PMF mixture recomputed from its ingredients.
Rational mixture_weight_total(const N4Ingredients& ing, const MixtureWeights& w) {
  Rational total = ing.tau;
  for (unsigned i = 0; i < 4; ++i) total += ing.tau_subset[15u & ~(1u << i)] - ing.tau;
  for (const auto& b : w.beta) total += b;
  for (const auto& a : w.alpha) total += a;
  return total + w.gamma;
}

bool marginals_exact(const Coupling& c, const std::vector<Pmf>& fam) {
  for (std::size_t i = 0; i < fam.size(); ++i) {
    std::vector<Rational> got(fam[i].size(), Rational(0));
    for (const auto& [t, w] : c.mass()) got[t[i]] += w;
    for (std::size_t y = 0; y < got.size(); ++y) {
      if (!exact_eq(got[y], fam[i][y])) return false;
    }
  }
  return true;
}

Outcome check_n4(const std::vector<Pmf>& fam, const N4Condition& cond) {
  Outcome o;
  const auto c = build_n4_coupling(fam);
  if (!marginals_exact(c, fam)) o.fail("marginal mismatch");
  if (!exact_eq(union_mass(c), cond.ingredients.tau_max)) o.fail("union != tau_max");
  if (!verify_intersection_property(c, fam).holds) o.fail("intersection property");
  const auto w = choose_abc(cond.ingredients);
  if (!exact_eq(mixture_weight_total(cond.ingredients, w), 1)) o.fail("weights do not sum to 1");
  return o;
}

// 2. Four-PMF construction under the relaxed condition.
Outcome criterion_2() {
  Outcome o;
  const std::vector<Pmf> frozen{
      Pmf(numbered_alphabet(4), {0, Rational(1, 4), Rational(3, 4), 0}),
      Pmf(numbered_alphabet(4), {Rational(1, 6), Rational(1, 6), Rational(1, 6), Rational(1, 2)}),
      Pmf(numbered_alphabet(4), {Rational(1, 2), Rational(1, 2), 0, 0}),
      Pmf(numbered_alphabet(4), {0, Rational(2, 3), 0, Rational(1, 3)})};
  const auto fc = n4_condition(frozen);
  if (!fc.holds || !(fc.ingredients.tau_max2 > 1) || !exact_eq(fc.ingredients.tau_max, Rational(29, 12))) {
    o.fail("frozen instance changed");
  } else {
    const auto r = check_n4(frozen, fc);
    if (!r.pass) o.fail("frozen: " + r.first_failure);
  }

  Rng rng(2002);
  int checked = 0;
  int above = 0;
  while (checked < 1000) {
    const auto k = rng.uniform(2, 5);
    std::vector<Pmf> fam;
    for (int i = 0; i < 4; ++i) {
      fam.emplace_back(numbered_alphabet(k), rng.coin(0.7) ? testing::noisy_point(rng, k)
                                                           : testing::random_masses(rng, k));
    }
    const auto cond = n4_condition(fam);
    if (!cond.holds) continue;
    ++checked;
    if (cond.ingredients.tau_max2 > 1) ++above;
    const auto r = check_n4(fam, cond);
    if (!r.pass) o.fail(r.first_failure);
  }
  o.detail = std::to_string(checked) + " families (" + std::to_string(above) +
             " with tau_max2>1) plus the frozen instance";
  if (above == 0) o.fail("no instance above the threshold was sampled");
  return o;
}

// 3. Simultaneous coupling.
Outcome criterion_3() {
  Outcome o;
  Rng rng(3003);
  int checked = 0;
  while (checked < 400) {
    const auto m = rng.uniform(2, 4);
    const auto nx = rng.uniform(1, 3);
    const auto ny = rng.uniform(2, 3);
    const auto joints = testing::random_joints(rng, m, nx, ny);
    std::vector<Pmf> ys;
    for (const auto& j : joints) ys.push_back(j.y_marginal());
    const auto ych = DiscreteChannel::from_family(ys);
    if (tau_max2(ych) > 1) continue;
    ++checked;
    const auto c = build_simultaneous_coupling(joints);
    const auto tuples = c.materialize();
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<Rational> got(nx * ny, Rational(0));
      for (const auto& [t, w] : tuples) got[t[i] * ny + t[m + i]] += w;
      for (std::size_t x = 0; x < nx; ++x) {
        for (std::size_t y = 0; y < ny; ++y) {
          if (!exact_eq(got[x * ny + y], joints[i].at(x, y))) o.fail("joint marginal mismatch");
        }
      }
    }
    if (!exact_eq(y_union_mass(c), tau_max(ych))) o.fail("y union != tau_max");
    if (marginalize_x(tuples, m) != c.y_coupling().mass()) o.fail("Y part differs from ingredient");
  }
  o.detail = std::to_string(checked) + " joint families";
  return o;
}

// 4. Soundness and dominance of the recursive bounds.
Outcome criterion_4() {
  Outcome o;
  Rng rng(4004);
  int accepted = 0;
  int strict_checked = 0;
  int attempts = 0;
  while (accepted < 500 && attempts < 20000) {
    ++attempts;
    const auto spec = testing::random_network(rng, rng.uniform(3, 5), 4, 2);
    const BayesNet net(spec);
    std::vector<std::string> names;
    for (std::size_t v = 1; v < spec.nodes.size(); ++v) {
      if (rng.coin(0.6)) names.push_back(spec.nodes[v].id);
    }
    if (names.size() < 2) continue;
    std::size_t states = 1;
    for (std::size_t v = 0; v < spec.nodes.size(); ++v) states *= spec.nodes[v].alphabet.size();
    if (states > 2000) continue;
    const auto targets = ids(net, names);
    RecursiveBound t2, c1;
    try {
      t2 = recursive_bound(net, net.source(), targets, BoundMethod::theorem2);
      c1 = recursive_bound(net, net.source(), targets, BoundMethod::corollary1);
    } catch (const PreconditionError&) {
      continue;
    }
    ++accepted;
    const auto truth = testing::column_max_sum(testing::brute_force_channel(spec, names));
    const auto baseline = subadditivity_baseline(net, net.source(), targets);
    if (!(exact_le(truth, t2.value) && exact_le(t2.value, c1.value) && exact_le(c1.value, baseline))) {
      o.fail("dominance chain broken: exact " + to_string(truth) + ", theorem2 " + to_string(t2.value) +
             ", corollary1 " + to_string(c1.value) + ", baseline " + to_string(baseline));
    }
    // Single step at the top of the peel with the exact inner exponent.
    const auto& top = c1.trace.back();
    const auto a = top.step.tau_max_u;
    const auto step_base = a * top.step.tau_max_v;
    if (top.step.correction > 0) {
      ++strict_checked;
      if (!(top.step.value < step_base)) o.fail("no strict improvement with positive Doeblin term");
    }
    bool any_positive = false;
    for (const auto& s : c1.trace) any_positive = any_positive || s.step.correction > 0;
    if (any_positive && !(c1.value < baseline)) o.fail("recursive corollary1 not below baseline");
  }
  o.detail = std::to_string(accepted) + " networks with hypotheses holding (" + std::to_string(attempts) +
             " drawn), " + std::to_string(strict_checked) + " strictness checks";
  if (accepted < 500) o.fail("only " + std::to_string(accepted) + " admissible networks sampled");
  return o;
}

// 5. Binary symmetric chain in closed form.
Outcome criterion_5() {
  Outcome o;
  const std::vector<Rational> grid{Rational(0), Rational(1, 8), Rational(1, 4), Rational(3, 8), Rational(1, 2)};
  int cells = 0;
  for (const auto& d1 : grid) {
    for (const auto& d2 : grid) {
      ++cells;
      const auto spec = testing::binary_chain(d1, d2);
      const BayesNet net(spec);
      const auto conv = testing::binary_convolution(d1, d2);
      const auto y2 = composite_channel(net, net.source(), ids(net, {"Y2"}));
      if (!exact_eq(tau_max(y2), 2 * (1 - conv))) o.fail("tau_max(Y2|X) != 2(1 - d1*d2)");
      if (!exact_eq(tau_max(y2), testing::column_max_sum(testing::brute_force_channel(spec, {"Y2"})))) {
        o.fail("composite disagrees with enumeration");
      }
      const auto pair_exact = testing::column_max_sum(testing::brute_force_channel(spec, {"Y1", "Y2"}));
      const auto c = corollary1_bound(net, net.source(), ids(net, {"Y1"}), net.index_of("Y2"));
      const auto poly = 4 - 6 * d1 - 4 * d2 + 8 * d1 * d2;
      if (!exact_eq(c.value, poly)) o.fail("corollary1 != polynomial at " + to_string(d1) + "," + to_string(d2));
      if (!exact_le(pair_exact, c.value)) o.fail("bound below exact");
      if (d1 == Rational(1, 2) && !exact_eq(c.value, pair_exact)) o.fail("no equality at d1 = 1/2");
    }
  }
  o.detail = std::to_string(cells) + " grid cells";
  return o;
}

// 6. Measure identities.
Outcome criterion_6() {
  Outcome o;
  Rng rng(6006);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto ch = DiscreteChannel::from_family(testing::random_family(rng, 4, rng.uniform(2, 5)));
    if (!exact_eq(tau_max2(ch), tau_pair(ch) - 2 * tau_trip(ch) + 3 * doeblin(ch))) o.fail("max-min identity");
  }
  std::vector<std::string> mismatches;
  for (std::size_t q = 2; q <= 5; ++q) {
    for (int tenth = 0; tenth <= 10; ++tenth) {
      const Rational delta(tenth, 10);
      const bool lhs = tau_max2(make_q_ary_symmetric(q, delta)) <= 1;
      const bool rhs = delta <= 1 - Rational(1, static_cast<long>(q));
      if (lhs != rhs) mismatches.push_back("q=" + std::to_string(q) + " delta=" + to_string(delta));
    }
  }
  if (!mismatches.empty()) {
    std::string list;
    for (const auto& m : mismatches) list += (list.empty() ? "" : ", ") + m;
    o.fail("symmetric equivalence fails at " + list + " (tau_max2 = 2 min(delta, 1-delta) <= 1 for q=2)");
  }
  for (std::size_t q = 2; q <= 5; ++q) {
    for (int k = 0; k <= 12; ++k) {
      const Rational eps(k, 12);
      if (!exact_eq(tau_max2(make_erasure(q, eps)), eps)) o.fail("erasure tau_max2 != eps");
    }
  }
  o.detail = "1000 random four-row channels, 44 symmetric grid points, 52 erasure channels";
  return o;
}

// 7. Network files round-trip and the CLI bound command succeeds on each.
Outcome criterion_7() {
  Outcome o;
  int files = 0;
  for (const auto& entry : std::filesystem::directory_iterator(kFixtures + "/networks")) {
    ++files;
    const auto name = entry.path().filename().string();
    const auto spec = load_network(entry.path());
    const auto text = write_network(spec);
    const auto again = parse_network(text);
    if (!(again == spec) || write_network(again) != text) o.fail(name + " is not a round-trip fixed point");
    cli::BoundArgs args;
    args.path = entry.path();
    args.compare_exact = true;
    std::ostringstream out, err;
    const int code = cli::cmd_bound(args, out, err);
    if (code != 0) o.fail(name + ": bound exited " + std::to_string(code) + " " + err.str());
  }
  o.detail = std::to_string(files) + " network files";
  if (files == 0) o.fail("no fixtures found");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria{criterion_1, criterion_2, criterion_3, criterion_4,
                                                      criterion_5, criterion_6, criterion_7};
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  if (selected.empty()) {
    for (int i = 1; i <= 7; ++i) selected.insert(i);
  }
  bool all = true;
  for (const int n : selected) {
    if (n < 1 || n > 7) {
      std::cerr << "unknown criterion " << n << "\n";
      return 2;
    }
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[n - 1]();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << "criterion " << n << ": " << (o.pass ? "PASS" : "FAIL") << " (" << o.detail;
    if (!o.pass) std::cout << "; first failure: " << o.first_failure;
    std::cout << "; " << secs << " s)\n";
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
