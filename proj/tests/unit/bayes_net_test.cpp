#include <gtest/gtest.h>

#include <algorithm>

#include "generators.hpp"
#include "leakbound/bayes_net.hpp"
#include "leakbound/error.hpp"
#include "leakbound/measures.hpp"
#include "leakbound/network_io.hpp"
#include "oracles.hpp"

namespace leakbound {
namespace {

using testing::Rng;

const std::string kFixtures = LEAKBOUND_FIXTURE_DIR;

std::vector<std::vector<Rational>> rows_of(const DiscreteChannel& c) {
  std::vector<std::vector<Rational>> out;
  for (std::size_t x = 0; x < c.input_size(); ++x) out.emplace_back(c.row(x).begin(), c.row(x).end());
  return out;
}

std::vector<std::size_t> indices(const BayesNet& net, const std::vector<std::string>& ids) {
  std::vector<std::size_t> out;
  for (const auto& id : ids) out.push_back(net.index_of(id));
  return out;
}

bool has_kind(const std::vector<Violation>& v, const std::string& kind) {
  return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.kind == kind; });
}

TEST(Validate, ChainIsClean) { EXPECT_TRUE(validate(testing::binary_chain(Rational(1, 4), Rational(1, 4))).empty()); }

TEST(Validate, BadRowNamesNodeAndRow) {
  const auto spec = load_network(kFixtures + "/invalid/bad_row.json");
  const auto v = validate(spec);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, "stochasticity");
  ASSERT_TRUE(v[0].row.has_value());
  EXPECT_THROW(BayesNet{spec}, ValidationError);
}

TEST(Validate, CycleIsReported) {
  const auto spec = load_network(kFixtures + "/invalid/cyclic.json");
  const auto v = validate(spec);
  ASSERT_TRUE(has_kind(v, "acyclicity"));
  const auto it = std::find_if(v.begin(), v.end(), [](const Violation& x) { return x.kind == "acyclicity"; });
  EXPECT_TRUE(it->message.find("A -> B -> A") != std::string::npos ||
              it->message.find("B -> A -> B") != std::string::npos)
      << it->message;
  EXPECT_THROW(topological_sort(spec), ValidationError);
}

TEST(Validate, StructuralProblems) {
  auto spec = testing::binary_chain(Rational(1, 4), Rational(1, 4));
  auto unknown = spec;
  unknown.nodes[2].parents = {"Q"};
  EXPECT_TRUE(has_kind(validate(unknown), "reference"));

  auto arity = spec;
  arity.nodes[2].cpt.pop_back();
  EXPECT_TRUE(has_kind(validate(arity), "arity"));

  auto wide = spec;
  wide.nodes[1].cpt[0].push_back(Rational(0));
  EXPECT_TRUE(has_kind(validate(wide), "arity"));

  auto alpha = spec;
  alpha.nodes[1].alphabet = {"0", "0"};
  EXPECT_TRUE(has_kind(validate(alpha), "alphabet"));

  auto negative = spec;
  negative.nodes[1].cpt[0] = {Rational(3, 2), Rational(-1, 2)};
  EXPECT_TRUE(has_kind(validate(negative), "stochasticity"));

  auto dup = spec;
  dup.nodes[2].id = "Y1";
  EXPECT_TRUE(has_kind(validate(dup), "reference"));

  auto missing_source = spec;
  missing_source.source = "W";
  EXPECT_TRUE(has_kind(validate(missing_source), "reference"));
}

TEST(TopologicalSort, TiesBrokenById) {
  NetworkSpec spec;
  spec.source = "X";
  spec.nodes.push_back({"X", numbered_alphabet(2), {}, {}});
  const auto rows = testing::symmetric_rows(2, Rational(1, 4));
  spec.nodes.push_back({"D", numbered_alphabet(2), {"B", "C"}, {rows[0], rows[1], rows[0], rows[1]}});
  spec.nodes.push_back({"C", numbered_alphabet(2), {"X"}, rows});
  spec.nodes.push_back({"B", numbered_alphabet(2), {"X"}, rows});
  spec.nodes.push_back({"E", numbered_alphabet(2), {}, {{Rational(1, 2), Rational(1, 2)}}});
  EXPECT_EQ(topological_sort(spec), (std::vector<std::string>{"E", "X", "B", "C", "D"}));
  const BayesNet net(spec);
  EXPECT_TRUE(net.has_path(net.index_of("X"), net.index_of("D")));
  EXPECT_FALSE(net.has_path(net.index_of("D"), net.index_of("X")));
  EXPECT_FALSE(net.has_path(net.index_of("B"), net.index_of("C")));
}

TEST(TopologicalSort, Chain) {
  EXPECT_EQ(topological_sort(testing::binary_chain(Rational(1, 4), Rational(1, 4))),
            (std::vector<std::string>{"X", "Y1", "Y2"}));
}

TEST(JointDistribution, ChainGivenSource) {
  const BayesNet net(testing::binary_chain(Rational(1, 4), Rational(1, 3)));
  const auto j = joint_distribution(net, net.source(), 0);
  ASSERT_EQ(j.size(), 4u);
  EXPECT_EQ(j[0], Rational(3, 4) * Rational(2, 3));
  EXPECT_EQ(j[1], Rational(3, 4) * Rational(1, 3));
  EXPECT_EQ(j[2], Rational(1, 4) * Rational(1, 3));
  EXPECT_EQ(j[3], Rational(1, 4) * Rational(2, 3));
}

TEST(Composite, ChainMatchesConvolution) {
  for (const auto& d1 : {Rational(0), Rational(1, 4), Rational(1, 3)}) {
    for (const auto& d2 : {Rational(1, 8), Rational(1, 2)}) {
      const BayesNet net(testing::binary_chain(d1, d2));
      const std::vector<std::size_t> t{net.index_of("Y2")};
      const auto c = composite_channel(net, net.source(), t);
      const auto e = testing::binary_convolution(d1, d2);
      EXPECT_EQ(c.at(0, 1), e);
      EXPECT_EQ(c.at(1, 0), e);
      EXPECT_EQ(tau_max(c), 2 * std::max(e, 1 - e));
    }
  }
}

TEST(Composite, MatchesBruteForceOnFixtures) {
  for (const auto* name : {"chain", "example1", "example2", "mixed", "four_input", "erasure"}) {
    const auto spec = load_network(kFixtures + "/networks/" + name + ".json");
    const BayesNet net(spec);
    std::vector<std::string> others;
    for (const auto& n : spec.nodes) {
      if (n.id != spec.source) others.push_back(n.id);
    }
    const auto c = composite_channel(net, net.source(), indices(net, others));
    EXPECT_EQ(rows_of(c), testing::brute_force_channel(spec, others)) << name;
    std::vector<std::string> last{others.back()};
    EXPECT_EQ(rows_of(composite_channel(net, net.source(), indices(net, last))),
              testing::brute_force_channel(spec, last))
        << name;
  }
}

TEST(Composite, RandomNetworksMatchBruteForce) {
  Rng rng(51);
  for (int trial = 0; trial < 150; ++trial) {
    const auto spec = testing::random_network(rng, rng.uniform(2, 5), 3, 2);
    const BayesNet net(spec);
    std::vector<std::string> targets;
    for (std::size_t v = 1; v < spec.nodes.size(); ++v) {
      if (rng.coin()) targets.push_back(spec.nodes[v].id);
    }
    if (targets.empty()) targets.push_back(spec.nodes.back().id);
    std::shuffle(targets.begin(), targets.end(), std::mt19937_64(trial));
    EXPECT_EQ(rows_of(composite_channel(net, net.source(), indices(net, targets))),
              testing::brute_force_channel(spec, targets));
  }
}

TEST(Composite, MarginalConsistencyAndDataProcessing) {
  Rng rng(52);
  for (int trial = 0; trial < 100; ++trial) {
    const auto spec = testing::random_network(rng, rng.uniform(3, 5), 3, 2);
    const BayesNet net(spec);
    const auto a = net.size() - 2;
    const auto b = net.size() - 1;
    const std::vector<std::size_t> ab{a, b};
    const std::vector<std::size_t> only_a{a};
    const auto both = composite_channel(net, net.source(), ab);
    const auto single = composite_channel(net, net.source(), only_a);
    const auto kb = net.alphabet(b).size();
    for (std::size_t x = 0; x < both.input_size(); ++x) {
      for (std::size_t va = 0; va < net.alphabet(a).size(); ++va) {
        Rational s = 0;
        for (std::size_t vb = 0; vb < kb; ++vb) s += both.at(x, va * kb + vb);
        EXPECT_EQ(s, single.at(x, va));
      }
    }
    EXPECT_GE(tau_max(both), tau_max(single));
    // A node's leakage never exceeds that of its full parent set.
    const auto& pa = net.parents(b);
    if (std::find(pa.begin(), pa.end(), net.source()) == pa.end()) {
      EXPECT_LE(tau_max(composite_channel(net, net.source(), std::vector<std::size_t>{b})),
                tau_max(composite_channel(net, net.source(), pa)));
    }
  }
}

TEST(Composite, TargetOrderOnlyPermutesColumns) {
  Rng rng(53);
  for (int trial = 0; trial < 50; ++trial) {
    const BayesNet net(testing::random_network(rng, 4, 3, 2));
    const std::vector<std::size_t> fwd{1, 3};
    const std::vector<std::size_t> rev{3, 1};
    const auto a = composite_channel(net, net.source(), fwd);
    const auto b = composite_channel(net, net.source(), rev);
    EXPECT_EQ(tau_max(a), tau_max(b));
    EXPECT_EQ(tau_max2(a), tau_max2(b));
    EXPECT_EQ(doeblin(a), doeblin(b));
  }
}

TEST(Composite, CapacityGuard) {
  const BayesNet net(load_network(kFixtures + "/networks/mixed.json"));
  const auto t = indices(net, {"A", "B", "C", "D"});
  EXPECT_THROW(composite_channel(net, net.source(), t, InferenceOptions{4}), CapacityError);
}

TEST(ConditionalJoints, MatchCompositeChannel) {
  const BayesNet net(load_network(kFixtures + "/networks/example1.json"));
  const auto z = indices(net, {"Z"});
  const auto v = indices(net, {"Y1"});
  const auto joints = conditional_joints(net, net.source(), z, v);
  const auto zv = composite_channel(net, net.source(), indices(net, {"Z", "Y1"}));
  ASSERT_EQ(joints.size(), net.alphabet(net.source()).size());
  for (std::size_t x = 0; x < joints.size(); ++x) {
    for (std::size_t i = 0; i < joints[x].x_size(); ++i) {
      for (std::size_t j = 0; j < joints[x].y_size(); ++j) {
        EXPECT_EQ(joints[x].at(i, j), zv.at(x, i * joints[x].y_size() + j));
      }
    }
  }
}

TEST(ProductAlphabet, LabelsJoinedLexicographically) {
  const BayesNet net(load_network(kFixtures + "/networks/mixed.json"));
  const auto a = product_alphabet(net, indices(net, {"A", "B"}));
  ASSERT_EQ(a.size(), 6u);
  EXPECT_EQ(a.front(), "0,0");
  EXPECT_EQ(a[1], "0,1");
  EXPECT_EQ(a.back(), "1,2");
  EXPECT_EQ(net.label(indices(net, {"A", "B"})), "A+B");
}

}  // namespace
}  // namespace leakbound
