#include <gtest/gtest.h>

#include <sstream>

#include "commands.hpp"

namespace leakbound::cli {
namespace {

const std::string kFixtures = LEAKBOUND_FIXTURE_DIR;

struct Run {
  int code;
  std::string out;
  std::string err;
};

template <class F>
Run run(F&& f) {
  std::ostringstream out, err;
  const int code = f(out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

TEST(Cli, ValidateExitCodes) {
  auto ok = run([](auto& o, auto& e) { return cmd_validate(kFixtures + "/networks/chain.json", o, e); });
  EXPECT_EQ(ok.code, kOk);
  auto bad = run([](auto& o, auto& e) { return cmd_validate(kFixtures + "/invalid/bad_row.json", o, e); });
  EXPECT_EQ(bad.code, kInvalid);
  EXPECT_NE((bad.out + bad.err).find("stochasticity"), std::string::npos) << bad.out << bad.err;
  auto missing = run([](auto& o, auto& e) { return cmd_validate("/nonexistent.json", o, e); });
  EXPECT_EQ(missing.code, kIo);
}

TEST(Cli, MeasuresPrintsExactValues) {
  MeasuresArgs args{kFixtures + "/networks/chain.json", std::string("Y2"), kDefaultMaxStates};
  auto r = run([&](auto& o, auto& e) { return cmd_measures(args, o, e); });
  EXPECT_EQ(r.code, kOk);
  EXPECT_NE(r.out.find("tau_max  5/4"), std::string::npos) << r.out;
}

TEST(Cli, BoundCsvRows) {
  BoundArgs args;
  args.path = kFixtures + "/networks/chain.json";
  args.compare_exact = true;
  args.format = "csv";
  auto r = run([&](auto& o, auto& e) { return cmd_bound(args, o, e); });
  EXPECT_EQ(r.code, kOk) << r.err;
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].rfind("node,tau,tau_max,tau_max2,bound_method,bound_value,exact_value,gap,preconditions", 0), 0u);
  EXPECT_NE(rows[1].find("recursive-theorem2,2,3/2,1/2"), std::string::npos) << rows[1];
  EXPECT_NE(rows[3].find("subadditivity,9/4,3/2,3/4"), std::string::npos) << rows[3];
}

TEST(Cli, BoundFailingHypothesesStillReportBaseline) {
  BoundArgs args;
  args.path = kFixtures + "/networks/failing.json";
  args.compare_exact = true;
  auto r = run([&](auto& o, auto& e) { return cmd_bound(args, o, e); });
  EXPECT_EQ(r.code, kOk) << r.err;
  EXPECT_NE(r.out.find("3/2"), std::string::npos);
  EXPECT_NE(r.out.find("subadditivity"), std::string::npos);
}

TEST(Cli, BoundSingleStepReportsInapplicable) {
  BoundArgs args;
  args.path = kFixtures + "/networks/failing.json";
  args.method = "theorem2";
  args.format = "csv";
  auto r = run([&](auto& o, auto& e) { return cmd_bound(args, o, e); });
  EXPECT_EQ(r.code, kOk);
  EXPECT_NE(r.out.find("theorem2,inapplicable"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("=3/2 FAIL"), std::string::npos) << r.out;
}

TEST(Cli, BoundCapacity) {
  BoundArgs args;
  args.path = kFixtures + "/networks/mixed.json";
  args.max_states = 3;
  auto r = run([&](auto& o, auto& e) { return cmd_bound(args, o, e); });
  EXPECT_EQ(r.code, kCapacity);
}

TEST(Cli, BoundExampleShapes) {
  BoundArgs args;
  args.path = kFixtures + "/networks/example1.json";
  args.format = "summary";
  auto r = run([&](auto& o, auto& e) { return cmd_bound(args, o, e); });
  EXPECT_EQ(r.code, kOk) << r.err;
  EXPECT_NE(r.out.find("chain_bound"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("65/32"), std::string::npos) << r.out;
  args.path = kFixtures + "/networks/example2.json";
  r = run([&](auto& o, auto& e) { return cmd_bound(args, o, e); });
  EXPECT_EQ(r.code, kOk) << r.err;
  EXPECT_NE(r.out.find("25/8"), std::string::npos) << r.out;
}

TEST(Cli, CoupleModes) {
  CoupleArgs lp{kFixtures + "/families/pmfs_triple.json", "lp", true, kDefaultMaxStates};
  auto r = run([&](auto& o, auto& e) { return cmd_couple(lp, o, e); });
  EXPECT_EQ(r.code, kOk) << r.err;
  EXPECT_NE(r.out.find("optimum: 2"), std::string::npos) << r.out;

  CoupleArgs n4{kFixtures + "/families/pmfs_n4_regression.json", "n4", false, kDefaultMaxStates};
  r = run([&](auto& o, auto& e) { return cmd_couple(n4, o, e); });
  EXPECT_EQ(r.code, kOk) << r.err;
  EXPECT_NE(r.out.find("29/12"), std::string::npos) << r.out;

  CoupleArgs bad_n4{kFixtures + "/families/pmfs_triple.json", "n4", false, kDefaultMaxStates};
  EXPECT_EQ(run([&](auto& o, auto& e) { return cmd_couple(bad_n4, o, e); }).code, kInvalid);

  CoupleArgs simul{kFixtures + "/families/joints_pair.json", "simul", true, kDefaultMaxStates};
  r = run([&](auto& o, auto& e) { return cmd_couple(simul, o, e); });
  EXPECT_EQ(r.code, kOk) << r.err;
  EXPECT_NE(r.out.find("marginals OK"), std::string::npos) << r.out;
}

TEST(Cli, SweepRows) {
  SweepArgs args;
  args.path = kFixtures + "/templates/chain_template.json";
  args.range = "0:1/2:1/4";
  auto r = run([&](auto& o, auto& e) { return cmd_sweep(args, o, e); });
  EXPECT_EQ(r.code, kOk) << r.err;
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0], "delta,exact,theorem2,corollary1,baseline,sound");
  EXPECT_EQ(rows[1], "0,2,4,4,4,OK");
  EXPECT_EQ(rows[2], "1/4,3/2,2,2,9/4,OK");
  EXPECT_EQ(rows[3], "1/2,1,1,1,1,OK");
}

TEST(Cli, SweepRejectsBadRange) {
  SweepArgs args;
  args.path = kFixtures + "/templates/chain_template.json";
  args.range = "0:1/2";
  EXPECT_EQ(run([&](auto& o, auto& e) { return cmd_sweep(args, o, e); }).code, kInvalid);
}

TEST(Cli, FormatLog) { EXPECT_EQ(format_log(0.0), "0"); }

}  // namespace
}  // namespace leakbound::cli
