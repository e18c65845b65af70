#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

namespace cli = leakbound::cli;

namespace {

std::vector<std::string> split_ids(const std::string& text) {
  std::vector<std::string> out;
  std::string current;
  for (const char c : text) {
    if (c == ',') {
      if (!current.empty()) out.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  if (!current.empty()) out.push_back(current);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maximal leakage measures, minimal couplings and leakage bounds over Bayesian networks"};
  app.require_subcommand(1);
  std::size_t max_states = leakbound::kDefaultMaxStates;
  app.add_option("--max-states", max_states, "Cap on enumerated joint states")->capture_default_str();

  std::string path;
  int status = 0;

  auto* validate = app.add_subcommand("validate", "Parse and validate a network file");
  validate->add_option("network", path, "Network file")->required();
  validate->callback([&] { status = cli::cmd_validate(path, std::cout, std::cerr); });

  cli::MeasuresArgs measures;
  std::string node;
  auto* measures_cmd = app.add_subcommand("measures", "Leakage measures of CPT and composite channels");
  measures_cmd->add_option("network", path, "Network file")->required();
  auto* node_opt = measures_cmd->add_option("--node", node, "Only this node");
  measures_cmd->callback([&] {
    measures.path = path;
    measures.max_states = max_states;
    if (node_opt->count()) measures.node = node;
    status = cli::cmd_measures(measures, std::cout, std::cerr);
  });

  cli::BoundArgs bound;
  std::string source, targets;
  auto* bound_cmd = app.add_subcommand("bound", "Evaluate leakage bounds for a target set");
  bound_cmd->add_option("network", path, "Network file")->required();
  auto* source_opt = bound_cmd->add_option("--source", source, "Source node (default: the file's source)");
  bound_cmd->add_option("--targets", targets, "Comma-separated target nodes (default: all others)");
  bound_cmd->add_option("--method", bound.method, "theorem2, corollary1 or recursive")
      ->check(CLI::IsMember({"theorem2", "corollary1", "recursive"}))
      ->capture_default_str();
  bound_cmd->add_flag("--compare-exact", bound.compare_exact, "Add a soundness column; fail on violations");
  bound_cmd->add_option("--format", bound.format, "csv, summary or both")
      ->check(CLI::IsMember({"csv", "summary", "both"}))
      ->capture_default_str();
  bound_cmd->callback([&] {
    bound.path = path;
    bound.max_states = max_states;
    if (source_opt->count()) bound.source = source;
    bound.targets = split_ids(targets);
    status = cli::cmd_bound(bound, std::cout, std::cerr);
  });

  cli::CoupleArgs couple;
  bool no_dump = false;
  auto* couple_cmd = app.add_subcommand("couple", "Build and verify a coupling of a PMF family");
  couple_cmd->add_option("family", path, "Family file")->required();
  couple_cmd->add_option("--mode", couple.mode, "lp, n4 or simul")
      ->check(CLI::IsMember({"lp", "n4", "simul"}))
      ->capture_default_str();
  couple_cmd->add_flag("--no-dump", no_dump, "Skip the tuple listing");
  couple_cmd->callback([&] {
    couple.path = path;
    couple.max_states = max_states;
    couple.dump = !no_dump;
    status = cli::cmd_couple(couple, std::cout, std::cerr);
  });

  cli::SweepArgs sweep;
  std::string sweep_source, sweep_targets;
  auto* sweep_cmd = app.add_subcommand("sweep", "Evaluate bounds over a parameter range of a template");
  sweep_cmd->add_option("template", path, "Network template file")->required();
  sweep_cmd->add_option("--param", sweep.param, "Variable bound in the template")->capture_default_str();
  sweep_cmd->add_option("--range", sweep.range, "start:stop:step, exact rationals")->required();
  auto* sweep_source_opt = sweep_cmd->add_option("--source", sweep_source, "Source node");
  sweep_cmd->add_option("--targets", sweep_targets, "Comma-separated target nodes");
  sweep_cmd->callback([&] {
    sweep.path = path;
    sweep.max_states = max_states;
    if (sweep_source_opt->count()) sweep.source = sweep_source;
    sweep.targets = split_ids(sweep_targets);
    status = cli::cmd_sweep(sweep, std::cout, std::cerr);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : cli::kInvalid;
  }
  return status;
}
