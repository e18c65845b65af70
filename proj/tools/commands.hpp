#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "leakbound/error.hpp"

namespace leakbound::cli {

enum ExitCode : int { kOk = 0, kInvalid = 1, kCapacity = 2, kIo = 3 };

/// Runs `body`, mapping library errors to exit codes and printing them to
/// `err`.
int guarded(const std::function<int()>& body, std::ostream& err);

/// Natural log printed with 12 significant digits.
std::string format_log(double value);

int cmd_validate(const std::filesystem::path& path, std::ostream& out, std::ostream& err);

struct MeasuresArgs {
  std::filesystem::path path;
  std::optional<std::string> node;
  std::size_t max_states = kDefaultMaxStates;
};
int cmd_measures(const MeasuresArgs& args, std::ostream& out, std::ostream& err);

struct BoundArgs {
  std::filesystem::path path;
  std::optional<std::string> source;
  /// Empty means every node other than the source.
  std::vector<std::string> targets;
  /// "theorem2", "corollary1" (single step) or "recursive".
  std::string method = "recursive";
  bool compare_exact = false;
  /// "csv", "summary" or "both".
  std::string format = "both";
  std::size_t max_states = kDefaultMaxStates;
};
int cmd_bound(const BoundArgs& args, std::ostream& out, std::ostream& err);

struct CoupleArgs {
  std::filesystem::path path;
  /// "lp", "n4" or "simul".
  std::string mode = "lp";
  bool dump = true;
  std::size_t max_states = kDefaultMaxStates;
};
int cmd_couple(const CoupleArgs& args, std::ostream& out, std::ostream& err);

struct SweepArgs {
  std::filesystem::path path;
  std::string param = "delta";
  /// "start:stop:step", each an exact rational expression.
  std::string range;
  std::optional<std::string> source;
  std::vector<std::string> targets;
  std::size_t max_states = kDefaultMaxStates;
};
int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err);

}  // namespace leakbound::cli
