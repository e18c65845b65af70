#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "leakbound/bayes_net.hpp"
#include "leakbound/pmf.hpp"
#include "leakbound/rational.hpp"
#include "leakbound/simultaneous.hpp"

namespace leakbound {

/// Evaluates an exact rational expression: literals ("3/4", "0.25", "2"),
/// named variables, + - * /, unary minus and parentheses. Throws
/// ValidationError on syntax errors, unknown names and division by zero.
Rational evaluate_expression(std::string_view text,
                             const std::map<std::string, Rational>& variables = {});

/// Parses a network document:
///
///   {"format_version": 1, "source": "X",
///    "nodes": [{"id": "X", "alphabet": 2},
///              {"id": "Y", "alphabet": ["a", "b"], "parents": ["X"],
///               "cpt": [["3/4", "1/4"], ["1/4", "3/4"]]}]}
///
/// An integer alphabet n means {"0", ..., "n-1"}. Probabilities are strings
/// holding exact expressions; `variables` binds names used inside them
/// (sweep templates). Throws ValidationError on structural problems. The
/// result is not validated as a network; see validate().
NetworkSpec parse_network(std::string_view json_text,
                          const std::map<std::string, Rational>& variables = {});

/// Reads and parses a file. Throws IoError when it cannot be read.
NetworkSpec load_network(const std::filesystem::path& path,
                         const std::map<std::string, Rational>& variables = {});

/// Canonical text: fixed key order, integer alphabets where the labels are
/// 0..n-1, probabilities as "num/den", parents omitted when empty.
std::string write_network(const NetworkSpec& spec);

/// A family of PMFs over one alphabet:
///   {"alphabet": 3, "pmfs": [["1/2", "1/2", "0"], ...]}
/// or a family of joint PMFs:
///   {"x_alphabet": 2, "y_alphabet": 3, "joints": [[["1/6", ...], ...], ...]}
/// where each joint is a list of rows, one per x.
struct FamilyFile {
  std::vector<Pmf> pmfs;
  std::vector<JointPmf> joints;
};

FamilyFile parse_family(std::string_view json_text);
FamilyFile load_family(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace leakbound
