#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "leakbound/error.hpp"
#include "leakbound/pmf.hpp"
#include "leakbound/rational.hpp"
#include "leakbound/simultaneous.hpp"

namespace leakbound {

/// One node as written in a network file. CPT rows are indexed by the
/// parents' product alphabet, parents in declared order, enumerated
/// lexicographically (first parent most significant). A node without parents
/// carries a single prior row; the source node may omit its CPT.
struct NodeSpec {
  std::string id;
  Alphabet alphabet;
  std::vector<std::string> parents;
  std::vector<std::vector<Rational>> cpt;

  friend bool operator==(const NodeSpec&, const NodeSpec&) = default;
};

struct NetworkSpec {
  int format_version = 1;
  std::string source;
  std::vector<NodeSpec> nodes;

  friend bool operator==(const NetworkSpec&, const NetworkSpec&) = default;
};

struct Violation {
  /// "reference", "alphabet", "acyclicity", "arity" or "stochasticity".
  std::string kind;
  std::string node;
  std::optional<std::size_t> row;
  std::string message;
};

/// Every problem with the network, in a stable order; empty when valid.
std::vector<Violation> validate(const NetworkSpec& spec);

/// Parents-before-children order, ties broken by smallest node id. Throws
/// ValidationError naming a cycle.
std::vector<std::string> topological_sort(const NetworkSpec& spec);

/// Validated, indexed discrete Bayesian network. Immutable.
class BayesNet {
 public:
  /// Throws ValidationError carrying every violation.
  explicit BayesNet(NetworkSpec spec);

  const NetworkSpec& spec() const noexcept { return spec_; }
  std::size_t size() const noexcept { return spec_.nodes.size(); }
  std::size_t source() const noexcept { return source_; }

  /// Throws ValidationError for unknown ids.
  std::size_t index_of(const std::string& id) const;
  const std::string& id(std::size_t node) const { return spec_.nodes[node].id; }
  const Alphabet& alphabet(std::size_t node) const { return spec_.nodes[node].alphabet; }
  const std::vector<std::size_t>& parents(std::size_t node) const { return parents_[node]; }
  const std::vector<std::size_t>& children(std::size_t node) const { return children_[node]; }

  bool has_cpt(std::size_t node) const { return cpts_[node].has_value(); }
  /// P_{node | pa(node)}; throws ValidationError when the node has none.
  const DiscreteChannel& cpt(std::size_t node) const;

  /// Topological order as node indices (same tie-breaking as topological_sort).
  const std::vector<std::size_t>& topological_order() const noexcept { return order_; }
  /// Position of a node in topological_order().
  std::size_t rank(std::size_t node) const { return rank_[node]; }

  /// True when a directed path of length >= 1 leads from `from` to `to`.
  bool has_path(std::size_t from, std::size_t to) const;

  /// "A+B+C" style label for a node set.
  std::string label(std::span<const std::size_t> nodes) const;

 private:
  NetworkSpec spec_;
  std::size_t source_ = 0;
  std::vector<std::vector<std::size_t>> parents_;
  std::vector<std::vector<std::size_t>> children_;
  std::vector<std::optional<DiscreteChannel>> cpts_;
  std::vector<std::size_t> order_;
  std::vector<std::size_t> rank_;
};

struct InferenceOptions {
  /// Cap on enumerated joint assignments and on output alphabet sizes.
  std::size_t max_states = kDefaultMaxStates;
};

/// Product alphabet of a node list, lexicographic with the first node most
/// significant; labels joined by ",".
Alphabet product_alphabet(const BayesNet& net, std::span<const std::size_t> nodes);

/// Exact joint distribution of all nodes other than `source` given
/// source = `source_value`, over their product alphabet in topological order.
/// `source` must be a root; every other root needs a prior row.
Pmf joint_distribution(const BayesNet& net, std::size_t source, std::size_t source_value,
                       const InferenceOptions& options = {});

/// P_{S | X}: row x is the marginal of the network law given X = x on the
/// listed targets (in the listed order; the source itself and repeated
/// nodes are allowed).
DiscreteChannel composite_channel(const BayesNet& net, std::size_t source,
                                  std::span<const std::size_t> targets,
                                  const InferenceOptions& options = {});

/// One JointPmf per source value x: P(Z = z, V = v | X = x), with Z playing
/// the X-coordinate and V the Y-coordinate of the JointPmf.
std::vector<JointPmf> conditional_joints(const BayesNet& net, std::size_t source,
                                         std::span<const std::size_t> z_nodes,
                                         std::span<const std::size_t> v_nodes,
                                         const InferenceOptions& options = {});

}  // namespace leakbound
