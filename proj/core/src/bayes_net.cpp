#include "leakbound/bayes_net.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <queue>
#include <set>

namespace leakbound {
namespace {

std::size_t checked_product(std::size_t acc, std::size_t factor, std::size_t cap,
                            const std::string& what) {
  if (factor != 0 && acc > cap / factor) {
    throw CapacityError(what + " exceeds " + std::to_string(cap) + " states");
  }
  return acc * factor;
}

// Finds one cycle among nodes whose in-degree never dropped to zero.
std::vector<std::string> find_cycle(const NetworkSpec& spec, const std::set<std::string>& stuck) {
  std::map<std::string, const NodeSpec*> by_id;
  for (const auto& n : spec.nodes) by_id.emplace(n.id, &n);
  std::map<std::string, int> state;
  std::vector<std::string> stack;
  std::vector<std::string> cycle;
  std::function<bool(const std::string&)> visit = [&](const std::string& id) {
    state[id] = 1;
    stack.push_back(id);
    for (const auto& p : by_id.at(id)->parents) {
      if (!stuck.count(p)) continue;
      if (state[p] == 1) {
        auto it = std::find(stack.begin(), stack.end(), p);
        cycle.assign(it, stack.end());
        return true;
      }
      if (state[p] == 0 && visit(p)) return true;
    }
    stack.pop_back();
    state[id] = 2;
    return false;
  };
  for (const auto& id : stuck) {
    if (state[id] == 0 && visit(id)) break;
  }
  // The walk follows parent edges; report it in edge direction.
  std::reverse(cycle.begin(), cycle.end());
  return cycle;
}

std::string join_cycle(const std::vector<std::string>& cycle) {
  std::string out;
  for (const auto& id : cycle) out += id + " -> ";
  return out + (cycle.empty() ? std::string() : cycle.front());
}

struct SortResult {
  std::vector<std::string> order;
  std::vector<std::string> cycle;
};

SortResult kahn(const NetworkSpec& spec) {
  std::map<std::string, const NodeSpec*> by_id;
  for (const auto& n : spec.nodes) by_id.emplace(n.id, &n);
  std::map<std::string, std::size_t> indegree;
  std::map<std::string, std::vector<std::string>> children;
  for (const auto& [id, node] : by_id) {
    auto& d = indegree[id];
    for (const auto& p : std::set<std::string>(node->parents.begin(), node->parents.end())) {
      if (!by_id.count(p)) continue;
      ++d;
      children[p].push_back(id);
    }
  }
  std::priority_queue<std::string, std::vector<std::string>, std::greater<>> ready;
  for (const auto& [id, d] : indegree) {
    if (d == 0) ready.push(id);
  }
  SortResult out;
  while (!ready.empty()) {
    auto id = ready.top();
    ready.pop();
    out.order.push_back(id);
    for (const auto& c : children[id]) {
      if (--indegree[c] == 0) ready.push(c);
    }
  }
  if (out.order.size() != by_id.size()) {
    std::set<std::string> stuck;
    for (const auto& [id, d] : indegree) {
      if (d > 0) stuck.insert(id);
    }
    out.cycle = find_cycle(spec, stuck);
  }
  return out;
}

}  // namespace

std::vector<Violation> validate(const NetworkSpec& spec) {
  std::vector<Violation> out;
  auto add = [&](std::string kind, const std::string& node, std::optional<std::size_t> row,
                 std::string message) {
    out.push_back({std::move(kind), node, row, std::move(message)});
  };
  if (spec.format_version != 1) {
    add("reference", "", std::nullopt,
        "unsupported format_version " + std::to_string(spec.format_version));
  }
  std::map<std::string, const NodeSpec*> by_id;
  for (const auto& n : spec.nodes) {
    if (n.id.empty()) add("reference", n.id, std::nullopt, "node with an empty id");
    if (!by_id.emplace(n.id, &n).second) {
      add("reference", n.id, std::nullopt, "duplicate node id '" + n.id + "'");
    }
  }
  if (!by_id.count(spec.source)) {
    add("reference", spec.source, std::nullopt, "source '" + spec.source + "' is not a node");
  } else if (!by_id.at(spec.source)->parents.empty()) {
    add("reference", spec.source, std::nullopt, "source '" + spec.source + "' must not have parents");
  }

  for (const auto& n : spec.nodes) {
    if (n.alphabet.empty()) add("alphabet", n.id, std::nullopt, "node '" + n.id + "' has an empty alphabet");
    if (std::set<std::string>(n.alphabet.begin(), n.alphabet.end()).size() != n.alphabet.size()) {
      add("alphabet", n.id, std::nullopt, "node '" + n.id + "' repeats an alphabet symbol");
    }
    std::set<std::string> seen;
    bool parents_ok = true;
    for (const auto& p : n.parents) {
      if (!by_id.count(p)) {
        add("reference", n.id, std::nullopt, "node '" + n.id + "' has unknown parent '" + p + "'");
        parents_ok = false;
      } else if (!seen.insert(p).second) {
        add("reference", n.id, std::nullopt, "node '" + n.id + "' lists parent '" + p + "' twice");
        parents_ok = false;
      }
    }
    if (!parents_ok || n.alphabet.empty()) continue;

    const bool is_source = n.id == spec.source;
    if (n.cpt.empty() && is_source) continue;
    std::size_t expected_rows = 1;
    bool overflow = false;
    for (const auto& p : n.parents) {
      const auto s = by_id.at(p)->alphabet.size();
      if (s != 0 && expected_rows > kDefaultMaxStates / s) overflow = true;
      expected_rows *= std::max<std::size_t>(s, 1);
    }
    if (overflow) {
      add("arity", n.id, std::nullopt, "node '" + n.id + "' has too many parent configurations");
      continue;
    }
    if (n.cpt.size() != expected_rows) {
      add("arity", n.id, std::nullopt,
          "node '" + n.id + "' has " + std::to_string(n.cpt.size()) + " CPT rows, expected " +
              std::to_string(expected_rows));
    }
    for (std::size_t r = 0; r < n.cpt.size(); ++r) {
      const auto& row = n.cpt[r];
      if (row.size() != n.alphabet.size()) {
        add("arity", n.id, r,
            "node '" + n.id + "' row " + std::to_string(r) + " has " + std::to_string(row.size()) +
                " entries, expected " + std::to_string(n.alphabet.size()));
        continue;
      }
      Rational total = 0;
      bool range_ok = true;
      for (const auto& v : row) {
        if (v < 0 || v > 1) range_ok = false;
        total += v;
      }
      if (!range_ok) {
        add("stochasticity", n.id, r,
            "node '" + n.id + "' row " + std::to_string(r) + " has an entry outside [0, 1]");
      } else if (total != 1) {
        add("stochasticity", n.id, r,
            "node '" + n.id + "' row " + std::to_string(r) + " sums to " + to_string(total));
      }
    }
  }

  const auto sorted = kahn(spec);
  if (!sorted.cycle.empty()) {
    add("acyclicity", sorted.cycle.front(), std::nullopt, "cycle " + join_cycle(sorted.cycle));
  }
  return out;
}

std::vector<std::string> topological_sort(const NetworkSpec& spec) {
  auto sorted = kahn(spec);
  if (!sorted.cycle.empty()) throw ValidationError("cycle " + join_cycle(sorted.cycle));
  return sorted.order;
}

BayesNet::BayesNet(NetworkSpec spec) : spec_(std::move(spec)) {
  const auto violations = validate(spec_);
  if (!violations.empty()) {
    std::string message = "invalid network:";
    for (const auto& v : violations) message += "\n  [" + v.kind + "] " + v.message;
    throw ValidationError(message);
  }
  const auto n = spec_.nodes.size();
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index.emplace(spec_.nodes[i].id, i);
  source_ = index.at(spec_.source);
  parents_.resize(n);
  children_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& p : spec_.nodes[i].parents) {
      parents_[i].push_back(index.at(p));
      children_[index.at(p)].push_back(i);
    }
  }
  cpts_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& node = spec_.nodes[i];
    if (node.cpt.empty()) continue;
    cpts_[i].emplace(product_alphabet(*this, parents_[i]), node.alphabet, node.cpt);
  }
  for (const auto& id : topological_sort(spec_)) order_.push_back(index.at(id));
  rank_.resize(n);
  for (std::size_t r = 0; r < n; ++r) rank_[order_[r]] = r;
}

std::size_t BayesNet::index_of(const std::string& id) const {
  for (std::size_t i = 0; i < spec_.nodes.size(); ++i) {
    if (spec_.nodes[i].id == id) return i;
  }
  throw ValidationError("unknown node '" + id + "'");
}

const DiscreteChannel& BayesNet::cpt(std::size_t node) const {
  if (!cpts_[node]) throw ValidationError("node '" + id(node) + "' has no CPT");
  return *cpts_[node];
}

bool BayesNet::has_path(std::size_t from, std::size_t to) const {
  std::vector<bool> seen(size(), false);
  std::vector<std::size_t> stack(children_[from].begin(), children_[from].end());
  while (!stack.empty()) {
    const auto v = stack.back();
    stack.pop_back();
    if (v == to) return true;
    if (seen[v]) continue;
    seen[v] = true;
    stack.insert(stack.end(), children_[v].begin(), children_[v].end());
  }
  return false;
}

std::string BayesNet::label(std::span<const std::size_t> nodes) const {
  if (nodes.empty()) return "()";
  std::string out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (i) out += "+";
    out += id(nodes[i]);
  }
  return out;
}

Alphabet product_alphabet(const BayesNet& net, std::span<const std::size_t> nodes) {
  Alphabet out{""};
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    Alphabet next;
    for (const auto& prefix : out) {
      for (const auto& s : net.alphabet(nodes[k])) next.push_back(k == 0 ? s : prefix + "," + s);
    }
    out = std::move(next);
  }
  if (nodes.empty()) out = {"()"};
  return out;
}

namespace {

void require_root(const BayesNet& net, std::size_t source) {
  if (!net.parents(source).empty()) {
    throw ValidationError("source '" + net.id(source) + "' must be a root");
  }
}

// Enumerates the nodes in `order` (source excluded, its value fixed) and
// calls `leaf` with every positive-probability assignment.
void enumerate(const BayesNet& net, std::size_t source, std::size_t source_value,
               const std::vector<std::size_t>& order,
               const std::function<void(const std::vector<std::size_t>&, const Rational&)>& leaf) {
  std::vector<std::size_t> value(net.size(), 0);
  value[source] = source_value;
  std::function<void(std::size_t, const Rational&)> walk = [&](std::size_t k, const Rational& p) {
    if (k == order.size()) {
      leaf(value, p);
      return;
    }
    const auto v = order[k];
    const auto& parents = net.parents(v);
    std::size_t row = 0;
    for (const auto pa : parents) row = row * net.alphabet(pa).size() + value[pa];
    const auto probs = net.cpt(v).row(row);
    for (std::size_t s = 0; s < probs.size(); ++s) {
      if (probs[s] == 0) continue;
      value[v] = s;
      walk(k + 1, p * probs[s]);
    }
  };
  walk(0, Rational(1));
}

}  // namespace

Pmf joint_distribution(const BayesNet& net, std::size_t source, std::size_t source_value,
                       const InferenceOptions& options) {
  require_root(net, source);
  if (source_value >= net.alphabet(source).size()) throw ValidationError("source value out of range");
  std::vector<std::size_t> order;
  std::size_t states = 1;
  for (const auto v : net.topological_order()) {
    if (v == source) continue;
    order.push_back(v);
    states = checked_product(states, net.alphabet(v).size(), options.max_states, "joint distribution");
  }
  std::vector<Rational> mass(states, Rational(0));
  enumerate(net, source, source_value, order, [&](const std::vector<std::size_t>& value, const Rational& p) {
    std::size_t idx = 0;
    for (const auto v : order) idx = idx * net.alphabet(v).size() + value[v];
    mass[idx] += p;
  });
  return Pmf(product_alphabet(net, order), std::move(mass));
}

DiscreteChannel composite_channel(const BayesNet& net, std::size_t source,
                                  std::span<const std::size_t> targets,
                                  const InferenceOptions& options) {
  require_root(net, source);
  if (targets.empty()) throw ValidationError("composite channel needs at least one target");
  std::size_t out_size = 1;
  for (const auto t : targets) {
    if (t >= net.size()) throw ValidationError("target index out of range");
    out_size = checked_product(out_size, net.alphabet(t).size(), options.max_states, "composite output");
  }

  // Only ancestors of the targets matter; everything else sums out to 1.
  std::vector<bool> needed(net.size(), false);
  std::vector<std::size_t> stack(targets.begin(), targets.end());
  while (!stack.empty()) {
    const auto v = stack.back();
    stack.pop_back();
    if (needed[v]) continue;
    needed[v] = true;
    for (const auto p : net.parents(v)) stack.push_back(p);
  }
  std::vector<std::size_t> order;
  std::size_t states = 1;
  for (const auto v : net.topological_order()) {
    if (v == source || !needed[v]) continue;
    order.push_back(v);
    states = checked_product(states, net.alphabet(v).size(), options.max_states, "joint enumeration");
  }

  const auto nx = net.alphabet(source).size();
  std::vector<std::vector<Rational>> rows(nx, std::vector<Rational>(out_size, Rational(0)));
  for (std::size_t x = 0; x < nx; ++x) {
    auto& row = rows[x];
    enumerate(net, source, x, order, [&](const std::vector<std::size_t>& value, const Rational& p) {
      std::size_t idx = 0;
      for (const auto t : targets) idx = idx * net.alphabet(t).size() + value[t];
      row[idx] += p;
    });
  }
  return DiscreteChannel(net.alphabet(source), product_alphabet(net, targets), std::move(rows));
}

std::vector<JointPmf> conditional_joints(const BayesNet& net, std::size_t source,
                                         std::span<const std::size_t> z_nodes,
                                         std::span<const std::size_t> v_nodes,
                                         const InferenceOptions& options) {
  if (v_nodes.empty()) throw ValidationError("conditional joints need at least one V node");
  std::vector<std::size_t> all(z_nodes.begin(), z_nodes.end());
  all.insert(all.end(), v_nodes.begin(), v_nodes.end());
  const auto channel = composite_channel(net, source, all, options);
  const auto z_alph = product_alphabet(net, z_nodes);
  const auto v_alph = product_alphabet(net, v_nodes);
  std::vector<JointPmf> out;
  for (std::size_t x = 0; x < channel.input_size(); ++x) {
    const auto row = channel.row(x);
    out.emplace_back(z_alph, v_alph, std::vector<Rational>(row.begin(), row.end()));
  }
  return out;
}

}  // namespace leakbound
