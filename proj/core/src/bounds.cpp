#include "leakbound/bounds.hpp"

#include <algorithm>
#include <set>

#include "leakbound/constructions.hpp"
#include "leakbound/measures.hpp"

namespace leakbound {

std::string to_string(BoundMethod method) {
  return method == BoundMethod::theorem2 ? "theorem2" : "corollary1";
}

namespace {

std::string cond_label(const BayesNet& net, std::span<const std::size_t> out,
                       std::span<const std::size_t> given) {
  return "P_{" + net.label(out) + "|" + net.label(given) + "}";
}

std::vector<std::size_t> merged(std::span<const std::size_t> a, std::span<const std::size_t> b) {
  std::vector<std::size_t> out(a.begin(), a.end());
  for (const auto v : b) {
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  }
  return out;
}

void throw_failed(const std::vector<PreconditionEntry>& entries) {
  std::string message = "bound hypotheses fail:";
  for (const auto& e : entries) {
    if (!e.passed) message += " " + e.name + " = " + e.value + ";";
  }
  message.pop_back();
  throw PreconditionError(message);
}

bool all_passed(const std::vector<PreconditionEntry>& entries) {
  return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.passed; });
}

struct PlannedStep {
  std::size_t u;
  std::vector<std::size_t> v_set;
  bool adjoined;
};

struct Plan {
  std::vector<PlannedStep> steps;  // outermost first
  std::size_t base;
};

bool parents_within_source(const BayesNet& net, std::size_t node, std::size_t source) {
  const auto& pa = net.parents(node);
  return std::all_of(pa.begin(), pa.end(), [&](std::size_t p) { return p == source; });
}

Plan plan_peel(const BayesNet& net, std::size_t source, std::span<const std::size_t> targets) {
  if (targets.empty()) throw ValidationError("empty target set");
  std::vector<std::size_t> remaining;
  for (const auto t : targets) {
    if (t >= net.size()) throw ValidationError("target index out of range");
    if (t == source) throw ValidationError("the source cannot be a target");
    if (std::find(remaining.begin(), remaining.end(), t) == remaining.end()) remaining.push_back(t);
  }
  Plan plan;
  while (!(remaining.size() == 1 && parents_within_source(net, remaining.front(), source))) {
    const auto last = std::max_element(remaining.begin(), remaining.end(), [&](auto a, auto b) {
      return net.rank(a) < net.rank(b);
    });
    const auto u = *last;
    remaining.erase(last);
    bool adjoined = false;
    if (remaining.empty()) {
      for (const auto p : net.parents(u)) {
        if (p != source) remaining.push_back(p);
      }
      adjoined = true;
    }
    std::sort(remaining.begin(), remaining.end(),
              [&](auto a, auto b) { return net.rank(a) < net.rank(b); });
    plan.steps.push_back({u, remaining, adjoined});
  }
  plan.base = remaining.front();
  return plan;
}

Rational base_exponent(const BayesNet& net, std::size_t node) {
  return net.parents(node).empty() ? Rational(1) : tau_max(net.cpt(node));
}

struct StepTerms {
  Rational a;
  Rational tau_max_v;
  Rational correction;
  std::string ingredient;
  std::vector<PreconditionEntry> preconditions;
};

StepTerms step_terms(const BayesNet& net, std::size_t source, std::span<const std::size_t> v_set,
                     std::size_t u, BoundMethod method, const BoundOptions& options) {
  check_query(net, source, v_set, u);
  StepTerms t;
  t.preconditions = step_preconditions(net, source, v_set, u, options);
  if (!all_passed(t.preconditions)) throw_failed(t.preconditions);
  t.a = tau_max(net.cpt(u));
  t.tau_max_v = tau_max(composite_channel(net, source, v_set, options.inference));
  const auto& pa = net.parents(u);
  if (method == BoundMethod::theorem2) {
    const auto joints = conditional_joints(net, source, pa, v_set, options.inference);
    const auto coupling = build_simultaneous_coupling(joints, options.coupling);
    t.correction = f_quantity(coupling);
    t.ingredient = coupling.ingredient_name();
  } else {
    const auto all = merged(v_set, pa);
    t.correction = doeblin(composite_channel(net, source, all, options.inference));
  }
  return t;
}

StepBound finish(const BayesNet& net, std::size_t source, std::span<const std::size_t> v_set,
                 std::size_t u, BoundMethod method, const BoundOptions& options) {
  auto t = step_terms(net, source, v_set, u, method, options);
  StepBound out;
  out.tau_max_u = t.a;
  out.tau_max_v = t.tau_max_v;
  out.correction = t.correction;
  out.value = t.a * t.tau_max_v - (t.a - 1) * t.correction;
  out.preconditions = std::move(t.preconditions);
  out.ingredient = t.ingredient;
  return out;
}

}  // namespace

void check_query(const BayesNet& net, std::size_t source, std::span<const std::size_t> v_set,
                 std::size_t u) {
  if (v_set.empty()) throw ValidationError("V must not be empty");
  if (u >= net.size() || source >= net.size()) throw ValidationError("node index out of range");
  if (u == source) throw ValidationError("U cannot be the source");
  for (const auto v : v_set) {
    if (v >= net.size()) throw ValidationError("node index out of range");
    if (v == u) throw ValidationError("U = '" + net.id(u) + "' is also in V");
    if (v == source) throw ValidationError("the source cannot be in V");
    if (net.has_path(u, v)) {
      throw ValidationError("directed path from U = '" + net.id(u) + "' into V node '" + net.id(v) + "'");
    }
  }
  if (!net.has_cpt(u)) throw ValidationError("U = '" + net.id(u) + "' has no CPT");
}

std::vector<PreconditionEntry> step_preconditions(const BayesNet& net, std::size_t source,
                                                  std::span<const std::size_t> v_set,
                                                  std::size_t u, const BoundOptions& options) {
  std::vector<PreconditionEntry> out;
  const std::vector<std::size_t> source_only{source};
  const auto& cpt = net.cpt(u);
  const auto u_name = "tau_max2(" + cond_label(net, std::vector<std::size_t>{u}, net.parents(u)) + ")";
  if (cpt.input_size() < 2) {
    out.push_back({u_name, "n/a (one row)", true});
  } else {
    const auto t2 = tau_max2(cpt);
    out.push_back({u_name, to_string(t2), t2 <= 1});
  }

  const auto v_channel = composite_channel(net, source, v_set, options.inference);
  const auto v_name = "tau_max2(" + cond_label(net, v_set, source_only) + ")";
  if (v_channel.input_size() < 2) {
    out.push_back({v_name, "n/a (one row)", true});
    return out;
  }
  const auto t2 = tau_max2(v_channel);
  out.push_back({v_name, to_string(t2), t2 <= 1});
  if (t2 > 1 && v_channel.input_size() == 4) {
    const auto rows = v_channel.rows_as_pmfs();
    const auto cond = n4_condition(rows);
    out.back().passed = cond.holds;
    out.push_back({"four-row condition on " + cond_label(net, v_set, source_only),
                   to_string(cond.capacity) + " >= " + to_string(cond.demand), cond.holds});
  }
  return out;
}

StepBound theorem2_bound(const BayesNet& net, std::size_t source,
                         std::span<const std::size_t> v_set, std::size_t u,
                         const BoundOptions& options) {
  return finish(net, source, v_set, u, BoundMethod::theorem2, options);
}

StepBound corollary1_bound(const BayesNet& net, std::size_t source,
                           std::span<const std::size_t> v_set, std::size_t u,
                           const BoundOptions& options) {
  return finish(net, source, v_set, u, BoundMethod::corollary1, options);
}

RecursiveBound recursive_bound(const BayesNet& net, std::size_t source,
                               std::span<const std::size_t> targets, BoundMethod method,
                               const BoundOptions& options) {
  const auto plan = plan_peel(net, source, targets);
  RecursiveBound out;
  out.base_set = {plan.base};
  out.base_value = base_exponent(net, plan.base);
  out.value = out.base_value;
  out.baseline = out.base_value;
  for (auto it = plan.steps.rbegin(); it != plan.steps.rend(); ++it) {
    PeelStep step;
    step.u = it->u;
    step.v_set = it->v_set;
    step.adjoined_parents = it->adjoined;
    try {
      step.step = finish(net, source, it->v_set, it->u, method, options);
    } catch (const PreconditionError& e) {
      throw PeelError("peeling '" + net.id(it->u) + "' failed: " + e.what(), it->u, out.trace);
    }
    const auto& a = step.step.tau_max_u;
    step.bound_in = out.value;
    step.bound_out = a * out.value - (a - 1) * step.step.correction;
    out.value = step.bound_out;
    out.baseline *= a;
    out.trace.push_back(std::move(step));
  }
  return out;
}

Rational subadditivity_baseline(const BayesNet& net, std::size_t source,
                                std::span<const std::size_t> targets, const BoundOptions&) {
  const auto plan = plan_peel(net, source, targets);
  Rational out = base_exponent(net, plan.base);
  for (const auto& s : plan.steps) out *= tau_max(net.cpt(s.u));
  return out;
}

bool BoundReport::sound() const {
  if (subadditivity_value < exact_tau_max) return false;
  if (theorem2_value && *theorem2_value < exact_tau_max) return false;
  if (corollary1_value && *corollary1_value < exact_tau_max) return false;
  return true;
}

BoundReport bound_report(const BayesNet& net, std::size_t source,
                         std::span<const std::size_t> targets, const BoundOptions& options) {
  BoundReport report;
  report.query = net.label(targets) + " | " + net.id(source);
  report.exact_tau_max = tau_max(composite_channel(net, source, targets, options.inference));
  report.subadditivity_value = subadditivity_baseline(net, source, targets, options);
  const auto plan = plan_peel(net, source, targets);
  for (const auto& s : plan.steps) {
    auto entries = step_preconditions(net, source, s.v_set, s.u, options);
    report.precondition_log.insert(report.precondition_log.end(), entries.begin(), entries.end());
  }
  for (const auto method : {BoundMethod::theorem2, BoundMethod::corollary1}) {
    try {
      const auto r = recursive_bound(net, source, targets, method, options);
      (method == BoundMethod::theorem2 ? report.theorem2_value : report.corollary1_value) = r.value;
    } catch (const PreconditionError& e) {
      report.notes.push_back(to_string(method) + " inapplicable: " + e.what());
    }
  }
  return report;
}

std::optional<Example1Roles> match_example1(const BayesNet& net) {
  if (net.size() != 4) return std::nullopt;
  const auto x = net.source();
  using Set = std::set<std::size_t>;
  auto pa = [&](std::size_t v) { return Set(net.parents(v).begin(), net.parents(v).end()); };
  for (std::size_t y1 = 0; y1 < 4; ++y1) {
    if (y1 == x || pa(y1) != Set{x}) continue;
    for (std::size_t z = 0; z < 4; ++z) {
      if (z == x || z == y1 || pa(z) != Set{x, y1}) continue;
      const auto y2 = 6 - x - y1 - z;
      if (pa(y2) == Set{z} && pa(x).empty()) return Example1Roles{x, y1, z, y2};
    }
  }
  return std::nullopt;
}

std::optional<Example2Roles> match_example2(const BayesNet& net) {
  if (net.size() != 4) return std::nullopt;
  const auto x = net.source();
  using Set = std::set<std::size_t>;
  auto pa = [&](std::size_t v) { return Set(net.parents(v).begin(), net.parents(v).end()); };
  for (std::size_t y1 = 0; y1 < 4; ++y1) {
    if (y1 == x || pa(y1) != Set{x}) continue;
    for (std::size_t y2 = 0; y2 < 4; ++y2) {
      if (y2 == x || y2 == y1 || pa(y2) != Set{x, y1}) continue;
      const auto y3 = 6 - x - y1 - y2;
      if (pa(y3) == Set{y1, y2} && pa(x).empty()) return Example2Roles{x, y1, y2, y3};
    }
  }
  return std::nullopt;
}

BoundReport example1_report(const BayesNet& net, const BoundOptions& options) {
  const auto roles = match_example1(net);
  if (!roles) throw ValidationError("network does not have the X->Y1->Z->Y2, X->Z shape");
  const auto [x, y1, z, y2] = *roles;
  const std::vector<std::size_t> targets{y1, y2};
  auto report = bound_report(net, x, targets, options);

  const auto t1 = tau_max(net.cpt(y1));
  const auto t2 = tau_max(net.cpt(y2));
  const auto tau = doeblin(composite_channel(net, x, std::vector<std::size_t>{y1, z}, options.inference));
  const std::vector<std::size_t> xs{x}, zs{z}, y1s{y1}, y2s{y2};
  const auto l1 = "tau_max(" + cond_label(net, y1s, xs) + ")";
  const auto l2 = "tau_max(" + cond_label(net, y2s, zs) + ")";
  const auto lt = "tau(" + cond_label(net, std::vector<std::size_t>{y1, z}, xs) + ")";
  report.expressions.push_back({l1, t1});
  report.expressions.push_back({l2, t2});
  report.expressions.push_back({lt, tau});
  if (!all_passed(step_preconditions(net, x, y1s, y2, options))) {
    report.notes.push_back("chain bound hypotheses fail; closed forms not reported");
    return report;
  }
  const Rational bound = t2 * t1 - (t2 - 1) * tau;
  const Rational factor = 1 - (t2 - 1) / t2 * tau / t1;
  if (t1 * t2 * factor != bound) {
    throw ConstructionError("log form of the chain bound disagrees with the product form");
  }
  report.expressions.push_back({"chain_bound", bound});
  report.expressions.push_back({"chain_bound_factor", factor});
  report.log_expressions.push_back({"L(" + net.id(x) + "->" + net.label(targets) + ")",
                                    log_of(report.exact_tau_max)});
  report.log_expressions.push_back(
      {"chain_bound_log", log_of(t1) + log_of(t2) + log_of(factor)});
  return report;
}

BoundReport example2_report(const BayesNet& net, const BoundOptions& options) {
  const auto roles = match_example2(net);
  if (!roles) throw ValidationError("network does not have the X->Y1, X->Y2, Y1->Y2, Y1->Y3, Y2->Y3 shape");
  const auto [x, y1, y2, y3] = *roles;
  const std::vector<std::size_t> targets{y1, y2, y3};
  auto report = bound_report(net, x, targets, options);

  const std::vector<std::size_t> inner{y1, y2};
  const auto pair_channel = composite_channel(net, x, inner, options.inference);
  const auto exact_inner = tau_max(pair_channel);
  const auto tau_inner = doeblin(pair_channel);
  const auto t1 = tau_max(net.cpt(y1));
  const auto t2 = tau_max(net.cpt(y2));
  const auto t3 = tau_max(net.cpt(y3));
  const std::vector<std::size_t> xs{x}, y1s{y1}, y2s{y2}, y3s{y3};
  report.expressions.push_back({"tau_max(" + cond_label(net, inner, xs) + ")", exact_inner});
  report.expressions.push_back({"tau(" + cond_label(net, inner, xs) + ")", tau_inner});
  report.expressions.push_back({"tau_max(" + cond_label(net, y1s, xs) + ")", t1});
  report.expressions.push_back({"tau_max(" + cond_label(net, y2s, net.parents(y2)) + ")", t2});
  report.expressions.push_back({"tau_max(" + cond_label(net, y3s, net.parents(y3)) + ")", t3});

  const bool outer_ok = all_passed(step_preconditions(net, x, inner, y3, options));
  const bool inner_ok = all_passed(step_preconditions(net, x, y1s, y2, options));
  if (outer_ok) {
    const Rational outer = exact_inner * t3 - (t3 - 1) * tau_inner;
    report.expressions.push_back({"outer_bound", outer});
    report.log_expressions.push_back({"outer_bound_log", log_of(outer)});
  } else {
    report.notes.push_back("outer step hypotheses fail");
  }
  if (inner_ok) {
    const Rational product = t1 * t2;
    report.expressions.push_back({"inner_product_bound", product});
    if (outer_ok) {
      const Rational composed = product * t3 - (t3 - 1) * tau_inner;
      report.expressions.push_back({"composed_bound", composed});
      report.log_expressions.push_back({"composed_bound_log", log_of(composed)});
    }
  } else {
    report.notes.push_back("inner step hypotheses fail");
  }
  report.log_expressions.push_back({"L(" + net.id(x) + "->" + net.label(targets) + ")",
                                    log_of(report.exact_tau_max)});
  return report;
}

}  // namespace leakbound
