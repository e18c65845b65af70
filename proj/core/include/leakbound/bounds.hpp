#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "leakbound/bayes_net.hpp"
#include "leakbound/error.hpp"
#include "leakbound/rational.hpp"
#include "leakbound/simultaneous.hpp"

namespace leakbound {

/// One checked hypothesis, e.g. {"tau_max2(P_{Y2|Z})", "1/2", true}.
struct PreconditionEntry {
  std::string name;
  std::string value;
  bool passed = false;
};

struct BoundOptions {
  InferenceOptions inference;
  SimulOptions coupling;
};

enum class BoundMethod { theorem2, corollary1 };

std::string to_string(BoundMethod method);

/// A single application of the peeling bound
///   tau_max(P_{V u {U} | X}) <= a * tau_max(P_{V|X}) - (a - 1) * d
/// with a = tau_max(P_{U | pa(U)}) and d = f (theorem2) or the Doeblin
/// coefficient of P_{V u pa(U) | X} (corollary1).
struct StepBound {
  Rational value;
  Rational tau_max_u;
  Rational tau_max_v;
  Rational correction;
  std::vector<PreconditionEntry> preconditions;
  /// Which Y-coupling ingredient the simultaneous coupling used (theorem2).
  std::string ingredient;
};

/// Checks the query shape (V non-empty, U not in V, no path from U into V,
/// source not in V and not U) and throws ValidationError otherwise.
void check_query(const BayesNet& net, std::size_t source, std::span<const std::size_t> v_set,
                 std::size_t u);

/// Evaluates the hypotheses of the single-step bound: tau_max2 of U's CPT
/// and of P_{V|X} at most 1, or, with four source symbols, the relaxed
/// four-PMF condition on the rows of P_{V|X}.
std::vector<PreconditionEntry> step_preconditions(const BayesNet& net, std::size_t source,
                                                  std::span<const std::size_t> v_set,
                                                  std::size_t u,
                                                  const BoundOptions& options = {});

/// The coupling bound with the exact f term from the simultaneous coupling
/// of P_{V, pa(U) | X = i}. Throws PreconditionError naming the violated
/// quantity and its exact value.
StepBound theorem2_bound(const BayesNet& net, std::size_t source,
                         std::span<const std::size_t> v_set, std::size_t u,
                         const BoundOptions& options = {});

/// Same bound with f replaced by the Doeblin coefficient of
/// P_{V u pa(U) | X}, which never exceeds f.
StepBound corollary1_bound(const BayesNet& net, std::size_t source,
                           std::span<const std::size_t> v_set, std::size_t u,
                           const BoundOptions& options = {});

struct PeelStep {
  std::size_t u = 0;
  std::vector<std::size_t> v_set;
  /// True when V was empty and had to be replaced by pa(U) \ {X}.
  bool adjoined_parents = false;
  StepBound step;
  /// Upper bound carried in for tau_max(P_{V|X}) and the result out.
  Rational bound_in;
  Rational bound_out;
};

struct RecursiveBound {
  Rational value;
  /// Same peel sequence with every correction term dropped.
  Rational baseline;
  /// Exactly evaluated leakage exponent at the bottom of the recursion.
  Rational base_value;
  std::vector<std::size_t> base_set;
  /// Steps in application order (innermost first).
  std::vector<PeelStep> trace;
};

/// A peel step whose hypotheses failed. Carries the steps that succeeded.
class PeelError : public PreconditionError {
 public:
  PeelError(const std::string& what, std::size_t failed_node, std::vector<PeelStep> partial)
      : PreconditionError(what), failed_node_(failed_node), partial_(std::move(partial)) {}
  std::size_t failed_node() const noexcept { return failed_node_; }
  const std::vector<PeelStep>& partial_trace() const noexcept { return partial_; }

 private:
  std::size_t failed_node_;
  std::vector<PeelStep> partial_;
};

/// Peels the topologically last remaining target U with V = the rest. When
/// V would be empty, V = pa(U) \ {X} (valid by data processing). Stops at a
/// single target whose parents are at most {X}, where the leakage exponent
/// is its CPT's tau_max (or 1 for a parentless node).
RecursiveBound recursive_bound(const BayesNet& net, std::size_t source,
                               std::span<const std::size_t> targets, BoundMethod method,
                               const BoundOptions& options = {});

/// Product of the per-step leakage exponents along the same peel sequence:
/// the exponentiated sub-additivity bound.
Rational subadditivity_baseline(const BayesNet& net, std::size_t source,
                                std::span<const std::size_t> targets,
                                const BoundOptions& options = {});

struct NamedRational {
  std::string name;
  Rational value;
};

struct NamedLog {
  std::string name;
  double value = 0.0;
};

/// Result of evaluating every applicable bound for one target set.
struct BoundReport {
  std::string query;
  Rational exact_tau_max;
  std::optional<Rational> theorem2_value;
  std::optional<Rational> corollary1_value;
  Rational subadditivity_value;
  std::vector<PreconditionEntry> precondition_log;
  /// Closed-form expressions specific to a recognized network shape.
  std::vector<NamedRational> expressions;
  std::vector<NamedLog> log_expressions;
  /// Why a bound could not be evaluated, when it could not.
  std::vector<std::string> notes;

  /// Every present bound is >= exact_tau_max.
  bool sound() const;
};

/// Recursive theorem2 and corollary1 bounds, the baseline and the exact value
/// for a target set. Failed hypotheses leave the bound unset and are logged.
BoundReport bound_report(const BayesNet& net, std::size_t source,
                         std::span<const std::size_t> targets, const BoundOptions& options = {});

/// Roles of the two worked network shapes.
struct Example1Roles {
  std::size_t x, y1, z, y2;
};
struct Example2Roles {
  std::size_t x, y1, y2, y3;
};

/// X -> Y1, Y1 -> Z, X -> Z, Z -> Y2 (and nothing else).
std::optional<Example1Roles> match_example1(const BayesNet& net);
/// X -> Y1, X -> Y2, Y1 -> Y2, Y1 -> Y3, Y2 -> Y3 (and nothing else).
std::optional<Example2Roles> match_example2(const BayesNet& net);

/// Two-step chain report: the single-step coupling bound on
/// tau_max(P_{Y1,Y2|X}) with V = {Y1}, U = Y2, pa(U) = {Z}, its log form
///   L(X->Y1) + L(Z->Y2) + log(1 - (t2 - 1)/t2 * tau(P_{Y1,Z|X}) / t1),
/// and the exact value. Throws ValidationError on a shape mismatch.
BoundReport example1_report(const BayesNet& net, const BoundOptions& options = {});

/// Diamond report: the bound with V = {Y1, Y2}, U = Y3 (exact inner
/// exponent), the product bound on tau_max(P_{Y1,Y2|X}), and their
/// composition. Throws ValidationError on a shape mismatch.
BoundReport example2_report(const BayesNet& net, const BoundOptions& options = {});

}  // namespace leakbound
