#include "commands.hpp"

#include <algorithm>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "leakbound/bayes_net.hpp"
#include "leakbound/bounds.hpp"
#include "leakbound/constructions.hpp"
#include "leakbound/coupling_lp.hpp"
#include "leakbound/measures.hpp"
#include "leakbound/network_io.hpp"
#include "leakbound/simultaneous.hpp"

namespace leakbound::cli {
namespace {

constexpr const char* kCsvHeader =
    "node,tau,tau_max,tau_max2,bound_method,bound_value,exact_value,gap,preconditions";

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (const char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string join_preconditions(const std::vector<PreconditionEntry>& entries) {
  std::string out;
  for (const auto& e : entries) {
    if (!out.empty()) out += "; ";
    out += e.name + "=" + e.value + (e.passed ? " ok" : " FAIL");
  }
  return out;
}

std::string tuple_label(const Tuple& t, const Alphabet& alphabet) {
  std::string out = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += ",";
    out += alphabet[t[i]];
  }
  return out + ")";
}

std::vector<std::size_t> resolve_targets(const BayesNet& net, std::size_t source,
                                         const std::vector<std::string>& ids) {
  std::vector<std::size_t> out;
  if (ids.empty()) {
    for (const auto v : net.topological_order()) {
      if (v != source) out.push_back(v);
    }
  } else {
    for (const auto& id : ids) out.push_back(net.index_of(id));
  }
  if (out.empty()) throw ValidationError("no target nodes");
  return out;
}

std::size_t resolve_source(const BayesNet& net, const std::optional<std::string>& id) {
  return id ? net.index_of(*id) : net.source();
}

BoundOptions bound_options(std::size_t max_states) {
  BoundOptions opts;
  opts.inference.max_states = max_states;
  opts.coupling.max_states = max_states;
  return opts;
}

struct BoundRow {
  std::string method;
  std::optional<Rational> value;
  std::string preconditions;
};

bool same_set(std::vector<std::size_t> a, std::vector<std::size_t> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return a == b;
}

}  // namespace

std::string format_log(double value) {
  std::ostringstream out;
  out << std::setprecision(12) << value;
  return out.str();
}

int guarded(const std::function<int()>& body, std::ostream& err) {
  try {
    return body();
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  } catch (const CapacityError& e) {
    err << "error: " << e.what() << "\n";
    return kCapacity;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  }
}

int cmd_validate(const std::filesystem::path& path, std::ostream& out, std::ostream& err) {
  return guarded(
      [&] {
        const auto spec = load_network(path);
        const auto violations = validate(spec);
        if (violations.empty()) {
          out << "ok: " << spec.nodes.size() << " nodes, source " << spec.source << "\n";
          return int{kOk};
        }
        for (const auto& v : violations) {
          err << v.kind << ": node=" << v.node;
          if (v.row) err << " row=" << *v.row;
          err << ": " << v.message << "\n";
        }
        return int{kInvalid};
      },
      err);
}

int cmd_measures(const MeasuresArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(
      [&] {
        const BayesNet net(load_network(args.path));
        const InferenceOptions inference{args.max_states};
        std::vector<std::size_t> nodes;
        if (args.node) {
          nodes.push_back(net.index_of(*args.node));
          if (!net.has_cpt(nodes.front())) throw ValidationError("node '" + *args.node + "' has no CPT");
        } else {
          for (const auto v : net.topological_order()) {
            if (net.has_cpt(v) && v != net.source()) nodes.push_back(v);
          }
        }
        auto print = [&](const std::string& title, const DiscreteChannel& channel) {
          const auto m = measure_set(channel);
          out << title << "\n";
          out << "  tau      " << to_string(m.tau) << "\n";
          out << "  tau_max  " << to_string(m.tau_max) << "\n";
          out << "  tau_max2 " << (m.tau_max2 ? to_string(*m.tau_max2) : "n/a") << "\n";
          out << "  leakage  " << format_log(m.leakage_log) << "\n";
        };
        const std::vector<std::size_t> src{net.source()};
        for (const auto v : nodes) {
          const std::vector<std::size_t> self{v};
          print("P_{" + net.id(v) + "|" + net.label(net.parents(v)) + "}", net.cpt(v));
          if (v != net.source() && !net.parents(v).empty()) {
            print("P_{" + net.id(v) + "|" + net.id(net.source()) + "}",
                  composite_channel(net, net.source(), self, inference));
          }
        }
        return int{kOk};
      },
      err);
}

int cmd_bound(const BoundArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(
      [&] {
        if (args.method != "recursive" && args.method != "theorem2" && args.method != "corollary1") {
          throw ValidationError("unknown method '" + args.method + "'");
        }
        if (args.format != "csv" && args.format != "summary" && args.format != "both") {
          throw ValidationError("unknown format '" + args.format + "'");
        }
        const BayesNet net(load_network(args.path));
        const auto source = resolve_source(net, args.source);
        auto targets = resolve_targets(net, source, args.targets);
        // The two-step chain shape defaults to its worked query (Y1, Y2).
        if (const auto ex1 = match_example1(net); ex1 && args.targets.empty() && source == ex1->x) {
          targets = {ex1->y1, ex1->y2};
        }
        const auto opts = bound_options(args.max_states);

        const auto channel = composite_channel(net, source, targets, opts.inference);
        const auto exact = tau_max(channel);
        const auto tau = doeblin(channel);
        const std::optional<Rational> t2 =
            channel.input_size() > 1 ? std::optional<Rational>(tau_max2(channel)) : std::nullopt;

        std::vector<BoundRow> rows;
        std::vector<std::string> notes;
        std::vector<NamedRational> expressions;
        std::vector<NamedLog> log_expressions;
        std::vector<PreconditionEntry> log;

        if (args.method == "recursive") {
          const auto report = bound_report(net, source, targets, opts);
          const auto pre = join_preconditions(report.precondition_log);
          rows.push_back({"recursive-theorem2", report.theorem2_value, pre});
          rows.push_back({"recursive-corollary1", report.corollary1_value, pre});
          rows.push_back({"subadditivity", report.subadditivity_value, ""});
          notes = report.notes;
          log = report.precondition_log;
        } else {
          // One step: U is the topologically last target, V the rest (or
          // pa(U) without the source when nothing else remains).
          auto rest = targets;
          const auto last = std::max_element(rest.begin(), rest.end(), [&](auto a, auto b) {
            return net.rank(a) < net.rank(b);
          });
          const auto u = *last;
          rest.erase(last);
          rest.erase(std::remove(rest.begin(), rest.end(), u), rest.end());
          if (rest.empty()) {
            for (const auto p : net.parents(u)) {
              if (p != source) rest.push_back(p);
            }
          }
          if (rest.empty()) {
            const Rational value = net.parents(u).empty() ? Rational(1) : tau_max(net.cpt(u));
            rows.push_back({args.method, value, "single node given the source"});
            rows.push_back({"subadditivity", value, ""});
          } else {
            log = step_preconditions(net, source, rest, u, opts);
            const auto pre = join_preconditions(log);
            std::optional<Rational> value;
            try {
              value = args.method == "theorem2" ? theorem2_bound(net, source, rest, u, opts).value
                                                : corollary1_bound(net, source, rest, u, opts).value;
            } catch (const PreconditionError& e) {
              notes.push_back(args.method + " inapplicable: " + e.what());
            }
            rows.push_back({args.method, value, pre});
            const auto a = tau_max(net.cpt(u));
            rows.push_back({"subadditivity",
                            a * tau_max(composite_channel(net, source, rest, opts.inference)), ""});
          }
        }

        if (const auto ex1 = match_example1(net);
            ex1 && source == ex1->x && same_set(targets, {ex1->y1, ex1->y2})) {
          const auto report = example1_report(net, opts);
          expressions = report.expressions;
          log_expressions = report.log_expressions;
          notes.insert(notes.end(), report.notes.begin(), report.notes.end());
        } else if (const auto ex2 = match_example2(net);
                   ex2 && source == ex2->x && same_set(targets, {ex2->y1, ex2->y2, ex2->y3})) {
          const auto report = example2_report(net, opts);
          expressions = report.expressions;
          log_expressions = report.log_expressions;
          notes.insert(notes.end(), report.notes.begin(), report.notes.end());
        }

        bool violated = false;
        const auto node = net.label(targets);
        if (args.format != "summary") {
          out << kCsvHeader << (args.compare_exact ? ",sound" : "") << "\n";
          for (const auto& r : rows) {
            out << csv_field(node) << "," << to_string(tau) << "," << to_string(exact) << ","
                << (t2 ? to_string(*t2) : "") << "," << r.method << ","
                << (r.value ? to_string(*r.value) : "inapplicable") << "," << to_string(exact)
                << "," << (r.value ? to_string(*r.value - exact) : "") << ","
                << csv_field(r.preconditions);
            if (args.compare_exact) {
              if (!r.value) {
                out << ",n/a";
              } else if (*r.value >= exact) {
                out << ",OK";
              } else {
                out << ",VIOLATION";
                violated = true;
              }
            }
            out << "\n";
          }
        } else if (args.compare_exact) {
          for (const auto& r : rows) {
            if (r.value && *r.value < exact) violated = true;
          }
        }
        if (args.format != "csv") {
          if (args.format == "both") out << "\n";
          out << "query: " << node << " | " << net.id(source) << "\n";
          out << "exact tau_max: " << to_string(exact) << " (L = " << format_log(log_of(exact))
              << ")\n";
          for (const auto& r : rows) {
            out << r.method << ": ";
            if (r.value) {
              out << to_string(*r.value) << " (L = " << format_log(log_of(*r.value))
                  << ", gap " << to_string(*r.value - exact) << ")\n";
            } else {
              out << "inapplicable\n";
            }
          }
          if (!log.empty()) {
            out << "preconditions:\n";
            for (const auto& e : log) {
              out << "  " << e.name << " = " << e.value << (e.passed ? "  ok" : "  FAIL") << "\n";
            }
          }
          if (!expressions.empty()) {
            out << "expressions:\n";
            for (const auto& e : expressions) out << "  " << e.name << " = " << to_string(e.value) << "\n";
          }
          if (!log_expressions.empty()) {
            out << "log expressions:\n";
            for (const auto& e : log_expressions) {
              out << "  " << e.name << " = " << format_log(e.value) << "\n";
            }
          }
          for (const auto& n : notes) out << "note: " << n << "\n";
        }
        if (violated) {
          err << "soundness violation: a bound is below the exact leakage exponent\n";
          return int{kInvalid};
        }
        return int{kOk};
      },
      err);
}

int cmd_couple(const CoupleArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(
      [&] {
        const auto family = load_family(args.path);
        auto dump = [&](const TupleMass& mass, const Alphabet& alphabet) {
          if (!args.dump) return;
          out << "coupling:\n";
          for (const auto& [t, w] : mass) out << "  " << tuple_label(t, alphabet) << " " << to_string(w) << "\n";
        };
        if (args.mode == "lp" || args.mode == "n4") {
          if (family.pmfs.empty()) throw ValidationError("mode " + args.mode + " needs a \"pmfs\" family");
          const auto channel = DiscreteChannel::from_family(family.pmfs);
          const auto tm = tau_max(channel);
          out << "mode: " << args.mode << "\n";
          out << "tau_max: " << to_string(tm) << "\n";
          if (channel.input_size() > 1) out << "tau_max2: " << to_string(tau_max2(channel)) << "\n";
          if (args.mode == "lp") {
            const auto result = min_union_coupling(family.pmfs, LpOptions{args.max_states});
            out << "optimum: " << to_string(result.optimal_value) << "\n";
            out << "optimum = tau_max: " << (result.achieves_tau_max ? "yes" : "no") << "\n";
            dump(result.witness.mass(), result.witness.alphabet());
            out << "verification: marginals OK, union=" << to_string(union_mass(result.witness)) << "\n";
            return int{kOk};
          }
          const auto cond = n4_condition(family.pmfs);
          const auto& ing = cond.ingredients;
          for (std::size_t p = 0; p < kPairs.size(); ++p) {
            out << "N" << kPairs[p][0] + 1 << kPairs[p][1] + 1 << ": " << to_string(ing.pair_norm[p]) << "\n";
          }
          out << "condition: " << to_string(cond.capacity) << " >= " << to_string(cond.demand) << " "
              << (cond.holds ? "holds" : "fails") << "\n";
          if (!cond.holds) throw PreconditionError("four-PMF condition fails");
          const auto coupling = build_n4_coupling(family.pmfs);
          const auto weights = choose_abc(ing);
          out << "weights: a=" << to_string(weights.a) << " b=" << to_string(weights.b)
              << " c=" << to_string(weights.c) << " gamma=" << to_string(weights.gamma) << "\n";
          dump(coupling.mass(), coupling.alphabet());
          const auto um = union_mass(coupling);
          const auto inter = verify_intersection_property(coupling, family.pmfs);
          out << "verification: marginals OK, union=tau_max " << (um == tm ? "OK" : "FAIL")
              << ", intersections " << (inter.holds ? "OK" : "FAIL") << "\n";
          return (um == tm && inter.holds) ? int{kOk} : int{kInvalid};
        }
        if (args.mode == "simul") {
          if (family.joints.empty()) throw ValidationError("mode simul needs a \"joints\" family");
          SimulOptions opts;
          opts.max_states = args.max_states;
          const auto coupling = build_simultaneous_coupling(family.joints, opts);
          std::vector<Pmf> ys;
          for (const auto& j : family.joints) ys.push_back(j.y_marginal());
          const auto tm = tau_max(DiscreteChannel::from_family(ys));
          const auto um = y_union_mass(coupling);
          out << "mode: simul\n";
          out << "ingredient: " << coupling.ingredient_name() << "\n";
          out << "c_XY: " << to_string(coupling.c_xy()) << "\n";
          out << "c_Y: " << to_string(coupling.c_y()) << "\n";
          out << "tau_max(Y): " << to_string(tm) << "\n";
          out << "y_union_mass: " << to_string(um) << "\n";
          out << "f: " << to_string(f_quantity(coupling)) << "\n";
          bool marginals_ok = true;
          try {
            const auto mass = coupling.materialize(args.max_states);
            const auto m = coupling.arity();
            const auto& js = family.joints;
            std::vector<std::vector<Rational>> sums(m, std::vector<Rational>(js[0].x_size() * js[0].y_size()));
            for (const auto& [t, w] : mass) {
              for (std::size_t i = 0; i < m; ++i) sums[i][t[i] * js[0].y_size() + t[m + i]] += w;
            }
            for (std::size_t i = 0; i < m; ++i) {
              for (std::size_t x = 0; x < js[0].x_size(); ++x) {
                for (std::size_t y = 0; y < js[0].y_size(); ++y) {
                  if (sums[i][x * js[0].y_size() + y] != js[i].at(x, y)) marginals_ok = false;
                }
              }
            }
            if (args.dump) {
              out << "coupling (x_1..x_m | y_1..y_m):\n";
              for (const auto& [t, w] : mass) {
                out << "  (";
                for (std::size_t k = 0; k < t.size(); ++k) {
                  if (k) out << (k == m ? " | " : ",");
                  out << (k < m ? js[0].x_alphabet()[t[k]] : js[0].y_alphabet()[t[k]]);
                }
                out << ") " << to_string(w) << "\n";
              }
            }
          } catch (const CapacityError& e) {
            out << "dump skipped: " << e.what() << "\n";
          }
          out << "verification: marginals " << (marginals_ok ? "OK" : "FAIL") << ", union=tau_max "
              << (um == tm ? "OK" : "FAIL") << "\n";
          return (marginals_ok && um == tm) ? int{kOk} : int{kInvalid};
        }
        throw ValidationError("unknown mode '" + args.mode + "'");
      },
      err);
}

int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(
      [&] {
        std::vector<std::string> parts;
        std::stringstream ss(args.range);
        for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
        if (parts.size() != 3) throw ValidationError("range must be start:stop:step");
        const auto start = evaluate_expression(parts[0]);
        const auto stop = evaluate_expression(parts[1]);
        const auto step = evaluate_expression(parts[2]);
        if (step <= 0) throw ValidationError("range step must be positive");

        const auto text = read_text_file(args.path);
        const auto opts = bound_options(args.max_states);
        out << args.param << ",exact,theorem2,corollary1,baseline,sound\n";
        bool all_sound = true;
        for (Rational v = start; v <= stop; v += step) {
          const BayesNet net(parse_network(text, {{args.param, v}}));
          const auto source = resolve_source(net, args.source);
          const auto targets = resolve_targets(net, source, args.targets);
          const auto exact = tau_max(composite_channel(net, source, targets, opts.inference));
          auto value_of = [&](BoundMethod method) -> std::optional<Rational> {
            try {
              return recursive_bound(net, source, targets, method, opts).value;
            } catch (const PreconditionError&) {
              return std::nullopt;
            }
          };
          const auto t2 = value_of(BoundMethod::theorem2);
          const auto c1 = value_of(BoundMethod::corollary1);
          const auto base = subadditivity_baseline(net, source, targets, opts);
          const bool sound = (!t2 || *t2 >= exact) && (!c1 || *c1 >= exact) && base >= exact;
          all_sound = all_sound && sound;
          auto cell = [](const std::optional<Rational>& r) { return r ? to_string(*r) : std::string("inapplicable"); };
          out << to_string(v) << "," << to_string(exact) << "," << cell(t2) << "," << cell(c1) << ","
              << to_string(base) << "," << (sound ? "OK" : "VIOLATION") << "\n";
        }
        return all_sound ? int{kOk} : int{kInvalid};
      },
      err);
}

}  // namespace leakbound::cli
