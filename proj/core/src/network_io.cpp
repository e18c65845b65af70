#include "leakbound/network_io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace leakbound {
namespace {

using Json = nlohmann::ordered_json;

class ExpressionParser {
 public:
  ExpressionParser(std::string_view text, const std::map<std::string, Rational>& vars)
      : text_(text), vars_(vars) {}

  Rational parse() {
    auto value = sum();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return value;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ValidationError("bad expression \"" + std::string(text_) + "\": " + what);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Rational sum() {
    auto value = product();
    while (true) {
      if (accept('+')) {
        value += product();
      } else if (accept('-')) {
        value -= product();
      } else {
        return value;
      }
    }
  }

  Rational product() {
    auto value = unary();
    while (true) {
      if (accept('*')) {
        value *= unary();
      } else if (accept('/')) {
        auto d = unary();
        if (d == 0) fail("division by zero");
        value /= d;
      } else {
        return value;
      }
    }
  }

  Rational unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return primary();
  }

  Rational primary() {
    skip_space();
    if (accept('(')) {
      auto value = sum();
      if (!accept(')')) fail("missing ')'");
      return value;
    }
    if (pos_ >= text_.size()) fail("unexpected end");
    const auto start = pos_;
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      while (pos_ < text_.size() &&
             (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
        ++pos_;
      }
      return parse_rational(text_.substr(start, pos_ - start));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      const std::string name(text_.substr(start, pos_ - start));
      const auto it = vars_.find(name);
      if (it == vars_.end()) fail("unknown variable '" + name + "'");
      return it->second;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  const std::map<std::string, Rational>& vars_;
  std::size_t pos_ = 0;
};

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
}

const Json& field(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ValidationError(where + ": missing \"" + key + "\"");
  }
  return obj.at(key);
}

Alphabet read_alphabet(const Json& value, const std::string& where) {
  if (value.is_number_integer()) {
    const auto n = value.get<long long>();
    if (n < 1) throw ValidationError(where + ": alphabet size must be positive");
    return numbered_alphabet(static_cast<std::size_t>(n));
  }
  if (!value.is_array()) throw ValidationError(where + ": alphabet must be a list or a size");
  Alphabet out;
  for (const auto& s : value) {
    if (!s.is_string()) throw ValidationError(where + ": alphabet symbols must be strings");
    out.push_back(s.get<std::string>());
  }
  return out;
}

Rational read_probability(const Json& value, const std::map<std::string, Rational>& vars,
                          const std::string& where) {
  if (value.is_string()) return evaluate_expression(value.get<std::string>(), vars);
  if (value.is_number_integer()) return Rational(value.get<long long>());
  throw ValidationError(where + ": probabilities must be strings such as \"1/4\"");
}

std::vector<Rational> read_row(const Json& value, const std::map<std::string, Rational>& vars,
                               const std::string& where) {
  if (!value.is_array()) throw ValidationError(where + ": expected a list of probabilities");
  std::vector<Rational> out;
  for (const auto& v : value) out.push_back(read_probability(v, vars, where));
  return out;
}

Json alphabet_json(const Alphabet& alphabet) {
  if (alphabet == numbered_alphabet(alphabet.size())) return alphabet.size();
  return Json(alphabet);
}

}  // namespace

Rational evaluate_expression(std::string_view text, const std::map<std::string, Rational>& variables) {
  return ExpressionParser(text, variables).parse();
}

NetworkSpec parse_network(std::string_view json_text, const std::map<std::string, Rational>& variables) {
  const auto doc = parse_json(json_text);
  if (!doc.is_object()) throw ValidationError("network document must be an object");
  NetworkSpec spec;
  const auto& version = field(doc, "format_version", "network");
  if (!version.is_number_integer()) throw ValidationError("format_version must be an integer");
  spec.format_version = version.get<int>();
  const auto& source = field(doc, "source", "network");
  if (!source.is_string()) throw ValidationError("source must be a node id");
  spec.source = source.get<std::string>();
  const auto& nodes = field(doc, "nodes", "network");
  if (!nodes.is_array()) throw ValidationError("nodes must be a list");
  for (const auto& n : nodes) {
    NodeSpec node;
    const auto& id = field(n, "id", "node");
    if (!id.is_string()) throw ValidationError("node id must be a string");
    node.id = id.get<std::string>();
    const auto where = "node '" + node.id + "'";
    node.alphabet = read_alphabet(field(n, "alphabet", where), where);
    if (n.contains("parents")) {
      if (!n.at("parents").is_array()) throw ValidationError(where + ": parents must be a list");
      for (const auto& p : n.at("parents")) {
        if (!p.is_string()) throw ValidationError(where + ": parent ids must be strings");
        node.parents.push_back(p.get<std::string>());
      }
    }
    if (n.contains("cpt")) {
      const auto& cpt = n.at("cpt");
      if (!cpt.is_array()) throw ValidationError(where + ": cpt must be a list of rows");
      for (std::size_t r = 0; r < cpt.size(); ++r) {
        node.cpt.push_back(read_row(cpt[r], variables, where + " row " + std::to_string(r)));
      }
    }
    spec.nodes.push_back(std::move(node));
  }
  return spec;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream out;
  out << in.rdbuf();
  if (in.bad()) throw IoError("error reading " + path.string());
  return out.str();
}

NetworkSpec load_network(const std::filesystem::path& path,
                         const std::map<std::string, Rational>& variables) {
  return parse_network(read_text_file(path), variables);
}

std::string write_network(const NetworkSpec& spec) {
  Json doc;
  doc["format_version"] = spec.format_version;
  doc["source"] = spec.source;
  doc["nodes"] = Json::array();
  for (const auto& n : spec.nodes) {
    Json node;
    node["id"] = n.id;
    node["alphabet"] = alphabet_json(n.alphabet);
    if (!n.parents.empty()) node["parents"] = n.parents;
    if (!n.cpt.empty()) {
      Json rows = Json::array();
      for (const auto& row : n.cpt) {
        Json r = Json::array();
        for (const auto& v : row) r.push_back(to_string(v));
        rows.push_back(std::move(r));
      }
      node["cpt"] = std::move(rows);
    }
    doc["nodes"].push_back(std::move(node));
  }
  return doc.dump(2) + "\n";
}

FamilyFile parse_family(std::string_view json_text) {
  const auto doc = parse_json(json_text);
  if (!doc.is_object()) throw ValidationError("family document must be an object");
  FamilyFile out;
  const std::map<std::string, Rational> none;
  if (doc.contains("pmfs")) {
    const auto alphabet = read_alphabet(field(doc, "alphabet", "family"), "family");
    const auto& pmfs = doc.at("pmfs");
    if (!pmfs.is_array() || pmfs.empty()) throw ValidationError("pmfs must be a non-empty list");
    for (std::size_t i = 0; i < pmfs.size(); ++i) {
      out.pmfs.emplace_back(alphabet, read_row(pmfs[i], none, "pmf " + std::to_string(i)));
    }
    return out;
  }
  if (doc.contains("joints")) {
    const auto xs = read_alphabet(field(doc, "x_alphabet", "family"), "x_alphabet");
    const auto ys = read_alphabet(field(doc, "y_alphabet", "family"), "y_alphabet");
    const auto& joints = doc.at("joints");
    if (!joints.is_array() || joints.empty()) throw ValidationError("joints must be a non-empty list");
    for (std::size_t i = 0; i < joints.size(); ++i) {
      const auto where = "joint " + std::to_string(i);
      if (!joints[i].is_array() || joints[i].size() != xs.size()) {
        throw ValidationError(where + ": expected one row per x symbol");
      }
      std::vector<Rational> mass;
      for (const auto& row : joints[i]) {
        auto r = read_row(row, none, where);
        if (r.size() != ys.size()) throw ValidationError(where + ": row length differs from |Y|");
        mass.insert(mass.end(), r.begin(), r.end());
      }
      out.joints.emplace_back(xs, ys, std::move(mass));
    }
    return out;
  }
  throw ValidationError("family document needs \"pmfs\" or \"joints\"");
}

FamilyFile load_family(const std::filesystem::path& path) {
  return parse_family(read_text_file(path));
}

}  // namespace leakbound
