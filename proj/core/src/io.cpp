#include "ultra/io.hpp"

#include <cctype>
#include <cstddef>
#include <map>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "ultra/rational.hpp"

namespace ultra {
namespace {

using nlohmann::json;

json jrat(const Rational& r) { return to_string(r); }

Rational grat(const json& j) {
  if (!j.is_string()) throw Error("parse", "expected a rational string, got " + j.dump());
  return parse_rational(j.get<std::string>());
}

json jrat_array(const std::vector<Rational>& values) {
  json out = json::array();
  for (const Rational& r : values) out.push_back(jrat(r));
  return out;
}

json jpairs(const std::map<Rational, Rational>& entries) {
  json out = json::array();
  for (const auto& [key, value] : entries) out.push_back(json::array({jrat(key), jrat(value)}));
  return out;
}

std::vector<std::pair<Rational, Rational>> gpairs(const json& j) {
  if (!j.is_array()) throw Error("parse", "expected an array of pairs, got " + j.dump());
  std::vector<std::pair<Rational, Rational>> out;
  for (const json& entry : j) {
    if (!entry.is_array() || entry.size() != 2)
      throw Error("parse", "expected a two-element pair, got " + entry.dump());
    out.emplace_back(grat(entry[0]), grat(entry[1]));
  }
  return out;
}

const json& field_of(const json& doc, const char* key) {
  if (!doc.is_object()) throw Error("parse", "expected an object, got " + doc.dump());
  auto it = doc.find(key);
  if (it == doc.end()) throw Error("parse", std::string("missing field \"") + key + "\"");
  return *it;
}

json parse_doc(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error("parse", e.what());
  }
}

std::string dump_doc(const json& doc) { return doc.dump(2) + "\n"; }

json space_doc(const UltraSpace& s) {
  json doc;
  json points = json::array();
  for (const std::string& label : s.points) points.push_back(label);
  doc["points"] = std::move(points);
  doc["sort"] = jrat_array(s.sort.values);
  json matrix = json::array();
  for (const auto& row : s.dist)
    for (const Rational& entry : row) matrix.push_back(jrat(entry));
  doc["matrix"] = std::move(matrix);
  return doc;
}

UltraSpace space_of_doc(const json& doc) {
  UltraSpace s;
  const json& points = field_of(doc, "points");
  if (!points.is_array()) throw Error("parse", "\"points\" must be an array");
  for (const json& label : points) {
    if (!label.is_string()) throw Error("parse", "point labels must be strings");
    s.points.push_back(label.get<std::string>());
  }
  const json& sort = field_of(doc, "sort");
  if (!sort.is_array()) throw Error("parse", "\"sort\" must be an array");
  std::vector<Rational> values;
  for (const json& value : sort) values.push_back(grat(value));
  s.sort = DistanceSet(std::move(values));
  const json& matrix = field_of(doc, "matrix");
  if (!matrix.is_array()) throw Error("parse", "\"matrix\" must be an array");
  const std::size_t n = s.points.size();
  if (matrix.size() != n * n)
    throw Error("parse", "\"matrix\" must hold " + std::to_string(n * n) +
                             " entries, got " + std::to_string(matrix.size()));
  s.dist.assign(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) s.dist[i][j] = grat(matrix[i * n + j]);
  return s;
}

void check_label(const std::string& label) {
  bool bad = label.empty();
  for (char c : label)
    if (c == ' ' || c == '"' || c == '\n' || c == '\r') bad = true;
  if (bad)
    throw Error("unsupported-label",
                "the label \"" + label + "\" cannot appear in the tree text format");
}

json velem_doc(const VElem& f) {
  json doc;
  doc["support"] = jpairs(f.support);
  return doc;
}

VElem velem_of_doc(const json& doc) {
  return velem_from_pairs(gpairs(field_of(doc, "support")));
}

json pl_doc(const PLAutomorphism& h) {
  json doc;
  doc["breakpoints"] = jrat_array(h.breakpoints);
  doc["slopes"] = jrat_array(h.slopes);
  return doc;
}

PLAutomorphism pl_of_doc(const json& doc) {
  PLAutomorphism h;
  const json& breakpoints = field_of(doc, "breakpoints");
  if (!breakpoints.is_array()) throw Error("parse", "\"breakpoints\" must be an array");
  for (const json& value : breakpoints) h.breakpoints.push_back(grat(value));
  const json& slopes = field_of(doc, "slopes");
  if (!slopes.is_array()) throw Error("parse", "\"slopes\" must be an array");
  for (const json& value : slopes) h.slopes.push_back(grat(value));
  return h;
}

json word_doc(const GroupWord& w) {
  json letters = json::array();
  for (const Letter& letter : w.letters) {
    json entry;
    if (const Translate* shift = std::get_if<Translate>(&letter))
      entry["shift"] = velem_doc(shift->shift);
    else
      entry["section"] = pl_doc(std::get<Section>(letter).part);
    letters.push_back(std::move(entry));
  }
  json doc;
  doc["letters"] = std::move(letters);
  return doc;
}

GroupWord word_of_doc(const json& doc) {
  GroupWord w;
  const json& letters = field_of(doc, "letters");
  if (!letters.is_array()) throw Error("parse", "\"letters\" must be an array");
  for (const json& entry : letters) {
    if (!entry.is_object() || entry.size() != 1)
      throw Error("parse", "each letter must be an object with one field, got " + entry.dump());
    if (entry.contains("shift"))
      w.letters.push_back(Translate{velem_of_doc(entry["shift"])});
    else if (entry.contains("section"))
      w.letters.push_back(Section{pl_of_doc(entry["section"])});
    else
      throw Error("parse", "a letter must be a \"shift\" or a \"section\", got " + entry.dump());
  }
  return w;
}

json terms_doc(const HahnPoly& a) { return jpairs(a.coeffs); }

HahnPoly poly_of_terms(const Field& k, const json& terms) {
  return hahn_from_pairs(k, gpairs(terms));
}

// --- expression parsing ---

class ExprParser {
 public:
  ExprParser(const std::string& text, const Field& k) : text_(text), field_(k) {}

  HahnFrac run() {
    HahnFrac value = parse_expr();
    skip();
    if (pos_ != text_.size())
      throw Error("parse", "unexpected input at position " + std::to_string(pos_) + ": \"" +
                               text_.substr(pos_) + "\"");
    return value;
  }

 private:
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool at(char c) {
    skip();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool at_digit() {
    skip();
    return pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]));
  }

  void expect(char c) {
    if (!at(c)) throw Error("parse", std::string("expected '") + c + "' at position " +
                                         std::to_string(pos_));
    ++pos_;
  }

  HahnFrac parse_expr() {
    HahnFrac acc = parse_term();
    for (;;) {
      if (at('+')) {
        ++pos_;
        acc = fr_add(acc, parse_term());
      } else if (at('-')) {
        ++pos_;
        acc = fr_sub(acc, parse_term());
      } else {
        return acc;
      }
    }
  }

  bool starts_factor() {
    skip();
    if (pos_ >= text_.size()) return false;
    char c = text_[pos_];
    return std::isdigit(static_cast<unsigned char>(c)) || c == 't' || c == '(';
  }

  HahnFrac parse_term() {
    HahnFrac acc = parse_factor();
    for (;;) {
      if (at('*')) {
        ++pos_;
        acc = fr_mul(acc, parse_factor());
      } else if (at('/')) {
        ++pos_;
        acc = fr_mul(acc, fr_inv(parse_factor()));
      } else if (starts_factor()) {
        acc = fr_mul(acc, parse_factor());
      } else {
        return acc;
      }
    }
  }

  HahnFrac parse_factor() {
    skip();
    if (at('-')) {
      ++pos_;
      return fr_neg(parse_factor());
    }
    if (at('(')) {
      ++pos_;
      HahnFrac value = parse_expr();
      expect(')');
      return value;
    }
    if (at('t')) {
      ++pos_;
      Rational exponent(1);
      if (at('^')) {
        ++pos_;
        exponent = parse_exponent();
      }
      return frac_poly(h_monomial(field_, Rational(1), exponent));
    }
    if (at_digit()) return frac_poly(h_const(field_, parse_number()));
    throw Error("parse", "expected a number, 't', or '(' at position " + std::to_string(pos_));
  }

  Rational parse_exponent() {
    bool parenthesized = at('(');
    if (parenthesized) ++pos_;
    bool negative = at('-');
    if (negative) ++pos_;
    if (!at_digit())
      throw Error("parse", "expected an exponent at position " + std::to_string(pos_));
    Rational value = parse_number();
    if (negative) value = -value;
    if (parenthesized) expect(')');
    return value;
  }

  Rational parse_number() {
    Int num = read_digits();
    Int den = 1;
    if (pos_ + 1 < text_.size() && text_[pos_] == '/' &&
        std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
      ++pos_;
      den = read_digits();
      if (den == 0)
        throw Error("parse", "zero denominator in a literal at position " + std::to_string(pos_));
    }
    return make_rational(std::move(num), std::move(den));
  }

  Int read_digits() {
    std::string digits;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
      digits.push_back(text_[pos_++]);
    return Int(digits);
  }

  const std::string& text_;
  Field field_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string space_to_json(const UltraSpace& s) { return dump_doc(space_doc(s)); }

UltraSpace space_from_json(const std::string& text) {
  try {
    return space_of_doc(parse_doc(text));
  } catch (const ParseError& e) {
    throw Error("parse", e.what());
  }
}

TreeDocument tree_document(const MeetTreeResult& r) { return TreeDocument{r.tree, r.extents}; }

TreeDocument tree_document(const AdjacencyForest& f) { return TreeDocument{f.tree, f.extents}; }

std::string tree_to_text(const TreeDocument& doc) {
  const LeveledTree& t = doc.tree;
  std::ostringstream out;
  out << "tree " << (t.kind == TreeKind::meet ? "meet" : "adjacency") << "\n";
  out << "sort";
  for (const Rational& r : t.level_sort.values) out << ' ' << to_string(r);
  out << "\n";
  for (std::size_t v = 0; v < t.size(); ++v) {
    out << "node " << v << ' ' << to_string(t.level[v]) << " \"";
    const std::vector<std::string>& labels =
        v < doc.extents.size() ? doc.extents[v] : std::vector<std::string>{};
    for (std::size_t i = 0; i < labels.size(); ++i) {
      check_label(labels[i]);
      if (i > 0) out << ' ';
      out << labels[i];
    }
    out << "\"\n";
  }
  for (std::size_t v = 0; v < t.size(); ++v)
    if (t.parent[v]) out << "edge " << v << ' ' << *t.parent[v] << "\n";
  return out.str();
}

TreeDocument tree_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  bool saw_kind = false;
  bool saw_sort = false;
  TreeKind kind = TreeKind::meet;
  std::vector<Rational> sort_values;
  struct NodeLine {
    Rational level;
    std::vector<std::string> labels;
    bool present = false;
  };
  std::map<std::size_t, NodeLine> nodes;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::size_t lineno = 0;
  try {
    while (std::getline(in, line)) {
      ++lineno;
      std::istringstream ls(line);
      std::string tag;
      if (!(ls >> tag)) continue;  // blank line
      if (tag == "tree") {
        std::string word;
        if (!(ls >> word) || (word != "meet" && word != "adjacency"))
          throw Error("parse", "line " + std::to_string(lineno) +
                                   ": expected \"tree meet\" or \"tree adjacency\"");
        kind = word == "meet" ? TreeKind::meet : TreeKind::adjacency;
        saw_kind = true;
      } else if (tag == "sort") {
        std::string token;
        while (ls >> token) sort_values.push_back(parse_rational(token));
        saw_sort = true;
      } else if (tag == "node") {
        std::size_t id = 0;
        std::string token;
        if (!(ls >> id >> token))
          throw Error("parse", "line " + std::to_string(lineno) + ": malformed node line");
        NodeLine node;
        node.level = parse_rational(token);
        node.present = true;
        std::size_t open = line.find('"');
        std::size_t close = line.rfind('"');
        if (open == std::string::npos || close <= open)
          throw Error("parse", "line " + std::to_string(lineno) + ": missing quoted labels");
        std::istringstream labels(line.substr(open + 1, close - open - 1));
        std::string label;
        while (labels >> label) node.labels.push_back(label);
        if (!nodes.emplace(id, std::move(node)).second)
          throw Error("parse", "line " + std::to_string(lineno) + ": node " +
                                   std::to_string(id) + " appears twice");
      } else if (tag == "edge") {
        std::size_t child = 0, parent = 0;
        if (!(ls >> child >> parent))
          throw Error("parse", "line " + std::to_string(lineno) + ": malformed edge line");
        edges.emplace_back(child, parent);
      } else {
        throw Error("parse", "line " + std::to_string(lineno) + ": unknown directive \"" +
                                 tag + "\"");
      }
    }
  } catch (const ParseError& e) {
    throw Error("parse", "line " + std::to_string(lineno) + ": " + e.what());
  }
  if (!saw_kind) throw Error("parse", "missing the \"tree <kind>\" line");
  if (!saw_sort) throw Error("parse", "missing the \"sort\" line");
  for (std::size_t i = 0; i < sort_values.size(); ++i)
    if ((i == 0 && !(sort_values[0] == 0)) || (i > 0 && !(sort_values[i - 1] < sort_values[i])))
      throw Error("parse", "the sort line must increase strictly from 0");
  TreeDocument doc;
  doc.tree.kind = kind;
  doc.tree.level_sort = DistanceSet(std::move(sort_values));
  const std::size_t n = nodes.size();
  doc.tree.parent.assign(n, std::nullopt);
  doc.tree.level.assign(n, Rational(0));
  doc.extents.assign(n, {});
  for (auto& [id, node] : nodes) {
    if (id >= n)
      throw Error("parse", "node ids must cover 0.." + std::to_string(n - 1) + ", got " +
                               std::to_string(id));
    doc.tree.level[id] = node.level;
    doc.extents[id] = std::move(node.labels);
  }
  for (const auto& [child, parent] : edges) {
    if (child >= n || parent >= n)
      throw Error("parse", "edge endpoints must name declared nodes");
    if (doc.tree.parent[child])
      throw Error("parse", "node " + std::to_string(child) + " has two parents");
    doc.tree.parent[child] = parent;
  }
  return doc;
}

std::string tree_to_dot(const TreeDocument& doc) {
  const LeveledTree& t = doc.tree;
  std::ostringstream out;
  out << "digraph tree {\n  rankdir = BT;\n";
  for (std::size_t v = 0; v < t.size(); ++v) {
    out << "  n" << v << " [label=\"" << to_string(t.level[v]);
    const std::vector<std::string>& labels =
        v < doc.extents.size() ? doc.extents[v] : std::vector<std::string>{};
    if (!labels.empty()) {
      out << " |";
      for (const std::string& label : labels) {
        out << ' ';
        for (char c : label) {
          if (c == '"' || c == '\\') out << '\\';
          out << c;
        }
      }
    }
    out << "\"];\n";
  }
  for (std::size_t v = 0; v < t.size(); ++v)
    if (t.parent[v]) out << "  n" << v << " -> n" << *t.parent[v] << ";\n";
  std::map<Rational, std::vector<std::size_t>> by_level;
  for (std::size_t v = 0; v < t.size(); ++v) by_level[t.level[v]].push_back(v);
  for (auto it = by_level.rbegin(); it != by_level.rend(); ++it) {
    out << "  { rank = same;";
    for (std::size_t v : it->second) out << " n" << v << ";";
    out << " }\n";
  }
  out << "}\n";
  return out.str();
}

std::string velem_to_json(const VElem& f) { return dump_doc(velem_doc(f)); }

VElem velem_from_json(const std::string& text) {
  try {
    return velem_of_doc(parse_doc(text));
  } catch (const ParseError& e) {
    throw Error("parse", e.what());
  }
}

std::string pl_to_json(const PLAutomorphism& h) { return dump_doc(pl_doc(h)); }

PLAutomorphism pl_from_json(const std::string& text) {
  try {
    return pl_of_doc(parse_doc(text));
  } catch (const ParseError& e) {
    throw Error("parse", e.what());
  }
}

std::string word_to_json(const GroupWord& w) { return dump_doc(word_doc(w)); }

GroupWord word_from_json(const std::string& text) {
  try {
    return word_of_doc(parse_doc(text));
  } catch (const ParseError& e) {
    throw Error("parse", e.what());
  }
}

std::string hahn_to_json(const HahnFrac& a) {
  json doc;
  doc["field"] = to_string(a.num.field);
  bool unit_den = a.den.coeffs.size() == 1 && a.den.coeffs.begin()->first == 0 &&
                  a.den.coeffs.begin()->second == 1;
  if (unit_den) {
    doc["terms"] = terms_doc(a.num);
  } else {
    doc["num"] = terms_doc(a.num);
    doc["den"] = terms_doc(a.den);
  }
  return dump_doc(doc);
}

HahnFrac hahn_from_json(const std::string& text) {
  try {
    json doc = parse_doc(text);
    const json& descriptor = field_of(doc, "field");
    if (!descriptor.is_string()) throw Error("parse", "\"field\" must be a string");
    Field k = field_from_descriptor(descriptor.get<std::string>());
    if (doc.contains("terms")) return frac_poly(poly_of_terms(k, doc["terms"]));
    return frac_of(poly_of_terms(k, field_of(doc, "num")),
                   poly_of_terms(k, field_of(doc, "den")));
  } catch (const ParseError& e) {
    throw Error("parse", e.what());
  }
}

Field field_from_descriptor(const std::string& text) {
  if (text == "Q") return Field::rationals();
  if (text.rfind("Fp:", 0) == 0) {
    const std::string digits = text.substr(3);
    if (!digits.empty() &&
        digits.find_first_not_of("0123456789") == std::string::npos && digits.size() <= 9)
      return Field::mod(std::stoull(digits));
  }
  throw Error("parse", "unknown field descriptor \"" + text + "\" (use \"Q\" or \"Fp:<p>\")");
}

HahnFrac parse_hahn_expression(const std::string& text, const Field& k) {
  return ExprParser(text, k).run();
}

std::string error_line(const Error& e) {
  std::string message = e.what();
  for (char& c : message)
    if (c == '\n' || c == '\r') c = ' ';
  return "error: " + e.kind + ": " + message;
}

}  // namespace ultra
