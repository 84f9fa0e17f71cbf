// Serialization for the library's value types: a shared structured-text
// schema (JSON documents with keys sorted, rationals as exact strings in
// lowest terms, LF endings), a line-based tree format, a DOT rendering, and
// an expression parser for series literals. Emission is bit-stable: equal
// values always produce identical bytes.
#pragma once

#include <string>
#include <vector>

#include "ultra/error.hpp"
#include "ultra/hahn.hpp"
#include "ultra/rep.hpp"
#include "ultra/space.hpp"
#include "ultra/tree.hpp"

namespace ultra {

// Document schema: {"matrix": [n*n rational strings, row-major],
// "points": [labels], "sort": [rational strings ascending]}.
// Parsing checks structure only; run validate_space for the axioms.
std::string space_to_json(const UltraSpace& s);
UltraSpace space_from_json(const std::string& text);  // Error "parse"

// A tree plus the point labels its nodes stand for (one possibly empty label
// list per node).
struct TreeDocument {
  LeveledTree tree;
  std::vector<std::vector<std::string>> extents;

  bool operator==(const TreeDocument&) const = default;
};

TreeDocument tree_document(const MeetTreeResult& r);
TreeDocument tree_document(const AdjacencyForest& f);

// Line format: `tree <kind>`, `sort <values>`, one `node <id> <level>
// "<labels>"` per node, one `edge <child> <parent>` per link. Labels with
// spaces, quotes, or newlines are not representable (Error
// "unsupported-label").
std::string tree_to_text(const TreeDocument& doc);
TreeDocument tree_from_text(const std::string& text);  // Error "parse"

// Graph-visualization rendering; nodes carry their level and labels, equal
// levels share a rank.
std::string tree_to_dot(const TreeDocument& doc);

// {"support": [[key, value], ...]} ascending by key.
std::string velem_to_json(const VElem& f);
VElem velem_from_json(const std::string& text);

// {"breakpoints": [...], "slopes": [...]}.
std::string pl_to_json(const PLAutomorphism& h);
PLAutomorphism pl_from_json(const std::string& text);

// {"letters": [{"shift": velem} | {"section": pl}, ...]}.
std::string word_to_json(const GroupWord& w);
GroupWord word_from_json(const std::string& text);

// Series: {"field": descriptor, "terms": [[exponent, coefficient], ...]}
// when the denominator is 1, else {"den": terms, "field": descriptor,
// "num": terms}. The descriptor is "Q" or "Fp:<p>".
std::string hahn_to_json(const HahnFrac& a);
HahnFrac hahn_from_json(const std::string& text);

Field field_from_descriptor(const std::string& text);  // Error "parse"

// Expressions over the fraction field: rational literals, `t` with an
// optional rational exponent (`t^1/2`, `t^-1`, `t^(-3/2)`), `+ - * /`,
// parentheses, and implicit multiplication (`2t^2`). Error "parse" on
// malformed input; division by a zero expression raises the usual
// "division-by-zero".
HahnFrac parse_hahn_expression(const std::string& text, const Field& k);

// "error: <kind>: <message>" — the one-line machine-readable failure field.
std::string error_line(const Error& e);

}  // namespace ultra
