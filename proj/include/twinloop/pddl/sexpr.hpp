#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace twinloop::pddl {

struct SourcePos {
  int line = 1;
  int column = 1;
};

/// A parsed S-expression node: either an atom or a parenthesized list.
/// `;` starts a comment running to the end of the line.
struct SExpr {
  bool is_list = false;
  std::string atom;
  std::vector<SExpr> items;
  SourcePos pos;

  bool is_atom() const { return !is_list; }
};

/// All top-level expressions in `text`. Throws Error(kSyntaxError) with a
/// "line L, column C" prefix on unbalanced parentheses or stray tokens.
std::vector<SExpr> parse_sexprs(std::string_view text);

/// Exactly one top-level expression.
SExpr parse_sexpr(std::string_view text);

std::string position_prefix(SourcePos pos);

/// ASCII lowercase copy, used for case-insensitive keyword matching.
std::string lower(std::string_view text);

}  // namespace twinloop::pddl
