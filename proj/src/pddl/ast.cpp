#include "twinloop/pddl/ast.hpp"

#include <algorithm>

#include "twinloop/common/error.hpp"
#include "twinloop/pddl/sexpr.hpp"

namespace twinloop::pddl {

std::string to_string(const Atom& atom) {
  std::string out = "(" + atom.predicate;
  for (const auto& arg : atom.args) {
    out += ' ';
    out += arg;
  }
  out += ')';
  return out;
}

std::string to_string(const AtomSet& atoms) {
  std::string out;
  for (const auto& atom : atoms) {
    out += to_string(atom);
    out += '\n';
  }
  return out;
}

std::string to_string(const ActionCall& call) {
  return to_string(Atom{call.name, call.args});
}

Atom parse_atom(std::string_view text) {
  const SExpr expr = parse_sexpr(text);
  if (!expr.is_list || expr.items.empty()) {
    throw Error(ErrorCode::kSyntaxError, position_prefix(expr.pos) + "expected (predicate args...)");
  }
  Atom atom;
  for (const auto& item : expr.items) {
    if (item.is_list) {
      throw Error(ErrorCode::kSyntaxError, position_prefix(item.pos) + "nested list in atom");
    }
    if (atom.predicate.empty()) {
      atom.predicate = item.atom;
    } else {
      atom.args.push_back(item.atom);
    }
  }
  return atom;
}

bool Domain::has_type(std::string_view type) const {
  return type == "object" ||
         std::any_of(types.begin(), types.end(), [&](const auto& t) { return t.name == type; });
}

bool Domain::is_subtype(std::string_view sub, std::string_view super) const {
  if (super == "object") return true;
  std::string_view current = sub;
  // Bounded walk guards against cyclic declarations.
  for (std::size_t hops = 0; hops <= types.size(); ++hops) {
    if (current == super) return true;
    auto it = std::find_if(types.begin(), types.end(), [&](const auto& t) { return t.name == current; });
    if (it == types.end()) return false;
    current = it->parent;
  }
  return false;
}

const PredicateSchema* Domain::find_predicate(std::string_view pred) const {
  auto it = std::find_if(predicates.begin(), predicates.end(),
                         [&](const auto& p) { return p.name == pred; });
  return it == predicates.end() ? nullptr : &*it;
}

const ActionSchema* Domain::find_action(std::string_view action) const {
  auto it = std::find_if(actions.begin(), actions.end(), [&](const auto& a) { return a.name == action; });
  return it == actions.end() ? nullptr : &*it;
}

}  // namespace twinloop::pddl
