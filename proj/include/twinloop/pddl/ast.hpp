#pragma once

#include <compare>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace twinloop::pddl {

/// Ground atom, e.g. (at cube_0 pos_0).
struct Atom {
  std::string predicate;
  std::vector<std::string> args;

  friend auto operator<=>(const Atom&, const Atom&) = default;
  friend bool operator==(const Atom&, const Atom&) = default;
};

using AtomSet = std::set<Atom>;

std::string to_string(const Atom& atom);
std::string to_string(const AtomSet& atoms);  // one atom per line

/// Parses "(pred a b)"; throws Error(kSyntaxError).
Atom parse_atom(std::string_view text);

struct TypedName {
  std::string name;
  std::string type;

  friend bool operator==(const TypedName&, const TypedName&) = default;
};

struct TypeDecl {
  std::string name;
  std::string parent = "object";

  friend bool operator==(const TypeDecl&, const TypeDecl&) = default;
};

struct PredicateSchema {
  std::string name;
  std::vector<TypedName> params;

  friend bool operator==(const PredicateSchema&, const PredicateSchema&) = default;
};

/// Predicate applied to action parameters; negative literals appear only in
/// effects (delete list).
struct Literal {
  bool positive = true;
  std::string predicate;
  std::vector<std::string> args;

  friend bool operator==(const Literal&, const Literal&) = default;
};

struct ActionSchema {
  std::string name;
  std::vector<TypedName> params;
  std::vector<Literal> precondition;
  std::vector<Literal> effect;

  friend bool operator==(const ActionSchema&, const ActionSchema&) = default;
};

struct Domain {
  std::string name;
  std::vector<std::string> requirements;
  std::vector<TypeDecl> types;
  std::vector<PredicateSchema> predicates;
  std::vector<ActionSchema> actions;

  bool has_type(std::string_view type) const;
  /// Reflexive, transitive; every type is a subtype of "object".
  bool is_subtype(std::string_view sub, std::string_view super) const;
  const PredicateSchema* find_predicate(std::string_view name) const;
  const ActionSchema* find_action(std::string_view name) const;

  friend bool operator==(const Domain&, const Domain&) = default;
};

struct Problem {
  std::string name;
  std::string domain;
  std::map<std::string, std::string> objects;  // name -> type
  AtomSet init;
  AtomSet goal;

  friend bool operator==(const Problem&, const Problem&) = default;
};

/// A plan step as written: action name plus object arguments.
struct ActionCall {
  std::string name;
  std::vector<std::string> args;

  friend auto operator<=>(const ActionCall&, const ActionCall&) = default;
  friend bool operator==(const ActionCall&, const ActionCall&) = default;
};

std::string to_string(const ActionCall& call);

struct Plan {
  std::vector<ActionCall> steps;

  std::size_t size() const { return steps.size(); }
  bool empty() const { return steps.empty(); }

  friend bool operator==(const Plan&, const Plan&) = default;
};

struct GroundAction {
  std::string name;
  std::vector<std::string> args;
  std::vector<Atom> precondition;  // schema order
  std::vector<Atom> add;
  std::vector<Atom> del;  // never intersects `add`

  ActionCall call() const { return {name, args}; }
};

}  // namespace twinloop::pddl
