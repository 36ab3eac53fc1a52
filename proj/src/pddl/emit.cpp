#include "twinloop/pddl/emit.hpp"

#include <map>
#include <sstream>

namespace twinloop::pddl {
namespace {

std::string literal_text(const Literal& literal) {
  const std::string body = to_string(Atom{literal.predicate, literal.args});
  return literal.positive ? body : "(not " + body + ")";
}

std::string typed_params(const std::vector<TypedName>& params) {
  std::string out;
  for (const auto& p : params) {
    if (!out.empty()) out += ' ';
    out += p.name + " - " + p.type;
  }
  return out;
}

std::string conjunction(const std::vector<Literal>& literals) {
  std::string out = "(and";
  for (const auto& l : literals) out += " " + literal_text(l);
  return out + ")";
}

}  // namespace

std::string emit_problem(const Problem& problem) {
  std::map<std::string, std::vector<std::string>> by_type;
  for (const auto& [name, type] : problem.objects) by_type[type].push_back(name);

  std::ostringstream out;
  out << "(define (problem " << problem.name << ")\n";
  out << "  (:domain " << problem.domain << ")\n";
  out << "  (:objects";
  for (const auto& [type, names] : by_type) {
    out << "\n   ";
    for (const auto& name : names) out << ' ' << name;
    out << " - " << type;
  }
  out << ")\n";
  out << "  (:init";
  for (const auto& atom : problem.init) out << "\n    " << to_string(atom);
  out << ")\n";
  out << "  (:goal (and";
  for (const auto& atom : problem.goal) out << "\n    " << to_string(atom);
  out << ")))\n";
  return out.str();
}

std::string emit_domain(const Domain& domain) {
  std::ostringstream out;
  out << "(define (domain " << domain.name << ")\n";
  if (!domain.requirements.empty()) {
    out << "  (:requirements";
    for (const auto& r : domain.requirements) out << ' ' << r;
    out << ")\n";
  }
  if (!domain.types.empty()) {
    out << "  (:types";
    for (const auto& t : domain.types) {
      out << ' ' << t.name;
      if (t.parent != "object") out << " - " << t.parent;
    }
    out << ")\n";
  }
  out << "  (:predicates";
  for (const auto& p : domain.predicates) {
    out << "\n    (" << p.name;
    if (!p.params.empty()) out << ' ' << typed_params(p.params);
    out << ')';
  }
  out << ")\n";
  for (const auto& a : domain.actions) {
    out << "  (:action " << a.name << "\n";
    out << "    :parameters (" << typed_params(a.params) << ")\n";
    out << "    :precondition " << conjunction(a.precondition) << "\n";
    out << "    :effect " << conjunction(a.effect) << ")\n";
  }
  out << ")\n";
  return out.str();
}

std::string emit_plan(const Plan& plan) {
  std::string out;
  for (const auto& step : plan.steps) out += to_string(step) + "\n";
  return out;
}

std::string dump_ast(const Domain& domain) {
  std::ostringstream out;
  out << "domain " << domain.name << "\n";
  out << "  requirements:";
  for (const auto& r : domain.requirements) out << ' ' << r;
  out << "\n  types:\n";
  for (const auto& t : domain.types) out << "    " << t.name << " < " << t.parent << "\n";
  out << "  predicates: " << domain.predicates.size() << "\n";
  for (const auto& p : domain.predicates) {
    out << "    " << p.name << "/" << p.params.size();
    for (const auto& param : p.params) out << ' ' << param.name << ':' << param.type;
    out << "\n";
  }
  out << "  actions: " << domain.actions.size() << "\n";
  for (const auto& a : domain.actions) {
    out << "    " << a.name << "(";
    for (std::size_t i = 0; i < a.params.size(); ++i) {
      out << (i ? ", " : "") << a.params[i].name << ':' << a.params[i].type;
    }
    out << ")\n      pre:";
    for (const auto& l : a.precondition) out << ' ' << literal_text(l);
    out << "\n      add:";
    for (const auto& l : a.effect) {
      if (l.positive) out << ' ' << literal_text(l);
    }
    out << "\n      del:";
    for (const auto& l : a.effect) {
      if (!l.positive) out << ' ' << to_string(Atom{l.predicate, l.args});
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace twinloop::pddl
