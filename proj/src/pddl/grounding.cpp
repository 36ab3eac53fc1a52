#include "twinloop/pddl/grounding.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "twinloop/common/error.hpp"

namespace twinloop::pddl {
namespace {

using Binding = std::map<std::string, std::string, std::less<>>;

Atom bind_literal(const Literal& literal, const Binding& binding) {
  Atom atom{literal.predicate, {}};
  atom.args.reserve(literal.args.size());
  for (const auto& var : literal.args) atom.args.push_back(binding.at(var));
  return atom;
}

GroundAction make_ground(const ActionSchema& schema, const std::vector<std::string>& args) {
  Binding binding;
  for (std::size_t i = 0; i < schema.params.size(); ++i) binding[schema.params[i].name] = args[i];

  GroundAction action;
  action.name = schema.name;
  action.args = args;
  for (const auto& lit : schema.precondition) action.precondition.push_back(bind_literal(lit, binding));
  for (const auto& lit : schema.effect) {
    (lit.positive ? action.add : action.del).push_back(bind_literal(lit, binding));
  }
  auto in_add = [&](const Atom& a) {
    return std::find(action.add.begin(), action.add.end(), a) != action.add.end();
  };
  std::erase_if(action.del, in_add);
  return action;
}

}  // namespace

std::vector<GroundAction> ground(const Domain& domain, const Problem& problem) {
  std::vector<GroundAction> out;
  for (const auto& schema : domain.actions) {
    std::vector<std::vector<std::string>> candidates;
    for (const auto& param : schema.params) {
      std::vector<std::string> fitting;
      for (const auto& [name, type] : problem.objects) {
        if (domain.is_subtype(type, param.type)) fitting.push_back(name);
      }
      candidates.push_back(std::move(fitting));
    }

    std::vector<std::string> args(schema.params.size());
    // Depth-first enumeration of distinct bindings.
    auto enumerate = [&](auto&& self, std::size_t depth) -> void {
      if (depth == args.size()) {
        out.push_back(make_ground(schema, args));
        return;
      }
      for (const auto& obj : candidates[depth]) {
        if (std::find(args.begin(), args.begin() + static_cast<std::ptrdiff_t>(depth), obj) !=
            args.begin() + static_cast<std::ptrdiff_t>(depth)) {
          continue;
        }
        args[depth] = obj;
        self(self, depth + 1);
      }
    };
    enumerate(enumerate, 0);
  }
  std::sort(out.begin(), out.end(), [](const GroundAction& a, const GroundAction& b) {
    return std::tie(a.name, a.args) < std::tie(b.name, b.args);
  });
  return out;
}

GroundAction instantiate(const Domain& domain, const Problem& problem, const ActionCall& call) {
  const ActionSchema* schema = domain.find_action(call.name);
  if (schema == nullptr) {
    throw Error(ErrorCode::kUnknownAction, "unknown action '" + call.name + "'");
  }
  if (schema->params.size() != call.args.size()) {
    throw Error(ErrorCode::kArityMismatch, "action '" + call.name + "' takes " +
                                                std::to_string(schema->params.size()) +
                                                " argument(s), got " + std::to_string(call.args.size()));
  }
  for (std::size_t i = 0; i < call.args.size(); ++i) {
    auto obj = problem.objects.find(call.args[i]);
    if (obj == problem.objects.end()) {
      throw Error(ErrorCode::kUnknownObjectType, "undeclared object '" + call.args[i] + "'");
    }
    if (!domain.is_subtype(obj->second, schema->params[i].type)) {
      throw Error(ErrorCode::kUnknownObjectType, "object '" + call.args[i] + "' is a " + obj->second +
                                                     ", expected " + schema->params[i].type);
    }
  }
  return make_ground(*schema, call.args);
}

bool applicable(const AtomSet& state, const GroundAction& action) {
  return std::all_of(action.precondition.begin(), action.precondition.end(),
                     [&](const Atom& a) { return state.count(a) != 0; });
}

AtomSet apply(const AtomSet& state, const GroundAction& action) {
  for (const auto& atom : action.precondition) {
    if (state.count(atom) == 0) {
      throw Error(ErrorCode::kPreconditionUnsatisfied, to_string(atom));
    }
  }
  AtomSet next = state;
  for (const auto& atom : action.del) next.erase(atom);
  for (const auto& atom : action.add) next.insert(atom);
  return next;
}

PlanValidation validate_plan(const Domain& domain, const Problem& problem, const Plan& plan) {
  PlanValidation result;
  AtomSet state = problem.init;
  result.trace.push_back(state);
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    try {
      state = pddl::apply(state, instantiate(domain, problem, plan.steps[i]));
    } catch (const Error& e) {
      result.failed_step = i;
      result.reason = to_string(plan.steps[i]) + ": " + std::string(to_string(e.code())) + " " + e.what();
      return result;
    }
    result.trace.push_back(state);
  }
  for (const auto& atom : problem.goal) {
    if (state.count(atom) == 0) {
      result.failed_step = plan.steps.size();
      result.reason = "goal atom " + to_string(atom) + " not reached";
      return result;
    }
  }
  result.valid = true;
  return result;
}

}  // namespace twinloop::pddl
