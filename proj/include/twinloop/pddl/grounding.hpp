#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "twinloop/pddl/ast.hpp"

namespace twinloop::pddl {

/// Every type-respecting instantiation of every action schema over the
/// problem's objects, sorted by (name, args). Parameters always bind
/// pairwise-distinct objects, which removes e.g. (stack a a).
std::vector<GroundAction> ground(const Domain& domain, const Problem& problem);

/// Binds one plan step. Throws Error(kUnknownAction | kArityMismatch |
/// kUnknownObjectType).
GroundAction instantiate(const Domain& domain, const Problem& problem, const ActionCall& call);

bool applicable(const AtomSet& state, const GroundAction& action);

/// (state - del) + add. Throws Error(kPreconditionUnsatisfied) naming the
/// first missing precondition atom, in schema order.
AtomSet apply(const AtomSet& state, const GroundAction& action);

struct PlanValidation {
  bool valid = false;
  std::optional<std::size_t> failed_step;  // == plan size when only the goal is missed
  std::string reason;
  std::vector<AtomSet> trace;  // init followed by the state after each applied step
};

PlanValidation validate_plan(const Domain& domain, const Problem& problem, const Plan& plan);

}  // namespace twinloop::pddl
