#pragma once

#include <string_view>

#include "twinloop/pddl/ast.hpp"

// STRIPS + typing subset of PDDL. Keywords are case-insensitive, identifiers
// keep their case. Requirement flags are recorded but not interpreted.
namespace twinloop::pddl {

/// Throws Error with one of kSyntaxError, kUndeclaredType, kUndeclaredVariable,
/// kArityMismatch, kUnknownPredicate, kTypeError, kUnsupportedFeature.
Domain parse_domain(std::string_view text);

/// Throws Error with one of kSyntaxError, kUnknownPredicate,
/// kUnknownObjectType, kArityMismatch, kUnsupportedFeature.
Problem parse_problem(std::string_view text, const Domain& domain);

/// One "(action arg...)" per step; blank lines and `;` comments allowed.
Plan parse_plan(std::string_view text);

}  // namespace twinloop::pddl
