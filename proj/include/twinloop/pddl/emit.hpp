#pragma once

#include <string>

#include "twinloop/pddl/ast.hpp"

namespace twinloop::pddl {

/// Canonical text: objects grouped by type (types and names sorted), atoms
/// in sorted order. parse_problem(emit_problem(p), d) == p.
std::string emit_problem(const Problem& problem);

/// Declaration order is preserved. parse_domain(emit_domain(d)) == d.
std::string emit_domain(const Domain& domain);

/// One "(action args...)" per line.
std::string emit_plan(const Plan& plan);

/// Indented structural dump used for golden snapshots.
std::string dump_ast(const Domain& domain);

}  // namespace twinloop::pddl
