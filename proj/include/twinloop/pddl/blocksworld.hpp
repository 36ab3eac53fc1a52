#pragma once

#include <string_view>

#include "twinloop/pddl/ast.hpp"

namespace twinloop::pddl {

/// Text of data/pddl/blocksworld.pddl, compiled in: the four classic
/// Blocksworld actions plus `place` and `pick-from-pos` over named positions.
std::string_view extended_blocksworld_text();

/// Parsed once on first use.
const Domain& extended_blocksworld();

}  // namespace twinloop::pddl
