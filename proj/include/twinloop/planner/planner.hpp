#pragma once

#include <cstddef>
#include <map>
#include <string>

#include "twinloop/pddl/ast.hpp"

namespace twinloop::planner {

enum class SearchMode {
  kOptimal,  // breadth-first, shortest plan
  kGreedy,   // A* ordered by g + (unsatisfied goal atoms)
};

struct SearchConfig {
  SearchMode mode = SearchMode::kOptimal;
  std::size_t node_budget = 1'000'000;  // expanded states
};

struct SearchStats {
  std::size_t expanded = 0;
  std::size_t generated = 0;
};

/// Optimal mode is used for up to this many blocks.
inline constexpr std::size_t kOptimalBlockLimit = 5;

SearchMode default_mode(std::size_t block_count);

/// Forward state-space search. Successors are generated in lexicographic
/// (action name, arguments) order and ties keep generation order, so equal
/// inputs yield identical plans; in optimal mode the result is the
/// lexicographically smallest shortest plan.
///
/// Throws Error(kUnsolvable) when the reachable state space holds no goal
/// state, Error(kBudgetExceeded) when the expansion budget runs out first.
pddl::Plan solve(const pddl::Domain& domain, const pddl::Problem& problem,
                 const SearchConfig& config = {}, SearchStats* stats = nullptr);

struct PlanStats {
  std::size_t length = 0;
  std::map<std::string, std::size_t> per_action;
};

PlanStats plan_stats(const pddl::Plan& plan);

std::string_view to_string(SearchMode mode);

}  // namespace twinloop::planner
