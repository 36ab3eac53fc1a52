#include "twinloop/planner/planner.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <queue>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "twinloop/common/error.hpp"
#include "twinloop/pddl/grounding.hpp"

namespace twinloop::planner {
namespace {

using Bits = std::vector<std::uint64_t>;

struct BitsHash {
  std::size_t operator()(const Bits& bits) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (auto w : bits) {
      h ^= std::hash<std::uint64_t>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};

struct CompiledAction {
  Bits pre;
  Bits add;
  Bits del;
};

class Task {
 public:
  Task(const pddl::Domain& domain, const pddl::Problem& problem)
      : actions_(pddl::ground(domain, problem)) {
    for (const auto& a : problem.init) intern(a);
    for (const auto& a : problem.goal) intern(a);
    for (const auto& ga : actions_) {
      for (const auto& a : ga.precondition) intern(a);
      for (const auto& a : ga.add) intern(a);
      for (const auto& a : ga.del) intern(a);
    }
    words_ = (ids_.size() + 63) / 64;

    init_ = mask(problem.init.begin(), problem.init.end());
    goal_ = mask(problem.goal.begin(), problem.goal.end());
    compiled_.reserve(actions_.size());
    for (const auto& ga : actions_) {
      compiled_.push_back({mask(ga.precondition.begin(), ga.precondition.end()),
                           mask(ga.add.begin(), ga.add.end()), mask(ga.del.begin(), ga.del.end())});
    }
  }

  const Bits& init() const { return init_; }
  std::size_t action_count() const { return compiled_.size(); }
  const pddl::GroundAction& action(std::size_t i) const { return actions_[i]; }

  bool satisfies_goal(const Bits& state) const { return covers(state, goal_); }

  std::size_t unsatisfied_goals(const Bits& state) const {
    std::size_t count = 0;
    for (std::size_t w = 0; w < words_; ++w) {
      count += static_cast<std::size_t>(__builtin_popcountll(goal_[w] & ~state[w]));
    }
    return count;
  }

  bool applicable(const Bits& state, std::size_t i) const { return covers(state, compiled_[i].pre); }

  Bits successor(const Bits& state, std::size_t i) const {
    Bits next = state;
    const auto& a = compiled_[i];
    for (std::size_t w = 0; w < words_; ++w) next[w] = (next[w] & ~a.del[w]) | a.add[w];
    return next;
  }

 private:
  void intern(const pddl::Atom& atom) { ids_.emplace(atom, ids_.size()); }

  template <class It>
  Bits mask(It first, It last) const {
    Bits bits(words_, 0);
    for (; first != last; ++first) {
      const std::size_t id = ids_.at(*first);
      bits[id / 64] |= std::uint64_t{1} << (id % 64);
    }
    return bits;
  }

  bool covers(const Bits& state, const Bits& required) const {
    for (std::size_t w = 0; w < words_; ++w) {
      if ((state[w] & required[w]) != required[w]) return false;
    }
    return true;
  }

  std::vector<pddl::GroundAction> actions_;
  std::map<pddl::Atom, std::size_t> ids_;
  std::size_t words_ = 0;
  Bits init_;
  Bits goal_;
  std::vector<CompiledAction> compiled_;
};

struct Node {
  Bits state;
  std::size_t parent;
  std::size_t action;
  std::size_t depth;
};

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

pddl::Plan extract_plan(const Task& task, const std::vector<Node>& nodes, std::size_t leaf) {
  pddl::Plan plan;
  for (std::size_t i = leaf; nodes[i].parent != kNone; i = nodes[i].parent) {
    plan.steps.push_back(task.action(nodes[i].action).call());
  }
  std::reverse(plan.steps.begin(), plan.steps.end());
  return plan;
}

[[noreturn]] void budget_exceeded(std::size_t budget) {
  throw Error(ErrorCode::kBudgetExceeded,
              "search stopped after expanding " + std::to_string(budget) + " states");
}

pddl::Plan breadth_first(const Task& task, std::size_t budget, SearchStats& stats) {
  std::vector<Node> nodes;
  std::unordered_map<Bits, std::size_t, BitsHash> seen;
  nodes.push_back({task.init(), kNone, kNone, 0});
  seen.emplace(task.init(), 0);
  if (task.satisfies_goal(task.init())) return {};

  for (std::size_t head = 0; head < nodes.size(); ++head) {
    if (stats.expanded >= budget) budget_exceeded(budget);
    ++stats.expanded;
    for (std::size_t a = 0; a < task.action_count(); ++a) {
      if (!task.applicable(nodes[head].state, a)) continue;
      Bits next = task.successor(nodes[head].state, a);
      ++stats.generated;
      if (seen.count(next) != 0) continue;
      const std::size_t index = nodes.size();
      seen.emplace(next, index);
      nodes.push_back({std::move(next), head, a, nodes[head].depth + 1});
      if (task.satisfies_goal(nodes.back().state)) return extract_plan(task, nodes, index);
    }
  }
  throw Error(ErrorCode::kUnsolvable, "no reachable state satisfies the goal");
}

pddl::Plan best_first(const Task& task, std::size_t budget, SearchStats& stats) {
  // (f, h, insertion order, node)
  using Entry = std::tuple<std::size_t, std::size_t, std::size_t, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  std::vector<Node> nodes;
  std::unordered_map<Bits, std::size_t, BitsHash> best_g;

  nodes.push_back({task.init(), kNone, kNone, 0});
  best_g.emplace(task.init(), 0);
  const std::size_t h0 = task.unsatisfied_goals(task.init());
  open.emplace(h0, h0, 0, 0);

  while (!open.empty()) {
    const auto [f, h, order, index] = open.top();
    open.pop();
    (void)f;
    (void)h;
    (void)order;
    const std::size_t g = nodes[index].depth;
    if (best_g.at(nodes[index].state) < g) continue;  // superseded entry
    if (task.satisfies_goal(nodes[index].state)) return extract_plan(task, nodes, index);

    if (stats.expanded >= budget) budget_exceeded(budget);
    ++stats.expanded;
    for (std::size_t a = 0; a < task.action_count(); ++a) {
      if (!task.applicable(nodes[index].state, a)) continue;
      Bits next = task.successor(nodes[index].state, a);
      ++stats.generated;
      auto it = best_g.find(next);
      if (it != best_g.end() && it->second <= g + 1) continue;
      const std::size_t hn = task.unsatisfied_goals(next);
      if (it == best_g.end()) {
        best_g.emplace(next, g + 1);
      } else {
        it->second = g + 1;
      }
      nodes.push_back({std::move(next), index, a, g + 1});
      open.emplace(g + 1 + hn, hn, nodes.size() - 1, nodes.size() - 1);
    }
  }
  throw Error(ErrorCode::kUnsolvable, "no reachable state satisfies the goal");
}

}  // namespace

SearchMode default_mode(std::size_t block_count) {
  return block_count <= kOptimalBlockLimit ? SearchMode::kOptimal : SearchMode::kGreedy;
}

std::string_view to_string(SearchMode mode) {
  return mode == SearchMode::kOptimal ? "optimal" : "greedy";
}

pddl::Plan solve(const pddl::Domain& domain, const pddl::Problem& problem, const SearchConfig& config,
                 SearchStats* stats) {
  if (config.node_budget == 0) {
    throw Error(ErrorCode::kBadArguments, "node budget must be positive");
  }
  const Task task(domain, problem);
  SearchStats local;
  SearchStats& s = stats != nullptr ? *stats : local;
  s = {};
  return config.mode == SearchMode::kOptimal ? breadth_first(task, config.node_budget, s)
                                             : best_first(task, config.node_budget, s);
}

PlanStats plan_stats(const pddl::Plan& plan) {
  PlanStats stats;
  stats.length = plan.size();
  for (const auto& step : plan.steps) ++stats.per_action[step.name];
  return stats;
}

}  // namespace twinloop::planner
