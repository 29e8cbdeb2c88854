#pragma once

// Declarative agent behaviors compiled into rules over a goal store.

#include "overlap/goals.hpp"
#include "overlap/rules.hpp"

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace overlap::behavior {

enum class BehaviorKind { sequential, concurrent };

struct Subgoal {
    std::string name;
};

struct Action {
    std::function<bool()> act;
};

using BehaviorStep = std::variant<Subgoal, Action>;

struct Behavior {
    std::string goal;
    std::optional<std::function<bool()>> precond;
    BehaviorKind kind = BehaviorKind::sequential;
    std::vector<BehaviorStep> steps;
};

/// Partitions steps into subgoal names and actions, keeping relative order.
std::pair<std::vector<std::string>, std::vector<std::function<bool()>>>
split_steps(const std::vector<BehaviorStep>& steps);

/// The rule fires when the behavior's goal is Available and its precondition
/// holds. Its action marks the goal Active, then pursues the steps, finally
/// recording Success or Failure on the goal.
///
/// Action results are ignored: only subgoal outcomes decide the goal.
/// `store` must outlive every engine holding the rule.
rules::Rule behavior_rule(const Behavior& behavior, goals::GoalStore& store);

} // namespace overlap::behavior
