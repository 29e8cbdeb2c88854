#include "overlap/behavior.hpp"

#include <algorithm>
#include <memory>

namespace overlap::behavior {

using goals::GoalStatus;
using goals::GoalStore;
using reactive::Program;
namespace rx = overlap::reactive;

std::pair<std::vector<std::string>, std::vector<std::function<bool()>>>
split_steps(const std::vector<BehaviorStep>& steps)
{
    std::pair<std::vector<std::string>, std::vector<std::function<bool()>>> out;
    for (const auto& step : steps) {
        if (const auto* sub = std::get_if<Subgoal>(&step))
            out.first.push_back(sub->name);
        else
            out.second.push_back(std::get<Action>(step).act);
    }
    return out;
}

namespace {

struct Compiled {
    std::string goal;
    std::vector<BehaviorStep> steps;
    GoalStore* store;
};

using Shared = std::shared_ptr<const Compiled>;

Program perform_steps(const Shared& b, std::size_t index);

Program perform_subgoal(const Shared& b, const std::string& subgoal, std::size_t index)
{
    GoalStore* store = b->store;
    return rx::seq({
        rx::effect([store, subgoal] { store->set(subgoal); }),
        rules::wait([store, subgoal] { return rules::fitness_of(store->is_done(subgoal)); }),
        rx::defer([b, store, subgoal, index] {
            if (store->status(subgoal) == GoalStatus::success)
                return rx::seq(rx::effect([store, subgoal] { store->clear(subgoal); }),
                               perform_steps(b, index + 1));
            return rx::effect([store, subgoal, goal = b->goal] {
                store->clear(subgoal);
                store->fail(goal);
            });
        }),
    });
}

Program perform_steps(const Shared& b, std::size_t index)
{
    if (index == b->steps.size())
        return rx::effect([store = b->store, goal = b->goal] { store->succeed(goal); });
    const auto& step = b->steps[index];
    if (const auto* sub = std::get_if<Subgoal>(&step))
        return perform_subgoal(b, sub->name, index);
    return rx::seq({
        rx::effect([act = std::get<Action>(step).act] { act(); }),
        rules::wait(),
        rx::defer([b, index] { return perform_steps(b, index + 1); }),
    });
}

Program concurrent_action(const Shared& b)
{
    auto [subgoals, actions] = split_steps(b->steps);
    auto names = std::make_shared<const std::vector<std::string>>(std::move(subgoals));
    GoalStore* store = b->store;
    return rx::seq({
        rx::effect([store, names, actions = std::move(actions)] {
            for (const auto& g : *names)
                store->set(g);
            for (const auto& act : actions)
                act();
        }),
        rules::wait([store, names] {
            return rules::fitness_of(std::all_of(names->begin(), names->end(),
                                                 [&](const auto& g) { return store->is_done(g); }));
        }),
        rx::effect([store, names, goal = b->goal] {
            bool all_success = std::all_of(names->begin(), names->end(), [&](const auto& g) {
                return store->status(g) == GoalStatus::success;
            });
            for (const auto& g : *names)
                store->clear(g);
            if (all_success)
                store->succeed(goal);
            else
                store->fail(goal);
        }),
    });
}

} // namespace

rules::Rule behavior_rule(const Behavior& behavior, GoalStore& store)
{
    auto compiled = std::make_shared<const Compiled>(Compiled{behavior.goal, behavior.steps, &store});

    rules::Condition cond = [store = &store, goal = behavior.goal, precond = behavior.precond] {
        return rules::fitness_of(store->is_available(goal) && (!precond || (*precond)()));
    };

    // Under AllBest two behaviors for one goal can both fire in the same
    // instant; only the first one marks it.
    Program adopt = rx::effect([store = &store, goal = behavior.goal] {
        if (store->is_available(goal))
            store->mark_active(goal);
    });

    Program body = behavior.kind == BehaviorKind::sequential
                       ? rx::defer([compiled] { return perform_steps(compiled, 0); })
                       : rx::defer([compiled] { return concurrent_action(compiled); });
    return rules::Rule{std::move(cond), rx::seq(std::move(adopt), std::move(body))};
}

} // namespace overlap::behavior
