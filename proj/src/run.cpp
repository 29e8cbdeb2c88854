#include "overlap/harness.hpp"

#include <algorithm>
#include <ostream>
#include <set>
#include <sstream>

namespace overlap::harness {

namespace rx = overlap::reactive;

std::function<bool()> builtin_action(const ActionSpec& spec, World& world)
{
    World* w = &world;
    if (spec.name == "emit" && spec.args.size() == 1)
        return [w, message = spec.args[0]] {
            w->events.push_back(message);
            return true;
        };
    if (spec.name == "set-flag" && spec.args.size() == 2)
        return [w, flag = spec.args[0], value = spec.args[1] == "true"] {
            w->flags[flag] = value;
            w->events.push_back("flag:" + flag + "=" + (value ? "true" : "false"));
            return true;
        };
    if (spec.name == "succeed-always" && spec.args.empty())
        return [] { return true; };
    if (spec.name == "check-flag" && spec.args.size() == 1)
        return [w, flag = spec.args[0]] {
            auto it = w->flags.find(flag);
            return it != w->flags.end() && it->second;
        };
    throw ValidationError("unknown action '" + spec.name + "' with " +
                          std::to_string(spec.args.size()) + " argument(s)");
}

namespace {

behavior::Behavior compile(const BehaviorSpec& spec, World& world)
{
    behavior::Behavior b;
    b.goal = spec.goal;
    b.kind = spec.kind;
    if (spec.precond)
        b.precond = [w = &world, expr = *spec.precond] { return expr.eval(w->flags); };
    for (const auto& step : spec.steps) {
        if (step.subgoal)
            b.steps.emplace_back(behavior::Subgoal{*step.subgoal});
        else
            b.steps.emplace_back(behavior::Action{builtin_action(*step.action, world)});
    }
    return b;
}

bool all_done(const goals::GoalStore& store, const std::vector<std::string>& names)
{
    return std::all_of(names.begin(), names.end(),
                       [&](const auto& g) { return store.is_done(g); });
}

} // namespace

RunResult run_scenario(const Scenario& scenario)
{
    validate(scenario);

    World world{scenario.flags, {}};
    goals::GoalStore store;
    rules::RuleEngine engine(scenario.seed);

    for (const auto& spec : scenario.behaviors) {
        auto rule = behavior::behavior_rule(compile(spec, world), store);
        // Announce the firing before the compiled action touches the store.
        rule.action = rx::seq(rx::effect([w = &world, name = spec.name] {
                                  w->events.push_back("fire:" + name);
                              }),
                              rule.action);
        engine.add_rule(spec.persistent ? rules::persistent(rule) : rule);
    }
    for (const auto& goal : scenario.root_goals)
        store.set(goal);
    store.observe([w = &world](const std::string& goal, goals::GoalStatus status) {
        w->events.push_back(goal + ":" + goals::to_string(status));
    });

    RunResult result;
    auto next_script = scenario.script.begin();
    for (std::uint64_t instant = 1; instant <= scenario.max_instants; ++instant) {
        world.events.clear();
        for (; next_script != scenario.script.end() && next_script->instant == instant; ++next_script) {
            for (const auto& [flag, value] : next_script->assignments) {
                world.flags[flag] = value;
                world.events.push_back("script:" + flag + "=" + (value ? "true" : "false"));
            }
            for (const auto& [goal, status] : next_script->outcomes) {
                if (status == goals::GoalStatus::success)
                    store.succeed(goal);
                else
                    store.fail(goal);
            }
        }
        engine.monitor(scenario.policy);
        result.max_rounds = std::max(result.max_rounds, engine.last_instant().rounds);
        result.lines.push_back({instant, world.events});
        if (!scenario.root_goals.empty() && all_done(store, scenario.root_goals))
            break;
    }

    std::set<std::string> reported;
    for (const auto& goal : scenario.root_goals)
        if (reported.insert(goal).second)
            result.finals.emplace_back(goal, store.status(goal));
    for (const auto& [goal, status] : store.goals())
        if (reported.insert(goal).second)
            result.finals.emplace_back(goal, status);
    return result;
}

void write_trace(std::ostream& out, const RunResult& result)
{
    for (const auto& line : result.lines) {
        out << "instant=" << line.instant << " events=[";
        for (std::size_t i = 0; i < line.events.size(); ++i)
            out << (i ? ";" : "") << line.events[i];
        out << "]\n";
    }
    for (const auto& [goal, status] : result.finals)
        out << "final " << goal << "=" << goals::to_string(status) << "\n";
}

std::string format_trace(const RunResult& result)
{
    std::ostringstream out;
    write_trace(out, result);
    return out.str();
}

std::uint64_t run_gcd(std::uint64_t x, std::uint64_t y)
{
    if (x == 0 || y == 0)
        throw std::invalid_argument("gcd arguments must be positive");
    auto rx_cell = std::make_shared<std::uint64_t>(x);
    auto ry_cell = std::make_shared<std::uint64_t>(y);

    auto subtract = [](std::shared_ptr<std::uint64_t> r1, std::shared_ptr<std::uint64_t> r2) {
        return rules::persistent(rules::Rule{
            [r1, r2] { return rules::fitness_of(*r1 > *r2); },
            rx::effect([r1, r2] { *r1 -= *r2; }),
        });
    };
    const rules::Rule set[] = {subtract(rx_cell, ry_cell), subtract(ry_cell, rx_cell)};
    auto engine = rules::mk_set(set);
    while (*rx_cell != *ry_cell)
        engine.monitor(rules::AllBest{});
    return *rx_cell;
}

} // namespace overlap::harness
