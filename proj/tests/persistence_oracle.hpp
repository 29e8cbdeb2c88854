#pragma once

// Runs one random world script twice: once with persistent(r), once with an
// oracle that re-inserts a fresh copy of r at the start of each instant after
// the previous copy terminated. Both runs must produce the same trace.

#include "overlap/rules.hpp"

#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace overlap::oracle {

struct WorldScript {
    int instants = 10;
    std::vector<std::uint32_t> rule_fitness;  // per instant, for r
    std::vector<std::uint32_t> other_fitness; // per instant, for a competitor
    std::vector<std::uint32_t> wait_fitness;  // per instant, for r's inner wait
    int action_shape = 0;                     // 0 atomic, 1 wait(), 2 wait(cond)
    rules::ConflictPolicy policy = rules::AllBest{};
    std::uint64_t seed = 0;
};

inline WorldScript random_script(std::uint32_t seed, int instants = 10)
{
    std::mt19937 gen(seed);
    std::uniform_int_distribution<std::uint32_t> fit(0, 3);
    std::uniform_int_distribution<int> shape(0, 2);
    std::uniform_int_distribution<int> policy(0, 3);
    WorldScript w;
    w.instants = instants;
    for (int i = 0; i < instants; ++i) {
        w.rule_fitness.push_back(fit(gen));
        w.other_fitness.push_back(fit(gen));
        w.wait_fitness.push_back(fit(gen));
    }
    w.action_shape = shape(gen);
    switch (policy(gen)) {
    case 0: w.policy = rules::AllBest{}; break;
    case 1: w.policy = rules::RandBest{}; break;
    case 2: w.policy = rules::AllDownTo{rules::Fitness{fit(gen)}}; break;
    default: w.policy = rules::RandDownTo{rules::Fitness{fit(gen)}}; break;
    }
    w.seed = gen();
    return w;
}

using Trace = std::vector<std::string>;

namespace detail {

struct ScriptedRun {
    Trace trace;
    int instant = 0;
};

inline rules::Rule scripted_rule(const WorldScript& w, const std::shared_ptr<ScriptedRun>& run)
{
    namespace rx = overlap::reactive;
    auto cond = [w, run] { return rules::Fitness{w.rule_fitness[run->instant]}; };
    auto emit = [run](std::string what) {
        return rx::effect([run, what] {
            run->trace.push_back(std::to_string(run->instant) + ":" + what);
        });
    };
    rx::Program action;
    switch (w.action_shape) {
    case 0: action = emit("r"); break;
    case 1: action = rx::seq({emit("r1"), rules::wait(), emit("r2")}); break;
    default:
        action = rx::seq({emit("r1"),
                          rules::wait([w, run] { return rules::Fitness{w.wait_fitness[run->instant]}; }),
                          emit("r2")});
        break;
    }
    return rules::Rule{cond, action};
}

inline rules::Rule competitor(const WorldScript& w, const std::shared_ptr<ScriptedRun>& run)
{
    namespace rx = overlap::reactive;
    return rules::persistent(rules::Rule{
        [w, run] { return rules::Fitness{w.other_fitness[run->instant]}; },
        rx::effect([run] { run->trace.push_back(std::to_string(run->instant) + ":o"); }),
    });
}

} // namespace detail

inline Trace run_persistent(const WorldScript& w)
{
    auto run = std::make_shared<detail::ScriptedRun>();
    rules::RuleEngine engine(w.seed);
    engine.add_rule(detail::competitor(w, run));
    engine.add_rule(rules::persistent(detail::scripted_rule(w, run)));
    for (run->instant = 0; run->instant < w.instants; ++run->instant)
        engine.monitor(w.policy);
    return run->trace;
}

inline Trace run_reinsertion(const WorldScript& w)
{
    namespace rx = overlap::reactive;
    auto run = std::make_shared<detail::ScriptedRun>();
    auto live = std::make_shared<bool>(false);
    rules::RuleEngine engine(w.seed);
    engine.add_rule(detail::competitor(w, run));
    const auto base = detail::scripted_rule(w, run);
    const rules::Rule tracked{base.cond,
                              rx::seq(base.action, rx::effect([live] { *live = false; }))};
    for (run->instant = 0; run->instant < w.instants; ++run->instant) {
        if (!*live) {
            engine.add_rule(tracked);
            *live = true;
        }
        engine.monitor(w.policy);
    }
    return run->trace;
}

} // namespace overlap::oracle
