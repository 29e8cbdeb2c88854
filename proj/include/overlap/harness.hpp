#pragma once

// Scenario runner: goals and behaviors over a flag-store world, driven one
// instant at a time with a deterministic trace.

#include "overlap/behavior.hpp"
#include "overlap/rules.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace overlap::harness {

/// Malformed or inconsistent scenario input.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Boolean expression over named flags: names, true, false, !, &&, ||, ().
class FlagExpr {
public:
    static FlagExpr parse(const std::string& text);

    bool eval(const std::map<std::string, bool>& flags) const;
    /// Flag names referenced, in first-occurrence order.
    const std::vector<std::string>& flags() const noexcept { return names_; }
    const std::string& text() const noexcept { return text_; }

    struct Node;

private:
    std::shared_ptr<const Node> root_;
    std::vector<std::string> names_;
    std::string text_;
};

struct ActionSpec {
    std::string name;
    std::vector<std::string> args;
};

struct StepSpec {
    // Exactly one of these is set.
    std::optional<std::string> subgoal;
    std::optional<ActionSpec> action;
};

struct BehaviorSpec {
    std::string name;
    std::string goal;
    std::optional<FlagExpr> precond;
    behavior::BehaviorKind kind = behavior::BehaviorKind::sequential;
    bool persistent = false;
    std::vector<StepSpec> steps;
};

struct ScriptEntry {
    std::uint64_t instant = 1;
    std::vector<std::pair<std::string, bool>> assignments;
    /// Externally decided goal outcomes (Success or Failure), applied after
    /// the flag assignments. Stands in for an action server reporting back.
    std::vector<std::pair<std::string, goals::GoalStatus>> outcomes;
};

struct Scenario {
    std::uint64_t seed = 0;
    rules::ConflictPolicy policy = rules::AllBest{};
    std::uint64_t max_instants = 100;
    std::map<std::string, bool> flags;
    std::vector<std::string> root_goals;
    std::vector<BehaviorSpec> behaviors;
    std::vector<ScriptEntry> script;
};

/// Parses scenario JSON text and validates it.
Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::filesystem::path& path);
/// Checks cross-references: flags, action names and arities, script order.
void validate(const Scenario& scenario);

/// Names accepted in ActionSpec::name.
const std::vector<std::string>& builtin_action_names();

struct World {
    std::map<std::string, bool> flags;
    std::vector<std::string> events;
};

/// Looks up a built-in primitive; the returned procedure acts on `world`.
std::function<bool()> builtin_action(const ActionSpec& spec, World& world);

struct TraceLine {
    std::uint64_t instant = 0;
    std::vector<std::string> events;
};

struct RunResult {
    std::vector<TraceLine> lines;
    std::vector<std::pair<std::string, goals::GoalStatus>> finals;
    /// Largest close round count over all instants.
    std::size_t max_rounds = 0;
};

/// Runs to completion (all root goals done) or max_instants. Engine errors
/// propagate as exceptions.
RunResult run_scenario(const Scenario& scenario);

/// `instant=<n> events=[e1;e2;...]` per line, then `final <goal>=<status>`.
void write_trace(std::ostream& out, const RunResult& result);
std::string format_trace(const RunResult& result);

/// Euclid by repeated subtraction, as two persistent rules under AllBest.
std::uint64_t run_gcd(std::uint64_t x, std::uint64_t y);

} // namespace overlap::harness
