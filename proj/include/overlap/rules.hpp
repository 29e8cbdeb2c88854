#pragma once

// OPS-style rules over the reactive kernel: integer fitness, four conflict
// resolution policies, non-persistent firing, and the wait primitive that lets
// a rule's action span several instants.

#include "overlap/reactive.hpp"

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace overlap::rules {

/// Degree to which a condition holds. Zero means "not enabled".
struct Fitness {
    std::uint32_t value = 0;

    constexpr bool enabled() const noexcept { return value >= 1; }
    constexpr auto operator<=>(const Fitness&) const = default;
};

inline constexpr Fitness disabled{0};

constexpr Fitness fitness_of(bool holds) noexcept
{
    return Fitness{holds ? 1u : 0u};
}

using Condition = std::function<Fitness()>;

struct Rule {
    Condition cond;
    reactive::Program action;
};

/// Identifies one registration of a condition gate within an engine.
struct Token {
    std::uint64_t id = 0;
    constexpr auto operator<=>(const Token&) const = default;
};

struct FitnessEntry {
    Token token;
    Fitness fitness;
    constexpr bool operator==(const FitnessEntry&) const = default;
};

struct AllBest {
    constexpr bool operator==(const AllBest&) const = default;
};
struct RandBest {
    constexpr bool operator==(const RandBest&) const = default;
};
struct AllDownTo {
    Fitness threshold;
    constexpr bool operator==(const AllDownTo&) const = default;
};
struct RandDownTo {
    Fitness threshold;
    constexpr bool operator==(const RandDownTo&) const = default;
};

using ConflictPolicy = std::variant<AllBest, RandBest, AllDownTo, RandDownTo>;

/// Parses "allbest", "randbest", "alldownto:<v>" or "randdownto:<v>".
ConflictPolicy parse_policy(const std::string& text);
std::string to_string(const ConflictPolicy& policy);

/// mt19937_64; uniform picks use std::uniform_int_distribution, so traces
/// are reproducible per seed within one standard-library build.
using Rng = std::mt19937_64;

/// Filters a registry down to the entries allowed to proceed this instant.
/// Registry order is preserved in the result.
std::vector<FitnessEntry> compute_enabled(const ConflictPolicy& policy,
                                          std::span<const FitnessEntry> registry, Rng& rng);

/// Thrown when a gate runs outside any monitor() call, or when monitor() is
/// re-entered on the same engine.
class EngineMisuse : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Blocks until the engine selects `cond` (internal building block of rules;
/// exposed for custom patterns).
reactive::Program condition_gate(Condition cond);

/// Pauses the enclosing action until the next instant. With a condition, the
/// remainder then behaves as a new rule guarded by it.
reactive::Program wait(std::optional<Condition> cond = std::nullopt);

/// Same condition; the action repeats forever, re-arming on the condition
/// after every run.
Rule persistent(const Rule& rule);

/// What happened during the most recent monitor() call.
struct InstantReport {
    std::uint64_t instant = 0;
    std::vector<FitnessEntry> registered;
    std::vector<FitnessEntry> selected;
    std::size_t rounds = 0;
};

namespace detail {
struct EngineState;
}

class RuleEngine {
public:
    explicit RuleEngine(std::uint64_t seed = 0,
                        std::size_t micro_round_bound = reactive::default_round_bound);
    ~RuleEngine();
    RuleEngine(RuleEngine&&) noexcept;
    RuleEngine& operator=(RuleEngine&&) noexcept;

    /// Appends a rule. Rules added from inside an action join at the next
    /// instant.
    RuleEngine& add_rule(const Rule& rule);

    /// Runs exactly one instant under `policy`.
    void monitor(const ConflictPolicy& policy);

    /// Number of live rule instances, including ones waiting to join.
    std::size_t size() const noexcept;
    const InstantReport& last_instant() const noexcept;

private:
    std::unique_ptr<detail::EngineState> state_;
};

inline RuleEngine new_set(std::uint64_t seed = 0)
{
    return RuleEngine(seed);
}

/// List order is activation order.
RuleEngine mk_set(std::span<const Rule> rules, std::uint64_t seed = 0);

inline RuleEngine& add_rule(const Rule& rule, RuleEngine& set)
{
    return set.add_rule(rule);
}

inline void monitor(const ConflictPolicy& policy, RuleEngine& set)
{
    set.monitor(policy);
}

} // namespace overlap::rules
