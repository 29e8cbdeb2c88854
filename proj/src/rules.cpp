#include "overlap/rules.hpp"

#include <algorithm>
#include <charconv>
#include <utility>

namespace overlap::rules {

using reactive::Program;

// ---- policies -----------------------------------------------------------

namespace {

Fitness parse_threshold(const std::string& text, std::size_t offset)
{
    std::uint32_t value = 0;
    const char* first = text.data() + offset;
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || first == last)
        throw std::invalid_argument("bad policy threshold in '" + text + "'");
    return Fitness{value};
}

std::vector<FitnessEntry> pick_one(std::vector<FitnessEntry> candidates, Rng& rng)
{
    if (candidates.size() <= 1)
        return candidates;
    std::uniform_int_distribution<std::size_t> index(0, candidates.size() - 1);
    return {candidates[index(rng)]};
}

std::vector<FitnessEntry> all_best(std::span<const FitnessEntry> registry)
{
    Fitness best{1};
    for (const auto& entry : registry)
        best = std::max(best, entry.fitness);
    std::vector<FitnessEntry> out;
    for (const auto& entry : registry)
        if (entry.fitness == best)
            out.push_back(entry);
    return out;
}

std::vector<FitnessEntry> all_down_to(std::span<const FitnessEntry> registry, Fitness threshold)
{
    const Fitness floor = std::max(threshold, Fitness{1});
    std::vector<FitnessEntry> out;
    for (const auto& entry : registry)
        if (entry.fitness >= floor)
            out.push_back(entry);
    return out;
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

} // namespace

ConflictPolicy parse_policy(const std::string& text)
{
    if (text == "allbest")
        return AllBest{};
    if (text == "randbest")
        return RandBest{};
    if (text.starts_with("alldownto:"))
        return AllDownTo{parse_threshold(text, 10)};
    if (text.starts_with("randdownto:"))
        return RandDownTo{parse_threshold(text, 11)};
    throw std::invalid_argument("unknown conflict policy '" + text + "'");
}

std::string to_string(const ConflictPolicy& policy)
{
    return std::visit(
        overloaded{
            [](AllBest) -> std::string { return "allbest"; },
            [](RandBest) -> std::string { return "randbest"; },
            [](AllDownTo p) { return "alldownto:" + std::to_string(p.threshold.value); },
            [](RandDownTo p) { return "randdownto:" + std::to_string(p.threshold.value); },
        },
        policy);
}

std::vector<FitnessEntry> compute_enabled(const ConflictPolicy& policy,
                                          std::span<const FitnessEntry> registry, Rng& rng)
{
    return std::visit(
        overloaded{
            [&](AllBest) { return all_best(registry); },
            [&](RandBest) { return pick_one(all_best(registry), rng); },
            [&](AllDownTo p) { return all_down_to(registry, p.threshold); },
            [&](RandDownTo p) { return pick_one(all_down_to(registry, p.threshold), rng); },
        },
        policy);
}

// ---- engine state -------------------------------------------------------

namespace detail {

struct EngineState {
    EngineState(std::uint64_t seed, std::size_t bound);

    Token register_fitness(Fitness fitness)
    {
        Token token{++last_token};
        registry.push_back({token, fitness});
        return token;
    }

    bool allowed(Token token) const
    {
        return std::any_of(registry.begin(), registry.end(),
                           [&](const FitnessEntry& e) { return e.token == token; });
    }

    std::vector<FitnessEntry> registry;
    Rng rng;
    std::uint64_t last_token = 0;
    ConflictPolicy policy = AllBest{};
    std::shared_ptr<reactive::BranchSet> rules = std::make_shared<reactive::BranchSet>();
    InstantReport report;
    bool in_monitor = false;
    reactive::Process root;

private:
    static Program build_root(EngineState* self, std::size_t bound);
};

} // namespace detail

namespace {

// The engine whose monitor() is currently running on this thread. Gates
// resolve their registry through it, so one rule value can be shared across
// engines.
thread_local detail::EngineState* current_engine = nullptr;

detail::EngineState& bound_engine()
{
    if (!current_engine)
        throw EngineMisuse("condition gate activated outside monitor()");
    return *current_engine;
}

class BindEngine {
public:
    explicit BindEngine(detail::EngineState& state) : previous_(std::exchange(current_engine, &state))
    {
        state.in_monitor = true;
    }
    ~BindEngine()
    {
        current_engine->in_monitor = false;
        current_engine = previous_;
    }
    BindEngine(const BindEngine&) = delete;
    BindEngine& operator=(const BindEngine&) = delete;

private:
    detail::EngineState* previous_;
};

Program gate(std::shared_ptr<const Condition> cond)
{
    return reactive::defer([cond] {
        auto token = std::make_shared<Token>();
        return reactive::seq({
            reactive::effect([cond, token] {
                auto& engine = bound_engine();
                *token = engine.register_fitness((*cond)());
            }),
            reactive::suspend_point(),
            reactive::defer([cond, token] {
                if (bound_engine().allowed(*token))
                    return reactive::nothing();
                return reactive::seq(reactive::stop_point(), gate(cond));
            }),
        });
    });
}

} // namespace

detail::EngineState::EngineState(std::uint64_t seed, std::size_t bound)
    : rng(seed), root(build_root(this, bound))
{
}

Program detail::EngineState::build_root(EngineState* self, std::size_t bound)
{
    using namespace reactive;
    Program clear_registry = loop(seq(effect([self] { self->registry.clear(); }), stop_point()));
    Program select = loop(seq(effect([self] {
                                  self->report.registered = self->registry;
                                  self->registry =
                                      compute_enabled(self->policy, self->registry, self->rng);
                                  self->report.selected = self->registry;
                              }),
                              stop_point()));
    return close(merge(clear_registry, merge(merge_set(self->rules), select)), bound,
                 [self](std::size_t rounds) { self->report.rounds = rounds; });
}

// ---- public API ---------------------------------------------------------

Program condition_gate(Condition cond)
{
    return gate(std::make_shared<const Condition>(std::move(cond)));
}

Program wait(std::optional<Condition> cond)
{
    if (!cond)
        return reactive::seq(reactive::stop_point(), reactive::suspend_point());
    return reactive::seq(reactive::stop_point(), condition_gate(std::move(*cond)));
}

Rule persistent(const Rule& rule)
{
    return Rule{rule.cond, reactive::loop(reactive::seq(rule.action, wait(rule.cond)))};
}

RuleEngine::RuleEngine(std::uint64_t seed, std::size_t micro_round_bound)
    : state_(std::make_unique<detail::EngineState>(seed, micro_round_bound))
{
}

RuleEngine::~RuleEngine() = default;
RuleEngine::RuleEngine(RuleEngine&&) noexcept = default;
RuleEngine& RuleEngine::operator=(RuleEngine&&) noexcept = default;

RuleEngine& RuleEngine::add_rule(const Rule& rule)
{
    state_->rules->add(reactive::seq(condition_gate(rule.cond), rule.action));
    return *this;
}

void RuleEngine::monitor(const ConflictPolicy& policy)
{
    auto& state = *state_;
    if (state.in_monitor)
        throw EngineMisuse("monitor() re-entered on the same engine");
    BindEngine bind(state);
    state.policy = policy;
    state.rules->commit();
    state.report = InstantReport{};
    state.root.react();
    state.report.instant = state.root.instant();
    state.rules->prune();
}

std::size_t RuleEngine::size() const noexcept
{
    return state_->rules->live() + state_->rules->pending();
}

const InstantReport& RuleEngine::last_instant() const noexcept
{
    return state_->report;
}

RuleEngine mk_set(std::span<const Rule> rules, std::uint64_t seed)
{
    RuleEngine engine(seed);
    for (const auto& rule : rules)
        engine.add_rule(rule);
    return engine;
}

} // namespace overlap::rules
