#include "overlap/harness.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace overlap::harness {

using json = nlohmann::ordered_json;

namespace {

struct Arity {
    const char* name;
    std::size_t args;
};

constexpr Arity builtin_arities[] = {
    {"emit", 1},
    {"set-flag", 2},
    {"succeed-always", 0},
    {"check-flag", 1},
};

void reject_unknown_keys(const json& object, std::initializer_list<const char*> allowed,
                         const std::string& where)
{
    for (const auto& [key, _] : object.items()) {
        bool known = std::any_of(allowed.begin(), allowed.end(),
                                 [&](const char* a) { return key == a; });
        if (!known)
            throw ValidationError(where + ": unknown field '" + key + "'");
    }
}

template <class T>
T field(const json& object, const char* key, const std::string& where)
{
    try {
        return object.at(key).get<T>();
    } catch (const json::exception&) {
        throw ValidationError(where + ": field '" + key + "' missing or of the wrong type");
    }
}

std::string arg_text(const json& value, const std::string& where)
{
    if (value.is_string())
        return value.get<std::string>();
    if (value.is_boolean())
        return value.get<bool>() ? "true" : "false";
    if (value.is_number_integer())
        return std::to_string(value.get<long long>());
    throw ValidationError(where + ": action arguments must be strings, booleans or integers");
}

StepSpec parse_step(const json& step, const std::string& where)
{
    if (!step.is_object())
        throw ValidationError(where + ": step must be an object");
    StepSpec out;
    if (step.contains("subgoal")) {
        reject_unknown_keys(step, {"subgoal"}, where);
        out.subgoal = field<std::string>(step, "subgoal", where);
        if (out.subgoal->empty())
            throw ValidationError(where + ": empty subgoal name");
        return out;
    }
    reject_unknown_keys(step, {"action", "args"}, where);
    ActionSpec action;
    action.name = field<std::string>(step, "action", where);
    if (step.contains("args")) {
        if (!step["args"].is_array())
            throw ValidationError(where + ": 'args' must be a list");
        for (const auto& arg : step["args"])
            action.args.push_back(arg_text(arg, where));
    }
    out.action = std::move(action);
    return out;
}

BehaviorSpec parse_behavior(const json& b, std::size_t index)
{
    const std::string where = "behaviors[" + std::to_string(index) + "]";
    if (!b.is_object())
        throw ValidationError(where + ": must be an object");
    reject_unknown_keys(b, {"name", "goal", "precond", "kind", "persistent", "steps"}, where);
    BehaviorSpec out;
    out.goal = field<std::string>(b, "goal", where);
    out.name = b.contains("name") ? field<std::string>(b, "name", where) : out.goal;
    if (b.contains("precond"))
        out.precond = FlagExpr::parse(field<std::string>(b, "precond", where));
    const auto kind = b.contains("kind") ? field<std::string>(b, "kind", where) : "sequential";
    if (kind == "sequential")
        out.kind = behavior::BehaviorKind::sequential;
    else if (kind == "concurrent")
        out.kind = behavior::BehaviorKind::concurrent;
    else
        throw ValidationError(where + ": kind must be 'sequential' or 'concurrent'");
    if (b.contains("persistent"))
        out.persistent = field<bool>(b, "persistent", where);
    if (b.contains("steps")) {
        if (!b["steps"].is_array())
            throw ValidationError(where + ": 'steps' must be a list");
        std::size_t i = 0;
        for (const auto& step : b["steps"])
            out.steps.push_back(parse_step(step, where + ".steps[" + std::to_string(i++) + "]"));
    }
    return out;
}

} // namespace

const std::vector<std::string>& builtin_action_names()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& a : builtin_arities)
            out.emplace_back(a.name);
        return out;
    }();
    return names;
}

Scenario parse_scenario(const std::string& json_text)
{
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("scenario is not valid JSON: ") + e.what());
    }
    if (!doc.is_object())
        throw ValidationError("scenario must be a JSON object");
    reject_unknown_keys(
        doc, {"seed", "policy", "maxInstants", "flags", "rootGoals", "behaviors", "script"},
        "scenario");

    Scenario s;
    if (doc.contains("seed"))
        s.seed = field<std::uint64_t>(doc, "seed", "scenario");
    if (doc.contains("policy")) {
        try {
            s.policy = rules::parse_policy(field<std::string>(doc, "policy", "scenario"));
        } catch (const std::invalid_argument& e) {
            throw ValidationError(e.what());
        }
    }
    if (doc.contains("maxInstants"))
        s.max_instants = field<std::uint64_t>(doc, "maxInstants", "scenario");
    if (doc.contains("flags"))
        s.flags = field<std::map<std::string, bool>>(doc, "flags", "scenario");
    if (doc.contains("rootGoals"))
        s.root_goals = field<std::vector<std::string>>(doc, "rootGoals", "scenario");
    if (doc.contains("behaviors")) {
        if (!doc["behaviors"].is_array())
            throw ValidationError("scenario: 'behaviors' must be a list");
        std::size_t i = 0;
        for (const auto& b : doc["behaviors"])
            s.behaviors.push_back(parse_behavior(b, i++));
    }
    if (doc.contains("script")) {
        if (!doc["script"].is_array())
            throw ValidationError("scenario: 'script' must be a list");
        std::size_t i = 0;
        for (const auto& entry : doc["script"]) {
            const std::string where = "script[" + std::to_string(i++) + "]";
            if (!entry.is_object())
                throw ValidationError(where + ": must be an object");
            reject_unknown_keys(entry, {"instant", "set", "goals"}, where);
            ScriptEntry out;
            auto instant = field<long long>(entry, "instant", where);
            if (instant < 1)
                throw ValidationError(where + ": instant must be >= 1");
            out.instant = static_cast<std::uint64_t>(instant);
            // Assignments apply in the order written.
            const auto set = entry.contains("set") ? field<json>(entry, "set", where) : json::object();
            if (!set.is_object())
                throw ValidationError(where + ": 'set' must be an object");
            for (const auto& [flag, value] : set.items()) {
                if (!value.is_boolean())
                    throw ValidationError(where + ": flag values must be booleans");
                out.assignments.emplace_back(flag, value.get<bool>());
            }
            const auto outcomes =
                entry.contains("goals") ? field<json>(entry, "goals", where) : json::object();
            if (!outcomes.is_object())
                throw ValidationError(where + ": 'goals' must be an object");
            for (const auto& [goal, value] : outcomes.items()) {
                const auto text = value.is_string() ? value.get<std::string>() : std::string();
                if (text == "Success")
                    out.outcomes.emplace_back(goal, goals::GoalStatus::success);
                else if (text == "Failure")
                    out.outcomes.emplace_back(goal, goals::GoalStatus::failure);
                else
                    throw ValidationError(where + ": goal outcomes must be \"Success\" or \"Failure\"");
            }
            s.script.push_back(std::move(out));
        }
    }
    validate(s);
    return s;
}

Scenario load_scenario(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot open scenario '" + path.string() + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_scenario(text.str());
}

void validate(const Scenario& s)
{
    auto require_flag = [&](const std::string& flag, const std::string& where) {
        if (!s.flags.contains(flag))
            throw ValidationError(where + ": undeclared flag '" + flag + "'");
    };

    if (s.max_instants == 0)
        throw ValidationError("maxInstants must be positive");
    for (const auto& goal : s.root_goals)
        if (goal.empty())
            throw ValidationError("rootGoals: empty goal name");

    for (std::size_t i = 0; i < s.behaviors.size(); ++i) {
        const auto& b = s.behaviors[i];
        const std::string where = "behaviors[" + std::to_string(i) + "]";
        if (b.goal.empty())
            throw ValidationError(where + ": goal name must be non-empty");
        if (b.precond)
            for (const auto& flag : b.precond->flags())
                require_flag(flag, where + ".precond");
        for (const auto& step : b.steps) {
            if (!step.action)
                continue;
            const auto& a = *step.action;
            auto known = std::find_if(std::begin(builtin_arities), std::end(builtin_arities),
                                      [&](const Arity& ar) { return a.name == ar.name; });
            if (known == std::end(builtin_arities))
                throw ValidationError(where + ": unknown action '" + a.name + "'");
            if (a.args.size() != known->args)
                throw ValidationError(where + ": action '" + a.name + "' takes " +
                                      std::to_string(known->args) + " argument(s)");
            if (a.name == "set-flag" || a.name == "check-flag")
                require_flag(a.args[0], where + "." + a.name);
            if (a.name == "set-flag" && a.args[1] != "true" && a.args[1] != "false")
                throw ValidationError(where + ": set-flag value must be a boolean");
        }
    }

    std::uint64_t last = 1;
    for (std::size_t i = 0; i < s.script.size(); ++i) {
        const auto& entry = s.script[i];
        const std::string where = "script[" + std::to_string(i) + "]";
        if (entry.instant < 1)
            throw ValidationError(where + ": instant must be >= 1");
        if (entry.instant < last)
            throw ValidationError(where + ": instants must be non-decreasing");
        last = entry.instant;
        for (const auto& [flag, _] : entry.assignments)
            require_flag(flag, where);
        for (const auto& [goal, status] : entry.outcomes)
            if (goal.empty() ||
                (status != goals::GoalStatus::success && status != goals::GoalStatus::failure))
                throw ValidationError(where + ": bad goal outcome");
    }
}

} // namespace overlap::harness
