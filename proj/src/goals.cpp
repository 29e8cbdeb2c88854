#include "overlap/goals.hpp"

namespace overlap::goals {

std::string to_string(GoalStatus status)
{
    switch (status) {
    case GoalStatus::success: return "Success";
    case GoalStatus::failure: return "Failure";
    case GoalStatus::active: return "Active";
    case GoalStatus::available: return "Available";
    case GoalStatus::no_such: return "NoSuch";
    }
    return "?";
}

UnknownGoal::UnknownGoal(const std::string& name) : std::runtime_error("no such goal '" + name + "'") {}

NotAvailable::NotAvailable(const std::string& name, GoalStatus status)
    : std::runtime_error("goal '" + name + "' is " + to_string(status) + ", not Available")
{
}

void GoalStore::record(const std::string& name, GoalStatus status)
{
    if (status == GoalStatus::no_such)
        goals_.erase(name);
    else
        goals_[name] = status;
    if (observer_)
        observer_(name, status);
}

void GoalStore::finish(const std::string& name, GoalStatus status)
{
    if (!goals_.contains(name))
        throw UnknownGoal(name);
    record(name, status);
}

void GoalStore::set(const std::string& name)
{
    record(name, GoalStatus::available);
}

void GoalStore::succeed(const std::string& name)
{
    finish(name, GoalStatus::success);
}

void GoalStore::fail(const std::string& name)
{
    finish(name, GoalStatus::failure);
}

void GoalStore::clear(const std::string& name)
{
    if (goals_.contains(name))
        record(name, GoalStatus::no_such);
}

void GoalStore::mark_active(const std::string& name)
{
    auto current = status(name);
    if (current == GoalStatus::no_such)
        throw UnknownGoal(name);
    if (current != GoalStatus::available)
        throw NotAvailable(name, current);
    record(name, GoalStatus::active);
}

GoalStatus GoalStore::status(const std::string& name) const
{
    auto it = goals_.find(name);
    return it == goals_.end() ? GoalStatus::no_such : it->second;
}

} // namespace overlap::goals
