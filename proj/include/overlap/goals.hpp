#pragma once

#include <functional>
#include <map>
#include <stdexcept>
#include <string>

namespace overlap::goals {

enum class GoalStatus { success, failure, active, available, no_such };

std::string to_string(GoalStatus status);

class UnknownGoal : public std::runtime_error {
public:
    explicit UnknownGoal(const std::string& name);
};

class NotAvailable : public std::runtime_error {
public:
    NotAvailable(const std::string& name, GoalStatus status);
};

/// Named goals and their status. Absent goals report no_such, which is never
/// stored.
class GoalStore {
public:
    /// Called after every status change with the goal name and new status
    /// (no_such for a clear).
    using Observer = std::function<void(const std::string&, GoalStatus)>;

    /// Makes the goal Available, whatever it was before.
    void set(const std::string& name);
    void succeed(const std::string& name);
    void fail(const std::string& name);
    /// No-op for an absent goal.
    void clear(const std::string& name);
    /// Available -> Active. Marks a goal as being pursued by some behavior.
    void mark_active(const std::string& name);

    GoalStatus status(const std::string& name) const;
    bool is_available(const std::string& name) const { return status(name) == GoalStatus::available; }
    bool is_done(const std::string& name) const
    {
        auto s = status(name);
        return s == GoalStatus::success || s == GoalStatus::failure;
    }

    const std::map<std::string, GoalStatus>& goals() const noexcept { return goals_; }
    void observe(Observer observer) { observer_ = std::move(observer); }

private:
    void record(const std::string& name, GoalStatus status);
    void finish(const std::string& name, GoalStatus status);

    std::map<std::string, GoalStatus> goals_;
    Observer observer_;
};

} // namespace overlap::goals
