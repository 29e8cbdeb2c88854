#pragma once

// Synchronous-reactive kernel: resumable programs with stop/suspend control
// points, executed one instant at a time.
//
// A Program is an immutable description (cheap to copy, freely shared). A
// Process is one running instance of a Program and owns all cursor state.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace overlap::reactive {

enum class Status { terminated, stopped, suspended };

std::string to_string(Status status);

/// Raised when a loop body terminates in the same activation it was created.
class InstantaneousLoop : public std::runtime_error {
public:
    InstantaneousLoop();
};

/// Raised when a close() cannot reach a fixpoint within its round bound.
class CloseDivergence : public std::runtime_error {
public:
    explicit CloseDivergence(std::size_t bound);
    std::size_t bound() const noexcept { return bound_; }

private:
    std::size_t bound_;
};

/// Raised when react() is called on a Process from inside its own activation.
class ReentrantActivation : public std::logic_error {
public:
    ReentrantActivation();
};

inline constexpr std::size_t default_round_bound = 64;

namespace detail {

struct Context {
    std::uint64_t instant = 0;
};

/// Where a live leaf currently sits.
enum class Park { stopped, suspended };

class Activation {
public:
    virtual ~Activation() = default;
    virtual Status activate(Context& ctx) = 0;
    virtual void frontier(std::vector<Park>& out) const = 0;
    /// If this node has become a pure forwarder to one child (tail position),
    /// hand that child over so the parent can splice it in place.
    virtual std::unique_ptr<Activation> release_tail() { return nullptr; }
};

struct Node : std::enable_shared_from_this<Node> {
    virtual ~Node() = default;
    virtual std::unique_ptr<Activation> instantiate() const = 0;
};

/// Activates the instance held in `slot`, then collapses tail forwarders.
Status activate_slot(std::unique_ptr<Activation>& slot, Context& ctx);

} // namespace detail

class Program {
public:
    /// Equivalent to nothing().
    Program();
    explicit Program(std::shared_ptr<const detail::Node> node) : node_(std::move(node)) {}

    std::unique_ptr<detail::Activation> instantiate() const { return node_->instantiate(); }

private:
    std::shared_ptr<const detail::Node> node_;
};

Program effect(std::function<void()> step);
Program nothing();
Program stop_point();
Program suspend_point();
Program seq(Program first, Program second);
/// Right-nested sequence; seq({}) is nothing().
Program seq(std::initializer_list<Program> parts);
Program merge(Program left, Program right);
/// Left fold of binary merges; merge({}) is nothing().
Program merge(std::initializer_list<Program> branches);
Program loop(Program body);
Program close(Program inner, std::size_t round_bound = default_round_bound,
              std::function<void(std::size_t rounds)> on_settle = {});
/// Builds the rest of the program at activation time. This is how host-level
/// control flow (branching on state, recursion) enters a program.
Program defer(std::function<Program()> make);

/// An ordered, growable n-ary merge whose branches outlive any single
/// Program built over it. Branches added with add() join at the next
/// commit(); prune() drops terminated branches.
class BranchSet {
public:
    void add(const Program& program);
    /// Moves pending additions into the live set.
    void commit();
    void prune();
    std::size_t live() const noexcept { return branches_.size(); }
    std::size_t pending() const noexcept { return pending_.size(); }

private:
    friend class BranchSetActivation;
    struct Branch {
        std::unique_ptr<detail::Activation> instance;
        bool terminated = false;
        std::uint64_t stopped_at = 0;
    };
    std::vector<Branch> branches_;
    std::vector<Program> pending_;
};

/// A program that activates every live branch of `set` in order, as merge().
Program merge_set(std::shared_ptr<BranchSet> set);

class Process {
public:
    explicit Process(const Program& program);

    /// Runs one instant: everything parked at a control point becomes
    /// runnable again, then one activation is performed.
    Status react();

    bool terminated() const noexcept { return terminated_; }
    std::uint64_t instant() const noexcept { return ctx_.instant; }

    /// Control points at which live leaves are currently parked.
    std::vector<detail::Park> frontier() const;

private:
    std::unique_ptr<detail::Activation> root_;
    detail::Context ctx_;
    bool terminated_ = false;
    bool active_ = false;
};

inline Status react(Process& process) { return process.react(); }

} // namespace overlap::reactive
