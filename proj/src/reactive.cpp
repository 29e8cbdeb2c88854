#include "overlap/reactive.hpp"

#include <utility>

namespace overlap::reactive {

std::string to_string(Status status)
{
    switch (status) {
    case Status::terminated: return "Terminated";
    case Status::stopped: return "Stopped";
    case Status::suspended: return "Suspended";
    }
    return "?";
}

InstantaneousLoop::InstantaneousLoop()
    : std::runtime_error("loop body terminated without reaching a control point")
{
}

CloseDivergence::CloseDivergence(std::size_t bound)
    : std::runtime_error("close did not settle within " + std::to_string(bound) + " micro-rounds"),
      bound_(bound)
{
}

ReentrantActivation::ReentrantActivation()
    : std::logic_error("react called on a process that is already active")
{
}

namespace detail {

Status activate_slot(std::unique_ptr<Activation>& slot, Context& ctx)
{
    Status status = slot->activate(ctx);
    while (auto tail = slot->release_tail())
        slot = std::move(tail);
    return status;
}

} // namespace detail

namespace {

using detail::Activation;
using detail::Context;
using detail::Node;
using detail::Park;

Status combine(bool any_suspended, bool any_stopped)
{
    if (any_suspended)
        return Status::suspended;
    if (any_stopped)
        return Status::stopped;
    return Status::terminated;
}

// ---- leaves -------------------------------------------------------------

template <class N>
std::shared_ptr<const N> self(const N& node)
{
    return std::static_pointer_cast<const N>(node.shared_from_this());
}

struct EffectNode;

class EffectActivation final : public Activation {
public:
    explicit EffectActivation(std::shared_ptr<const EffectNode> node) : node_(std::move(node)) {}

    Status activate(Context&) override;
    void frontier(std::vector<Park>&) const override {}

private:
    std::shared_ptr<const EffectNode> node_;
};

struct EffectNode final : Node {
    explicit EffectNode(std::function<void()> s) : step(std::move(s)) {}
    std::unique_ptr<Activation> instantiate() const override
    {
        return std::make_unique<EffectActivation>(self(*this));
    }
    std::function<void()> step;
};

Status EffectActivation::activate(Context&)
{
    // Release the node first so a step that throws still counts as run.
    if (auto node = std::exchange(node_, nullptr))
        node->step();
    return Status::terminated;
}

class NothingActivation final : public Activation {
public:
    Status activate(Context&) override { return Status::terminated; }
    void frontier(std::vector<Park>&) const override {}
};

struct NothingNode final : Node {
    std::unique_ptr<Activation> instantiate() const override
    {
        return std::make_unique<NothingActivation>();
    }
};

// A stop parks until the instant counter moves past the one it parked in.
class StopActivation final : public Activation {
public:
    Status activate(Context& ctx) override
    {
        switch (state_) {
        case State::fresh:
            state_ = State::parked;
            parked_at_ = ctx.instant;
            return Status::stopped;
        case State::parked:
            if (ctx.instant > parked_at_) {
                state_ = State::done;
                return Status::terminated;
            }
            return Status::stopped;
        case State::done:
            break;
        }
        return Status::terminated;
    }
    void frontier(std::vector<Park>& out) const override
    {
        if (state_ == State::parked)
            out.push_back(Park::stopped);
    }

private:
    enum class State { fresh, parked, done };
    State state_ = State::fresh;
    std::uint64_t parked_at_ = 0;
};

struct StopNode final : Node {
    std::unique_ptr<Activation> instantiate() const override
    {
        return std::make_unique<StopActivation>();
    }
};

// A suspend resumes on the very next activation, whether that comes from
// another close round or from the next instant.
class SuspendActivation final : public Activation {
public:
    Status activate(Context&) override
    {
        if (!parked_ && !done_) {
            parked_ = true;
            return Status::suspended;
        }
        parked_ = false;
        done_ = true;
        return Status::terminated;
    }
    void frontier(std::vector<Park>& out) const override
    {
        if (parked_)
            out.push_back(Park::suspended);
    }

private:
    bool parked_ = false;
    bool done_ = false;
};

struct SuspendNode final : Node {
    std::unique_ptr<Activation> instantiate() const override
    {
        return std::make_unique<SuspendActivation>();
    }
};

// ---- sequencing ---------------------------------------------------------

struct SeqNode;

class SeqActivation final : public Activation {
public:
    SeqActivation(std::unique_ptr<Activation> first, std::shared_ptr<const SeqNode> node)
        : current_(std::move(first)), node_(std::move(node))
    {
    }

    Status activate(Context& ctx) override;
    void frontier(std::vector<Park>& out) const override { current_->frontier(out); }
    std::unique_ptr<Activation> release_tail() override
    {
        if (node_)
            return nullptr;
        return std::move(current_);
    }

private:
    std::unique_ptr<Activation> current_;
    // Null once the second part has started.
    std::shared_ptr<const SeqNode> node_;
};

struct SeqNode final : Node {
    SeqNode(Program a, Program b) : first(std::move(a)), second(std::move(b)) {}
    std::unique_ptr<Activation> instantiate() const override
    {
        return std::make_unique<SeqActivation>(first.instantiate(), self(*this));
    }
    Program first;
    Program second;
};

Status SeqActivation::activate(Context& ctx)
{
    Status status = detail::activate_slot(current_, ctx);
    if (status != Status::terminated || !node_)
        return status;
    current_ = std::exchange(node_, nullptr)->second.instantiate();
    return detail::activate_slot(current_, ctx);
}

struct DeferNode;

class DeferActivation final : public Activation {
public:
    explicit DeferActivation(std::shared_ptr<const DeferNode> node) : node_(std::move(node)) {}

    Status activate(Context& ctx) override;
    void frontier(std::vector<Park>& out) const override
    {
        if (child_)
            child_->frontier(out);
    }
    std::unique_ptr<Activation> release_tail() override { return std::move(child_); }

private:
    std::shared_ptr<const DeferNode> node_;
    std::unique_ptr<Activation> child_;
};

struct DeferNode final : Node {
    explicit DeferNode(std::function<Program()> m) : make(std::move(m)) {}
    std::unique_ptr<Activation> instantiate() const override
    {
        return std::make_unique<DeferActivation>(self(*this));
    }
    std::function<Program()> make;
};

Status DeferActivation::activate(Context& ctx)
{
    if (!child_)
        child_ = std::exchange(node_, nullptr)->make().instantiate();
    return detail::activate_slot(child_, ctx);
}

// ---- parallel -----------------------------------------------------------

class MergeActivation final : public Activation {
public:
    MergeActivation(std::unique_ptr<Activation> left, std::unique_ptr<Activation> right)
    {
        branches_[0].instance = std::move(left);
        branches_[1].instance = std::move(right);
    }

    Status activate(Context& ctx) override
    {
        bool any_suspended = false;
        bool any_stopped = false;
        for (auto& branch : branches_) {
            if (!branch.instance)
                continue;
            if (branch.stopped_at == ctx.instant) {
                any_stopped = true;
                continue;
            }
            switch (detail::activate_slot(branch.instance, ctx)) {
            case Status::terminated: branch.instance.reset(); break;
            case Status::stopped:
                branch.stopped_at = ctx.instant;
                any_stopped = true;
                break;
            case Status::suspended: any_suspended = true; break;
            }
        }
        return combine(any_suspended, any_stopped);
    }
    void frontier(std::vector<Park>& out) const override
    {
        for (const auto& branch : branches_)
            if (branch.instance)
                branch.instance->frontier(out);
    }

private:
    struct Branch {
        std::unique_ptr<Activation> instance;
        std::uint64_t stopped_at = 0;
    };
    Branch branches_[2];
};

struct MergeNode final : Node {
    MergeNode(Program a, Program b) : left(std::move(a)), right(std::move(b)) {}
    std::unique_ptr<Activation> instantiate() const override
    {
        return std::make_unique<MergeActivation>(left.instantiate(), right.instantiate());
    }
    Program left;
    Program right;
};

// ---- loop and close -----------------------------------------------------

struct LoopNode;

class LoopActivation final : public Activation {
public:
    LoopActivation(std::unique_ptr<Activation> first, std::shared_ptr<const LoopNode> node)
        : node_(std::move(node)), current_(std::move(first))
    {
    }

    Status activate(Context& ctx) override
    {
        for (;;) {
            Status status = detail::activate_slot(current_, ctx);
            if (status != Status::terminated) {
                fresh_ = false;
                return status;
            }
            if (fresh_)
                throw InstantaneousLoop();
            current_ = instantiate_body();
            fresh_ = true;
        }
    }
    void frontier(std::vector<Park>& out) const override { current_->frontier(out); }

private:
    std::unique_ptr<Activation> instantiate_body() const;

    std::shared_ptr<const LoopNode> node_;
    std::unique_ptr<Activation> current_;
    bool fresh_ = true;
};

struct LoopNode final : Node {
    explicit LoopNode(Program b) : body(std::move(b)) {}
    std::unique_ptr<Activation> instantiate() const override
    {
        return std::make_unique<LoopActivation>(body.instantiate(), self(*this));
    }
    Program body;
};

std::unique_ptr<Activation> LoopActivation::instantiate_body() const
{
    return node_->body.instantiate();
}

class CloseActivation final : public Activation {
public:
    CloseActivation(std::unique_ptr<Activation> inner, std::shared_ptr<const struct CloseNode> node)
        : inner_(std::move(inner)), node_(std::move(node))
    {
    }

    Status activate(Context& ctx) override;
    void frontier(std::vector<Park>& out) const override
    {
        if (inner_)
            inner_->frontier(out);
    }

private:
    std::unique_ptr<Activation> inner_;
    std::shared_ptr<const CloseNode> node_;
};

struct CloseNode final : Node {
    CloseNode(Program i, std::size_t b, std::function<void(std::size_t)> s)
        : inner(std::move(i)), bound(b), on_settle(std::move(s))
    {
    }
    std::unique_ptr<Activation> instantiate() const override
    {
        return std::make_unique<CloseActivation>(inner.instantiate(), self(*this));
    }
    Program inner;
    std::size_t bound;
    std::function<void(std::size_t)> on_settle;
};

Status CloseActivation::activate(Context& ctx)
{
    if (!inner_)
        return Status::terminated;
    std::size_t rounds = 0;
    Status status = Status::suspended;
    while (status == Status::suspended) {
        if (rounds == node_->bound)
            throw CloseDivergence(node_->bound);
        status = detail::activate_slot(inner_, ctx);
        ++rounds;
    }
    if (status == Status::terminated)
        inner_.reset();
    if (node_->on_settle)
        node_->on_settle(rounds);
    return status;
}

std::shared_ptr<const Node> shared_nothing()
{
    static const auto node = std::make_shared<const NothingNode>();
    return node;
}

} // namespace

// ---- branch sets --------------------------------------------------------

void BranchSet::add(const Program& program)
{
    pending_.push_back(program);
}

void BranchSet::commit()
{
    for (auto& program : pending_)
        branches_.push_back(Branch{program.instantiate()});
    pending_.clear();
}

void BranchSet::prune()
{
    std::erase_if(branches_, [](const Branch& b) { return b.terminated; });
}

class BranchSetActivation final : public Activation {
public:
    explicit BranchSetActivation(std::shared_ptr<BranchSet> set) : set_(std::move(set)) {}

    Status activate(Context& ctx) override
    {
        bool any_suspended = false;
        // Indexing keeps this valid even if an action adds to the set; new
        // programs sit in the pending list until commit().
        for (std::size_t i = 0; i < set_->branches_.size(); ++i) {
            auto& branch = set_->branches_[i];
            if (branch.terminated)
                continue;
            if (branch.stopped_at == ctx.instant)
                continue;
            Status status = detail::activate_slot(branch.instance, ctx);
            auto& after = set_->branches_[i];
            switch (status) {
            case Status::terminated:
                after.terminated = true;
                after.instance.reset();
                break;
            case Status::stopped:
                after.stopped_at = ctx.instant;
                break;
            case Status::suspended: any_suspended = true; break;
            }
        }
        // A set never terminates: more branches may join later.
        return any_suspended ? Status::suspended : Status::stopped;
    }
    void frontier(std::vector<Park>& out) const override
    {
        for (const auto& branch : set_->branches_)
            if (branch.instance)
                branch.instance->frontier(out);
    }

private:
    std::shared_ptr<BranchSet> set_;
};

namespace {
struct BranchSetNode final : Node {
    explicit BranchSetNode(std::shared_ptr<BranchSet> s) : set(std::move(s)) {}
    std::unique_ptr<Activation> instantiate() const override
    {
        return std::make_unique<BranchSetActivation>(set);
    }
    std::shared_ptr<BranchSet> set;
};
} // namespace

// ---- builders -----------------------------------------------------------

Program::Program() : node_(shared_nothing()) {}

Program effect(std::function<void()> step)
{
    return Program(std::make_shared<const EffectNode>(std::move(step)));
}

Program nothing()
{
    return Program();
}

Program stop_point()
{
    return Program(std::make_shared<const StopNode>());
}

Program suspend_point()
{
    return Program(std::make_shared<const SuspendNode>());
}

Program seq(Program first, Program second)
{
    return Program(std::make_shared<const SeqNode>(std::move(first), std::move(second)));
}

Program seq(std::initializer_list<Program> parts)
{
    if (parts.size() == 0)
        return nothing();
    auto it = std::rbegin(parts);
    Program result = *it++;
    for (; it != std::rend(parts); ++it)
        result = seq(*it, std::move(result));
    return result;
}

Program merge(Program left, Program right)
{
    return Program(std::make_shared<const MergeNode>(std::move(left), std::move(right)));
}

Program merge(std::initializer_list<Program> branches)
{
    if (branches.size() == 0)
        return nothing();
    auto it = branches.begin();
    Program result = *it++;
    for (; it != branches.end(); ++it)
        result = merge(std::move(result), *it);
    return result;
}

Program loop(Program body)
{
    return Program(std::make_shared<const LoopNode>(std::move(body)));
}

Program close(Program inner, std::size_t round_bound, std::function<void(std::size_t)> on_settle)
{
    if (round_bound == 0)
        throw std::invalid_argument("close round bound must be positive");
    return Program(
        std::make_shared<const CloseNode>(std::move(inner), round_bound, std::move(on_settle)));
}

Program defer(std::function<Program()> make)
{
    return Program(std::make_shared<const DeferNode>(std::move(make)));
}

Program merge_set(std::shared_ptr<BranchSet> set)
{
    return Program(std::make_shared<const BranchSetNode>(std::move(set)));
}

// ---- process ------------------------------------------------------------

Process::Process(const Program& program) : root_(program.instantiate()) {}

Status Process::react()
{
    if (active_)
        throw ReentrantActivation();
    if (terminated_)
        return Status::terminated;
    active_ = true;
    ++ctx_.instant;
    Status status;
    try {
        status = detail::activate_slot(root_, ctx_);
    } catch (...) {
        active_ = false;
        throw;
    }
    active_ = false;
    if (status == Status::terminated) {
        terminated_ = true;
        root_.reset();
    }
    return status;
}

std::vector<detail::Park> Process::frontier() const
{
    std::vector<detail::Park> out;
    if (root_)
        root_->frontier(out);
    return out;
}

} // namespace overlap::reactive
