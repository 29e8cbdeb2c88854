#include "overlap/reactive.hpp"

#include <gtest/gtest.h>

#include <random>
#include <string>
#include <vector>

namespace overlap::reactive {
namespace {

using Log = std::vector<std::string>;

Program log_to(Log& log, std::string text)
{
    return effect([&log, text] { log.push_back(text); });
}

TEST(Effect, RunsOnceThenStaysTerminated)
{
    Log log;
    Process p(log_to(log, "x"));
    EXPECT_EQ(p.react(), Status::terminated);
    EXPECT_EQ(log, Log{"x"});
    EXPECT_EQ(p.react(), Status::terminated);
    EXPECT_EQ(log, Log{"x"});
}

TEST(Seq, EffectsWithoutControlPointsRunInOneActivation)
{
    Log log;
    Process p(seq({log_to(log, "a"), log_to(log, "b"), log_to(log, "c")}));
    EXPECT_EQ(p.react(), Status::terminated);
    EXPECT_EQ(log, (Log{"a", "b", "c"}));
}

TEST(Seq, NothingIsLeftIdentity)
{
    Log log;
    Process p(seq(nothing(), log_to(log, "e")));
    EXPECT_EQ(p.react(), Status::terminated);
    EXPECT_EQ(log, Log{"e"});
}

TEST(Nothing, TerminatesImmediately)
{
    Process p(nothing());
    EXPECT_EQ(p.react(), Status::terminated);
    EXPECT_TRUE(p.terminated());
}

TEST(StopPoint, ResumesOnNextInstant)
{
    int x = 0;
    Process p(seq({effect([&] { x = 1; }), stop_point(), effect([&] { x = 2; })}));
    EXPECT_EQ(p.react(), Status::stopped);
    EXPECT_EQ(x, 1);
    EXPECT_EQ(p.react(), Status::terminated);
    EXPECT_EQ(x, 2);
}

TEST(StopPoint, ControlPointWalk)
{
    Log log;
    Process p(seq({log_to(log, "a"), stop_point(), log_to(log, "b"), stop_point()}));
    EXPECT_EQ(p.react(), Status::stopped);
    EXPECT_EQ(log, Log{"a"});
    // b runs, then the trailing stop parks the program once more.
    EXPECT_EQ(p.react(), Status::stopped);
    EXPECT_EQ(log, (Log{"a", "b"}));
    EXPECT_EQ(p.react(), Status::terminated);
    EXPECT_EQ(p.react(), Status::terminated);
    EXPECT_EQ(log, (Log{"a", "b"}));
}

TEST(SuspendPoint, DegradesToStopWithoutClose)
{
    Log log;
    Process p(seq(suspend_point(), log_to(log, "e")));
    EXPECT_EQ(p.react(), Status::suspended);
    EXPECT_TRUE(log.empty());
    EXPECT_EQ(p.react(), Status::terminated);
    EXPECT_EQ(log, Log{"e"});
}

TEST(Close, ResumesSuspensionsWithinTheInstant)
{
    Log log;
    Process p(close(seq(suspend_point(), log_to(log, "late"))));
    EXPECT_EQ(p.react(), Status::terminated);
    EXPECT_EQ(log, Log{"late"});
}

TEST(Close, EarlyLateFixpoint)
{
    Log log;
    Program branch1 = seq({suspend_point(), log_to(log, "late"), stop_point()});
    Program branch2 = seq(log_to(log, "early"), stop_point());
    std::size_t rounds = 0;
    Process p(close(merge(branch1, branch2), default_round_bound,
                    [&](std::size_t r) { rounds = r; }));
    EXPECT_EQ(p.react(), Status::stopped);
    EXPECT_EQ(log, (Log{"early", "late"}));
    EXPECT_EQ(rounds, 2u);
    for (auto park : p.frontier())
        EXPECT_EQ(park, detail::Park::stopped);
}

TEST(Close, NothingTerminatesInOneRound)
{
    std::size_t rounds = 0;
    Process p(close(nothing(), 4, [&](std::size_t r) { rounds = r; }));
    EXPECT_EQ(p.react(), Status::terminated);
    EXPECT_EQ(rounds, 1u);
}

TEST(Close, ForeverSuspendingDivergesAtBound)
{
    int runs = 0;
    Process p(close(loop(seq(effect([&] { ++runs; }), suspend_point())), 10));
    try {
        p.react();
        FAIL() << "expected CloseDivergence";
    } catch (const CloseDivergence& e) {
        EXPECT_EQ(e.bound(), 10u);
    }
    EXPECT_EQ(runs, 10);
}

TEST(Close, StoppedBranchNotReenteredDuringLaterRounds)
{
    int stopped_branch_runs = 0;
    Log log;
    Program stopper = loop(seq(effect([&] { ++stopped_branch_runs; }), stop_point()));
    Program suspender = seq({suspend_point(), suspend_point(), log_to(log, "done"), stop_point()});
    Process p(close(merge(stopper, suspender)));
    EXPECT_EQ(p.react(), Status::stopped);
    EXPECT_EQ(stopped_branch_runs, 1);
    EXPECT_EQ(log, Log{"done"});
    EXPECT_EQ(p.react(), Status::stopped);
    EXPECT_EQ(stopped_branch_runs, 2);
}

TEST(Merge, LeftBeforeRight)
{
    Log log;
    Process p(merge(seq(log_to(log, "a"), stop_point()), seq(log_to(log, "b"), stop_point())));
    EXPECT_EQ(p.react(), Status::stopped);
    EXPECT_EQ(log, (Log{"a", "b"}));
}

TEST(Merge, StatusCombination)
{
    Process both_done(merge(nothing(), nothing()));
    EXPECT_EQ(both_done.react(), Status::terminated);

    Process stopped_and_done(merge(stop_point(), nothing()));
    EXPECT_EQ(stopped_and_done.react(), Status::stopped);

    Process suspended_dominates(merge(stop_point(), suspend_point()));
    EXPECT_EQ(suspended_dominates.react(), Status::suspended);
}

TEST(Merge, NothingIsIdentity)
{
    Log a;
    Log b;
    Program script = seq({log_to(a, "1"), stop_point(), log_to(a, "2")});
    Program twin = seq({log_to(b, "1"), stop_point(), log_to(b, "2")});
    Process plain(script);
    Process merged(merge(nothing(), twin));
    for (int i = 0; i < 3; ++i)
        EXPECT_EQ(plain.react(), merged.react());
    EXPECT_EQ(a, b);
}

TEST(Loop, OneIterationPerInstant)
{
    Log log;
    Process p(loop(seq(log_to(log, "t"), stop_point())));
    for (int i = 1; i <= 5; ++i) {
        EXPECT_EQ(p.react(), Status::stopped);
        EXPECT_EQ(log.size(), static_cast<std::size_t>(i));
    }
}

TEST(Loop, BodyWithoutControlPointThrows)
{
    int runs = 0;
    Process p(loop(effect([&] { ++runs; })));
    EXPECT_THROW(p.react(), InstantaneousLoop);
    EXPECT_EQ(runs, 1);
}

TEST(Loop, FreshStatePerIteration)
{
    std::vector<int> seen;
    Program body = defer([&seen] {
        auto counter = std::make_shared<int>(0);
        return seq({effect([counter] { ++*counter; }), effect([counter, &seen] {
                        seen.push_back(*counter);
                    }),
                    stop_point()});
    });
    Process p(loop(body));
    for (int i = 0; i < 4; ++i)
        p.react();
    EXPECT_EQ(seen, (std::vector<int>{1, 1, 1, 1}));
}

TEST(Defer, DeepTailRecursionDoesNotGrow)
{
    // A self-recursive program that stops every instant; tail splicing keeps
    // the instance chain flat no matter how many instants pass.
    int count = 0;
    std::function<Program()> step = [&]() -> Program {
        return seq({effect([&] { ++count; }), stop_point(), defer(step)});
    };
    Process p(defer(step));
    for (int i = 0; i < 20000; ++i)
        ASSERT_EQ(p.react(), Status::stopped);
    EXPECT_EQ(count, 20000);
}

TEST(Process, ReentrantReactIsAnError)
{
    Process* self = nullptr;
    bool threw = false;
    Process p(effect([&] {
        try {
            self->react();
        } catch (const ReentrantActivation&) {
            threw = true;
        }
    }));
    self = &p;
    p.react();
    EXPECT_TRUE(threw);
}

TEST(BranchSet, AdditionsJoinAtCommit)
{
    auto set = std::make_shared<BranchSet>();
    Log log;
    Process p(close(merge_set(set)));
    set->add(seq(log_to(log, "first"), stop_point()));
    EXPECT_EQ(p.react(), Status::stopped);
    EXPECT_TRUE(log.empty());
    set->commit();
    EXPECT_EQ(p.react(), Status::stopped);
    EXPECT_EQ(log, Log{"first"});
    p.react();
    set->prune();
    EXPECT_EQ(set->live(), 0u);
}

// ---- properties ---------------------------------------------------------

// Random programs over the full combinator set, with effects that log a
// unique id. Loops always contain a stop so they cannot be instantaneous.
class Generator {
public:
    Generator(unsigned seed, Log& log, std::string tag = "e")
        : rng_(seed), log_(&log), tag_(std::move(tag))
    {
    }

    Program make(int depth)
    {
        std::uniform_int_distribution<int> pick(0, depth <= 0 ? 3 : 8);
        switch (pick(rng_)) {
        case 0: return log_to(*log_, tag_ + std::to_string(next_++));
        case 1: return stop_point();
        case 2: return suspend_point();
        case 3: return nothing();
        case 4:
        case 5: return seq(make(depth - 1), make(depth - 1));
        case 6: return merge(make(depth - 1), make(depth - 1));
        case 7: return loop(seq(make(depth - 1), stop_point()));
        default: return close(make(depth - 1));
        }
    }

private:
    std::mt19937 rng_;
    Log* log_;
    std::string tag_;
    int next_ = 0;
};

struct Run {
    Log log;
    std::vector<Status> statuses;
    bool diverged = false;
};

Run run_random(unsigned seed, int instants)
{
    Run run;
    Generator gen(seed, run.log);
    Process p(close(gen.make(5)));
    for (int i = 0; i < instants; ++i) {
        try {
            run.statuses.push_back(p.react());
        } catch (const CloseDivergence&) {
            run.diverged = true;
            break;
        }
    }
    return run;
}

TEST(Properties, DeterministicReplay)
{
    for (unsigned seed = 0; seed < 300; ++seed) {
        auto a = run_random(seed, 8);
        auto b = run_random(seed, 8);
        ASSERT_EQ(a.log, b.log) << "seed " << seed;
        ASSERT_EQ(a.statuses, b.statuses) << "seed " << seed;
        ASSERT_EQ(a.diverged, b.diverged);
    }
}

TEST(Properties, CloseSettlesOnStopsOnly)
{
    for (unsigned seed = 0; seed < 300; ++seed) {
        Log log;
        Generator gen(seed, log);
        Process p(close(gen.make(5)));
        for (int i = 0; i < 6; ++i) {
            Status status;
            try {
                status = p.react();
            } catch (const CloseDivergence&) {
                break;
            }
            if (status == Status::terminated)
                break;
            ASSERT_EQ(status, Status::stopped);
            for (auto park : p.frontier())
                ASSERT_EQ(park, detail::Park::stopped) << "seed " << seed;
        }
    }
}

TEST(Properties, MergeRoundOrder)
{
    // Without close every react is a single round, so within each react all
    // left effects must precede all right effects.
    for (unsigned seed = 0; seed < 300; ++seed) {
        Log log;
        Generator left(seed, log, "L");
        Generator right(seed + 7919, log, "R");
        Process p(merge(left.make(4), right.make(4)));
        for (int i = 0; i < 6; ++i) {
            const std::size_t start = log.size();
            try {
                p.react();
            } catch (const CloseDivergence&) {
                break;
            }
            bool seen_right = false;
            for (std::size_t k = start; k < log.size(); ++k) {
                if (log[k][0] == 'R')
                    seen_right = true;
                else
                    ASSERT_FALSE(seen_right) << "seed " << seed << " instant " << i;
            }
        }
    }
}

} // namespace
} // namespace overlap::reactive
