#include "manet/engine.hpp"

#include <gtest/gtest.h>

#include <string>
#include <vector>

using namespace manet;

TEST(Engine, OrdersByTimeThenInsertion)
{
    Engine e;
    std::vector<std::string> order;
    e.schedule(5.0, 0, EventKind::Timer, [&] { order.push_back("5a"); });
    e.schedule(5.0, 0, EventKind::Timer, [&] { order.push_back("5b"); });
    e.schedule(4.0, 0, EventKind::Timer, [&] { order.push_back("4"); });
    e.run(10.0);
    EXPECT_EQ(order, (std::vector<std::string>{"4", "5a", "5b"}));
}

TEST(Engine, SameTimeScheduledFromHandlerRunsAfterEarlierPeers)
{
    Engine e;
    std::vector<int> order;
    e.schedule(1.0, 0, EventKind::Timer, [&] {
        order.push_back(1);
        e.schedule(e.now(), 0, EventKind::Timer, [&] { order.push_back(3); });
    });
    e.schedule(1.0, 0, EventKind::Timer, [&] { order.push_back(2); });
    e.run(2.0);
    EXPECT_EQ(order, (std::vector<int>{1, 2, 3}));
}

TEST(Engine, RejectsPastTimes)
{
    Engine e;
    e.run(1.0);
    EXPECT_THROW(e.schedule(0.9, 0, EventKind::Timer, [] {}), ScheduleError);
    EXPECT_NO_THROW(e.schedule(1.0, 0, EventKind::Timer, [] {}));
}

TEST(Engine, RunAdvancesClockEvenWhenIdle)
{
    Engine e;
    EXPECT_EQ(e.run(130.0), 0u);
    EXPECT_EQ(e.now(), 130.0);

    Engine f;
    SimTime seen = -1;
    f.schedule(10.0, 0, EventKind::Timer, [&] { seen = f.now(); });
    EXPECT_EQ(f.run(130.0), 1u);
    EXPECT_EQ(seen, 10.0);
}

TEST(Engine, LeavesLaterEventsQueued)
{
    Engine e;
    int fired = 0;
    e.schedule(5.0, 0, EventKind::Timer, [&] { ++fired; });
    e.schedule(5.0000001, 0, EventKind::Timer, [&] { ++fired; });
    e.run(5.0);
    EXPECT_EQ(fired, 1);
    EXPECT_EQ(e.queued(), 1u);
}

TEST(Engine, Cancel)
{
    Engine e;
    int fired = 0;
    auto h = e.schedule(1.0, 0, EventKind::Timer, [&] { ++fired; });
    EXPECT_TRUE(e.cancel(h));
    EXPECT_FALSE(e.cancel(h));
    e.run(2.0);
    EXPECT_EQ(fired, 0);

    auto g = e.schedule(3.0, 0, EventKind::Timer, [&] { ++fired; });
    e.run(4.0);
    EXPECT_EQ(fired, 1);
    EXPECT_FALSE(e.cancel(g));
}

TEST(Engine, LogIsSortedAndClockMonotone)
{
    Engine e(7);
    e.enable_log(true);
    RngStream rng(7, RngPurpose::Protocol, 0);
    for (int i = 0; i < 500; ++i)
        e.schedule(rng.uniform(0.0, 10.0), static_cast<NodeId>(i % 5), EventKind::Timer, [] {});
    // Handlers that schedule at the current instant exercise the seq tie-break.
    for (int i = 0; i < 20; ++i)
        e.schedule(2.0, kSystemTarget, EventKind::Timer,
                   [&e] { e.schedule(e.now(), 0, EventKind::Timer, [] {}); });
    e.run(10.0);
    const auto& log = e.log();
    ASSERT_EQ(log.size(), 540u);
    for (std::size_t i = 1; i < log.size(); ++i)
    {
        EXPECT_LE(log[i - 1].at, log[i].at);
        if (log[i - 1].at == log[i].at)
        {
            EXPECT_LT(log[i - 1].seq, log[i].seq);
        }
    }
}

TEST(Engine, TraceFormat)
{
    Engine e;
    e.enable_log(true);
    e.schedule(1.5, 3, EventKind::Timer, [] {});
    e.schedule(2.0, kSystemTarget, EventKind::SimEnd, [] {});
    e.run(3.0);
    EXPECT_EQ(format_event_trace(e.log()),
              "t=1.500000000 seq=1 target=3 kind=timer\n"
              "t=2.000000000 seq=2 target=system kind=sim-end\n");
}

TEST(Rng, SameKeyReproduces)
{
    RngStream a(42, RngPurpose::Mobility, 3);
    RngStream b(42, RngPurpose::Mobility, 3);
    for (int i = 0; i < 1000; ++i)
        ASSERT_EQ(a.next(), b.next());
}

TEST(Rng, DifferentKeysDiffer)
{
    RngStream a(42, RngPurpose::Mobility, 3);
    RngStream b(42, RngPurpose::Mobility, 4);
    RngStream c(42, RngPurpose::Jitter, 3);
    RngStream d(43, RngPurpose::Mobility, 3);
    int same = 0;
    for (int i = 0; i < 1000; ++i)
    {
        const auto x = a.next();
        same += x == b.next();
        same += x == c.next();
        same += x == d.next();
    }
    EXPECT_EQ(same, 0);
}

TEST(Rng, NewConsumerLeavesExistingStreamsAlone)
{
    Engine e(9);
    std::vector<std::uint64_t> before;
    {
        auto s = e.rng_stream(RngPurpose::Mobility, 1);
        for (int i = 0; i < 100; ++i)
            before.push_back(s.next());
    }
    auto s = e.rng_stream(RngPurpose::Mobility, 1);
    auto extra = e.rng_stream(RngPurpose::Protocol, 1);
    for (int i = 0; i < 100; ++i)
    {
        extra.next();
        ASSERT_EQ(s.next(), before[i]);
    }
}

TEST(Rng, RangesHold)
{
    RngStream r(1, RngPurpose::Workload, 0);
    for (int i = 0; i < 100000; ++i)
    {
        const double u = r.uniform01();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        const double v = r.uniform(5.0, 15.0);
        ASSERT_GE(v, 5.0);
        ASSERT_LT(v, 15.0);
        ASSERT_LT(r.below(7), 7u);
    }
}
