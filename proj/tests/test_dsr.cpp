#include "manet/dsr.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <map>

using namespace manet;
using manet::testing::line;
using manet::testing::static_sim;

namespace
{

SimulationSetup logged(double jitter = 0.01)
{
    SimulationSetup s;
    s.logFrames = true;
    s.radio.broadcastJitterMax = jitter;
    return s;
}

std::size_t count_tx(Simulation& sim, NodeId node, std::string_view kind)
{
    std::size_t n = 0;
    for (const auto& r : sim.channel().frame_log())
        n += r.tx && r.node == node && r.kind == kind;
    return n;
}

dsr::Agent& at(Simulation& sim, NodeId n) { return sim.agent_as<dsr::Agent>(n); }

using Path = std::vector<NodeId>;

} // namespace

TEST(DsrCache, ShortestWins)
{
    dsr::RouteCache c;
    c.insert({0, 1, 2, 5}, 0.0);
    c.insert({0, 3, 5}, 0.0);
    EXPECT_EQ(c.lookup(5, 1.0), (Path{0, 3, 5}));
}

TEST(DsrCache, TieGoesToNewest)
{
    dsr::RouteCache c;
    c.insert({0, 1, 5}, 0.0);
    c.insert({0, 2, 5}, 1.0);
    EXPECT_EQ(c.lookup(5, 2.0), (Path{0, 2, 5}));
}

TEST(DsrCache, PrefixesCount)
{
    dsr::RouteCache c;
    c.insert({0, 1, 2, 3}, 0.0);
    EXPECT_EQ(c.lookup(2, 0.0), (Path{0, 1, 2}));
    EXPECT_FALSE(c.lookup(4, 0.0));
}

TEST(DsrCache, StaleEntriesPurged)
{
    dsr::RouteCache c;
    c.insert({0, 1}, 0.0);
    EXPECT_TRUE(c.lookup(1, 30.0));
    EXPECT_FALSE(c.lookup(1, 31.0));
    EXPECT_TRUE(c.entries().empty());
}

TEST(DsrCache, RejectsLoopsAndShortPaths)
{
    dsr::RouteCache c;
    EXPECT_FALSE(c.insert({0, 1, 0}, 0.0));
    EXPECT_FALSE(c.insert({0}, 0.0));
    EXPECT_TRUE(c.insert({0, 1}, 0.0));
    EXPECT_TRUE(c.insert({0, 1}, 1.0));
    EXPECT_EQ(c.entries().size(), 1u);
}

TEST(DsrCache, CapacityEvictsOldest)
{
    dsr::RouteCache c(2, 30.0);
    c.insert({0, 1}, 0.0);
    c.insert({0, 2}, 0.0);
    c.insert({0, 3}, 0.0);
    EXPECT_FALSE(c.lookup(1, 0.0));
    EXPECT_TRUE(c.lookup(3, 0.0));
}

TEST(DsrCache, RemoveLinkEitherDirection)
{
    dsr::RouteCache c;
    c.insert({0, 1, 2}, 0.0);
    c.insert({0, 2, 1}, 0.0);
    c.insert({0, 3}, 0.0);
    EXPECT_EQ(c.remove_link(2, 1), 2u);
    EXPECT_EQ(c.entries().size(), 1u);
}

TEST(DsrDiscovery, ColdRequest)
{
    auto sim = static_sim(Protocol::Dsr, line(2), logged());
    std::vector<dsr::Rreq> sent;
    sim->channel().set_tx_observer([&](const Frame& f) {
        if (auto* q = std::get_if<dsr::Rreq>(&f.payload))
            sent.push_back(*q);
    });
    sim->start();
    EXPECT_EQ(sim->send_data(0, 1), SendOutcome::Queued);
    ASSERT_EQ(sent.size(), 1u);
    EXPECT_TRUE(sent[0].record.empty());
    EXPECT_EQ(sent[0].requestId, 1u);
    EXPECT_EQ(at(*sim, 0).last_request_id(), 1u);
    sim->run_until(1.0);
    EXPECT_EQ(sim->metrics().data_received(), 1u);

    // Cached now: straight out, no new request.
    EXPECT_EQ(sim->send_data(0, 1), SendOutcome::Sent);
    EXPECT_EQ(sent.size(), 1u);
}

TEST(DsrDiscovery, PartitionedGivesUpAfterThree)
{
    auto sim = static_sim(Protocol::Dsr, {{0, 0}, {1000, 0}}, logged());
    sim->start();
    sim->send_data(0, 1);
    sim->run_until(10.0);
    EXPECT_EQ(count_tx(*sim, 0, "DSR_RREQ"), 3u);
    EXPECT_EQ(sim->metrics().drops(DropReason::NoRoute), 1u);
    EXPECT_FALSE(at(*sim, 0).discovering(1));
    // Initial, +0.5 s, +1.0 s.
    std::vector<SimTime> times;
    for (const auto& f : sim->channel().frame_log())
        if (f.tx)
            times.push_back(f.at);
    EXPECT_EQ(times, (std::vector<SimTime>{0.0, 0.5, 1.5}));
}

TEST(DsrDiscovery, LineOfThree)
{
    auto sim = static_sim(Protocol::Dsr, line(3), logged());
    std::vector<dsr::Rreq> rreqs;
    std::vector<dsr::Rrep> rreps;
    std::vector<std::size_t> dataSizes;
    sim->channel().set_tx_observer([&](const Frame& f) {
        if (auto* q = std::get_if<dsr::Rreq>(&f.payload))
            rreqs.push_back(*q);
        if (auto* p = std::get_if<dsr::Rrep>(&f.payload))
            rreps.push_back(*p);
        if (f.src == 0 && std::holds_alternative<DataPacket>(f.payload))
            dataSizes.push_back(f.size());
    });
    sim->start();
    sim->send_data(0, 2);
    sim->run_until(1.0);

    ASSERT_EQ(rreqs.size(), 2u);
    EXPECT_EQ(rreqs[1].record, (Path{1}));
    ASSERT_EQ(rreps.size(), 2u); // 2 -> 1, 1 -> 0
    EXPECT_EQ(rreps[0].route, (Path{0, 1, 2}));
    EXPECT_EQ(at(*sim, 0).cache().lookup(2, 1.0), (Path{0, 1, 2}));
    EXPECT_EQ(at(*sim, 0).cache().lookup(1, 1.0), (Path{0, 1}));
    EXPECT_EQ(at(*sim, 1).cache().lookup(2, 1.0), (Path{1, 2}));
    EXPECT_EQ(dataSizes, (std::vector<std::size_t>{512 + 12}));
    EXPECT_EQ(sim->metrics().data_received(), 1u);
}

TEST(DsrDiscovery, NodeAlreadyInRecordDrops)
{
    auto sim = static_sim(Protocol::Dsr, line(3), logged());
    sim->start();
    sim->engine().schedule(0.0, 0, EventKind::Timer, [&] {
        sim->channel().transmit(make_broadcast(0, dsr::Rreq{7, 1, 9, {1}}));
    });
    sim->run_until(1.0);
    EXPECT_EQ(count_tx(*sim, 1, "DSR_RREQ"), 0u);
}

TEST(DsrDiscovery, DuplicateRequestGetsOneReply)
{
    std::vector<Position> pos{{0, 0}, {150, 150}, {150, -150}, {300, 0}};
    auto sim = static_sim(Protocol::Dsr, pos, logged());
    sim->start();
    sim->send_data(0, 3);
    sim->run_until(0.5);
    EXPECT_EQ(count_tx(*sim, 3, "DSR_RREP"), 1u);
    EXPECT_EQ(count_tx(*sim, 3, "DSR_RREQ"), 0u);
}

TEST(DsrMaintenance, BrokenLinkReportedToSource)
{
    auto sim = static_sim(Protocol::Dsr, line(3), logged());
    sim->start();
    sim->send_data(0, 2);
    sim->run_until(1.0);
    ASSERT_EQ(sim->metrics().data_received(), 1u);
    dynamic_cast<StaticMobility&>(sim->mobility()).move(2, {2000, 0});
    sim->send_data(0, 2);
    sim->run_until(1.1);
    EXPECT_EQ(count_tx(*sim, 1, "DSR_RERR"), 1u);
    EXPECT_EQ(sim->metrics().drops(DropReason::LinkBreak), 1u);
    EXPECT_FALSE(at(*sim, 0).cache().lookup(2, 1.1));
    // The whole path goes, prefix included.
    EXPECT_FALSE(at(*sim, 0).cache().lookup(1, 1.1));
    // The next packet has to rediscover.
    EXPECT_EQ(sim->send_data(0, 2), SendOutcome::Queued);
}

TEST(DsrSilence, NoFramesWithoutTraffic)
{
    RandomWaypointParams rwp;
    SimulationSetup s;
    s.protocol = Protocol::Dsr;
    s.logFrames = true;
    Simulation sim(s, std::make_unique<RandomWaypoint>(50, rwp, 130.0, 1));
    auto stats = sim.run();
    EXPECT_TRUE(sim.channel().frame_log().empty());
    EXPECT_EQ(stats.controlEnergy, 0.0);
    EXPECT_EQ(stats.controlFrames, 0u);
}

TEST(DsrRoutes, HeadersFollowedExactlyAndLoopFree)
{
    auto sim = static_sim(Protocol::Dsr, manet::testing::random_connected(14, 21), logged());
    std::map<std::uint64_t, Path> header;
    std::map<std::uint64_t, Path> walked;
    bool loopy = false;
    sim->channel().set_tx_observer([&](const Frame& f) {
        std::visit(Overloaded{
                       [&](const DataPacket& d) {
                           loopy |= dsr::has_duplicates(d.route->path);
                           header[d.seq] = d.route->path;
                           walked[d.seq].push_back(f.src);
                       },
                       [&](const dsr::Rreq& q) { loopy |= dsr::has_duplicates(q.record); },
                       [&](const dsr::Rrep& p) { loopy |= dsr::has_duplicates(p.route); },
                       [&](const dsr::Rerr& e) { loopy |= dsr::has_duplicates(e.route); },
                       [](const auto&) {},
                   },
                   f.payload);
    });
    sim->start();
    for (int round = 0; round < 3; ++round)
    {
        for (NodeId s = 0; s < 14; ++s)
            sim->send_data(s, (s + 3 + round) % 14);
        sim->run_until(sim->engine().now() + 2.0);
    }
    EXPECT_FALSE(loopy);
    EXPECT_EQ(sim->metrics().data_received(), 42u);
    for (auto& [seq, path] : walked)
    {
        path.push_back(header[seq].back());
        EXPECT_EQ(path, header[seq]) << "packet " << seq;
    }
    for (NodeId n = 0; n < 14; ++n)
        for (const auto& e : at(*sim, n).cache().entries())
            EXPECT_FALSE(dsr::has_duplicates(e.path));
}

TEST(DsrPackets, Sizes)
{
    EXPECT_EQ(packet_size(dsr::Rreq{0, 0, 0, {1, 2}}), 24u);
    EXPECT_EQ(packet_size(dsr::Rrep{0, 0, {1, 2, 3}}), 28u);
    DataPacket d;
    d.route = SourceRoute{{0, 1, 2}, 0};
    EXPECT_EQ(packet_size(d), 524u);
}
