#include "manet/metrics.hpp"
#include "manet/workload.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace manet;

TEST(Cbr, PacketsOffered)
{
    CbrFlow f;
    f.interval = 0.25;
    f.start = 10.0;
    f.stop = 110.0;
    EXPECT_EQ(f.packets_offered(), 400u);
    EXPECT_EQ(f.tick_time(399), 109.75);
    f.stop = 10.0;
    EXPECT_EQ(f.packets_offered(), 0u);
    f.start = 7.3;
    f.stop = 7.31;
    EXPECT_EQ(f.packets_offered(), 1u);
}

TEST(Cbr, GeneratedFlowsFollowSpec)
{
    WorkloadSpec spec;
    RngStream rng(4, RngPurpose::Workload, kSystemTarget);
    auto flows = generate_flows(spec, 50, rng);
    ASSERT_EQ(flows.size(), 10u);
    std::set<std::pair<NodeId, NodeId>> pairs;
    for (std::size_t i = 0; i < flows.size(); ++i)
    {
        const auto& f = flows[i];
        EXPECT_EQ(f.id, i);
        EXPECT_NE(f.src, f.dest);
        EXPECT_LT(f.src, 50u);
        EXPECT_LT(f.dest, 50u);
        EXPECT_GE(f.start, 5.0);
        EXPECT_LT(f.start, 15.0);
        EXPECT_EQ(f.stop, 125.0);
        EXPECT_EQ(f.interval, 0.25);
        EXPECT_EQ(f.packetSize, 512u);
        pairs.insert({f.src, f.dest});
    }
    EXPECT_EQ(pairs.size(), 10u);
}

TEST(Cbr, FlowCountCappedByPairs)
{
    WorkloadSpec spec;
    spec.flows = 100;
    RngStream rng(1, RngPurpose::Workload, kSystemTarget);
    EXPECT_EQ(generate_flows(spec, 3, rng).size(), 6u);
    EXPECT_TRUE(generate_flows(spec, 1, rng).empty());
}

TEST(Cbr, TicksStopAtStop)
{
    auto sim = manet::testing::static_sim(Protocol::Olsr, manet::testing::line(2));
    CbrFlow f{0, 0, 1, 512, 0.25, 10.0, 110.0};
    sim->add_flow(f);
    sim->run();
    EXPECT_EQ(sim->metrics().data_sent(), 400u);
}

TEST(Cbr, DeadSourceStopsFlow)
{
    SimulationSetup s;
    // Idle draw alone drains the battery at t = 50.
    s.energy.initial = 0.2818 * 50.0;
    auto sim = manet::testing::static_sim(Protocol::Dsr, manet::testing::line(2), s);
    CbrFlow f{0, 0, 1, 512, 1.0, 0.5, 125.0};
    sim->add_flow(f);
    sim->run();
    const auto& sent = sim->metrics().packets().at(0);
    EXPECT_LT(sent.rbegin()->second.sentAt, 50.0);
    EXPECT_GE(sim->metrics().data_sent(), 45u);
}

TEST(Metrics, DeliveryRatio)
{
    Metrics m;
    m.record_sent(0, 1, 0.0);
    m.record_delivery(0, 1, 0.0, 0.1);
    EnergyModel e(1, {});
    auto s = finalize(m, e, 1.0, "aodv", 1);
    EXPECT_EQ(s.pdr, 1.0);
    EXPECT_DOUBLE_EQ(s.meanDelay, 0.1);

    Metrics n;
    for (std::uint64_t i = 0; i < 400; ++i)
        n.record_sent(0, i, 0.0);
    for (std::uint64_t i = 0; i < 380; ++i)
        n.record_delivery(0, i, 0.0, 1.0);
    EXPECT_DOUBLE_EQ(finalize(n, e, 1.0, "aodv", 1).pdr, 0.95);
}

TEST(Metrics, DuplicatesCountedOnce)
{
    Metrics m;
    m.record_sent(3, 7, 1.0);
    m.record_delivery(3, 7, 1.0, 1.5);
    m.record_delivery(3, 7, 1.0, 1.6);
    EXPECT_EQ(m.data_received(), 1u);
    EXPECT_EQ(m.duplicates(), 1u);
    EXPECT_DOUBLE_EQ(m.delay_sum(), 0.5);
}

TEST(Metrics, NoTraffic)
{
    Metrics m;
    EnergyModel e(2, {});
    auto s = finalize(m, e, 130.0, "dsr", 1);
    EXPECT_TRUE(s.noTraffic);
    EXPECT_EQ(s.pdr, 1.0);
    EXPECT_NEAR(s.totalEnergy, 2 * 36.634, 1e-9);
    EXPECT_EQ(s.controlEnergy, 0.0);
}

TEST(Metrics, ControlFramesByKind)
{
    Metrics m;
    m.record_control_tx("AODV_RREQ");
    m.record_control_tx("AODV_RREQ");
    m.record_control_tx("AODV_HELLO");
    EXPECT_EQ(m.control_frames(), 3u);
    EXPECT_EQ(m.control_frames_by_type().at("AODV_RREQ"), 2u);
}

TEST(Metrics, ConservationAfterRun)
{
    for (Protocol p : {Protocol::Aodv, Protocol::Dsr, Protocol::Olsr})
    {
        auto sim = manet::testing::static_sim(p, manet::testing::random_connected(10, 6));
        WorkloadSpec spec;
        RngStream rng(1, RngPurpose::Workload, kSystemTarget);
        for (const auto& f : generate_flows(spec, 10, rng))
            sim->add_flow(f);
        auto s = sim->run();
        double residual = 0;
        for (const auto& l : s.ledgers)
        {
            residual += l.residual;
            EXPECT_NEAR(100.0 - l.residual, l.consumed(), 1e-9 * l.consumed());
        }
        EXPECT_NEAR(10 * 100.0 - residual, s.totalEnergy, 1e-9 * s.totalEnergy);
        EXPECT_GE(s.pdr, 0.0);
        EXPECT_LE(s.pdr, 1.0);
    }
}

TEST(Csv, Headers)
{
    EXPECT_EQ(summary_csv_header(),
              "protocol,nodes,seed,duration_s,control_energy_J,total_energy_J,data_sent,"
              "data_recv,pdr,mean_delay_s,ctrl_frames,dead_nodes");
    EXPECT_EQ(node_csv_header(), "protocol,nodes,seed,node_id,residual_J,control_tx_J,"
                                 "control_rx_J,data_tx_J,data_rx_J,idle_J,alive_at_end");
}

TEST(Csv, NineSignificantDigits)
{
    EXPECT_EQ(format_number(3.3792e-3), "0.0033792");
    EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333");
    EXPECT_EQ(format_number(36.634), "36.634");
    EXPECT_EQ(format_number(123456789012.0), "1.23456789e+11");
}
