#include "manet/energy.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace manet;

namespace
{

// Hand-evaluated joules: power * bytes * 8 / 2e6.
constexpr double kTx512 = 1.65 * 4096 / 2e6;
constexpr double kRx512 = 1.1 * 4096 / 2e6;
constexpr double kTx64 = 1.65 * 512 / 2e6;
constexpr double kRx64 = 1.1 * 512 / 2e6;

} // namespace

TEST(Energy, Defaults)
{
    EnergyParams p;
    EXPECT_EQ(p.initial, 100.0);
    EXPECT_EQ(p.idlePower, 0.2818);
    EXPECT_EQ(p.rxPower, 1.1);
    EXPECT_EQ(p.txPower, 1.65);
    EXPECT_EQ(p.transitionPower, 0.6);
    EXPECT_EQ(p.sleepPower, 0.001);
    EXPECT_EQ(p.transitionTime, 0.005);
    EnergyModel m(1, p);
    auto l = m.report(0);
    EXPECT_EQ(l.residual, 100.0);
    EXPECT_EQ(l.consumed(), 0.0);
    EXPECT_TRUE(l.alive);
}

TEST(Energy, PerPacketCharges)
{
    EnergyModel m(1, {});
    EXPECT_NEAR(m.charge_tx(0, 512, PacketClass::Data, 0), 3.3792e-3, 1e-12);
    EXPECT_NEAR(m.charge_rx(0, 512, PacketClass::Data, 0), 2.2528e-3, 1e-12);
    EXPECT_NEAR(m.charge_tx(0, 64, PacketClass::Control, 0), 4.224e-4, 1e-12);
    EXPECT_NEAR(m.charge_rx(0, 64, PacketClass::Control, 0), 2.816e-4, 1e-12);
    auto l = m.report(0);
    EXPECT_NEAR(l.dataTx, kTx512, 1e-15);
    EXPECT_NEAR(l.dataRx, kRx512, 1e-15);
    EXPECT_NEAR(l.control_energy(), 7.04e-4, 1e-12);
    EXPECT_LT(kRx64, kTx64);
}

TEST(Energy, IdleAccrual)
{
    EnergyModel m(1, {});
    EXPECT_NEAR(m.accrue_idle(0, 130.0), 36.634, 1e-9);
    EXPECT_EQ(m.accrue_idle(0, 130.0), 0.0);

    EnergyModel split(1, {});
    double sum = split.accrue_idle(0, 65.0) + split.accrue_idle(0, 130.0);
    EXPECT_NEAR(sum, 36.634, 1e-12);
}

TEST(Energy, ChargesAccrueIdleFirst)
{
    EnergyModel m(1, {});
    m.charge_tx(0, 64, PacketClass::Control, 10.0);
    auto l = m.report(0);
    EXPECT_NEAR(l.idle, 2.818, 1e-12);
    EXPECT_EQ(l.lastIdleAccrualAt, 10.0);
}

TEST(Energy, Conservation)
{
    EnergyModel m(3, {});
    SimTime t = 0;
    for (int i = 0; i < 3000; ++i)
    {
        t += 0.01;
        const NodeId n = static_cast<NodeId>(i % 3);
        const std::size_t bytes = 16 + static_cast<std::size_t>(i % 500);
        if (i % 2)
            m.charge_tx(n, bytes, i % 3 ? PacketClass::Data : PacketClass::Control, t);
        else
            m.charge_rx(n, bytes, i % 5 ? PacketClass::Data : PacketClass::Control, t);
        const auto l = m.report(n);
        ASSERT_NEAR(100.0 - l.residual, l.consumed(), 1e-9 * l.consumed());
    }
}

TEST(Energy, Linearity)
{
    EnergyModel a(1, {}), b(1, {});
    a.charge_tx(0, 100, PacketClass::Data, 0);
    a.charge_tx(0, 412, PacketClass::Data, 0);
    b.charge_tx(0, 512, PacketClass::Data, 0);
    EXPECT_NEAR(a.report(0).dataTx, b.report(0).dataTx, 1e-15);
}

TEST(Energy, MonotoneDrainAndDeath)
{
    EnergyParams p;
    p.initial = 1e-6;
    EnergyModel m(1, p);
    const double charged = m.charge_tx(0, 512, PacketClass::Data, 0);
    auto l = m.report(0);
    EXPECT_FALSE(l.alive);
    EXPECT_GE(l.residual, -charged);
    EXPECT_EQ(m.charge_tx(0, 512, PacketClass::Data, 1.0), 0.0);
    EXPECT_EQ(m.charge_rx(0, 512, PacketClass::Data, 1.0), 0.0);
    EXPECT_EQ(m.accrue_idle(0, 5.0), 0.0);
    EXPECT_EQ(m.report(0).residual, l.residual);
}

TEST(Energy, TransitionCharge)
{
    EnergyModel m(1, {});
    EXPECT_NEAR(m.charge_transition(0, 0.0), 0.6 * 0.005, 1e-15);
    EXPECT_NEAR(m.report(0).sleep, 3e-3, 1e-15);
}

TEST(Energy, RejectsNonPositiveParameters)
{
    EnergyParams p;
    p.bandwidth = 0;
    EXPECT_THROW(EnergyModel(1, p), std::invalid_argument);
    p = {};
    p.initial = -1;
    EXPECT_THROW(EnergyModel(1, p), std::invalid_argument);
}
