#pragma once

#include "manet/engine.hpp"

#include <cstddef>
#include <vector>

namespace manet
{

enum class PacketClass : std::uint8_t
{
    Control,
    Data,
};

/// Radio energy parameters. Defaults are the reference experiment's values;
/// `bandwidth` converts a packet size into airtime.
struct EnergyParams
{
    double initial = 100.0;          // J
    double idlePower = 0.2818;       // W
    double rxPower = 1.1;            // W
    double txPower = 1.65;           // W
    double transitionPower = 0.6;    // W
    double sleepPower = 0.001;       // W
    double transitionTime = 0.005;   // s
    double bandwidth = 2.0e6;        // bit/s

    /// Joules to send `bytes` at txPower.
    double tx_energy(std::size_t bytes) const noexcept
    {
        return txPower * static_cast<double>(bytes * 8) / bandwidth;
    }
    double rx_energy(std::size_t bytes) const noexcept
    {
        return rxPower * static_cast<double>(bytes * 8) / bandwidth;
    }
};

struct EnergyLedger
{
    double residual = 0.0;
    double controlTx = 0.0;
    double controlRx = 0.0;
    double dataTx = 0.0;
    double dataRx = 0.0;
    double idle = 0.0;
    double sleep = 0.0;
    bool alive = true;
    SimTime lastIdleAccrualAt = 0.0;

    double control_energy() const noexcept { return controlTx + controlRx; }
    double consumed() const noexcept { return controlTx + controlRx + dataTx + dataRx + idle + sleep; }
};

/// Per-node ledgers. Every charge first accrues idle power up to the charge
/// time; a node whose residual reaches zero is dead for the rest of the run.
class EnergyModel
{
public:
    EnergyModel(std::size_t nodes, EnergyParams params);

    const EnergyParams& params() const noexcept { return params_; }
    std::size_t size() const noexcept { return ledgers_.size(); }
    bool alive(NodeId node) const { return ledgers_.at(node).alive; }

    double charge_tx(NodeId node, std::size_t bytes, PacketClass cls, SimTime t);
    double charge_rx(NodeId node, std::size_t bytes, PacketClass cls, SimTime t);
    double accrue_idle(NodeId node, SimTime upTo);

    /// Sleep/wake transition charge (transitionPower * transitionTime). No
    /// implemented protocol sleeps; kept so the parameter set is complete.
    double charge_transition(NodeId node, SimTime t);

    EnergyLedger report(NodeId node) const { return ledgers_.at(node); }
    const std::vector<EnergyLedger>& ledgers() const noexcept { return ledgers_; }

private:
    double apply(EnergyLedger& ledger, double joules, double EnergyLedger::*category);

    EnergyParams params_;
    std::vector<EnergyLedger> ledgers_;
};

} // namespace manet
