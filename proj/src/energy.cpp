#include "manet/energy.hpp"

#include <stdexcept>

namespace manet
{

EnergyModel::EnergyModel(std::size_t nodes, EnergyParams params) : params_(params)
{
    if (params_.initial <= 0 || params_.idlePower <= 0 || params_.rxPower <= 0 ||
        params_.txPower <= 0 || params_.transitionPower <= 0 || params_.sleepPower <= 0 ||
        params_.transitionTime <= 0 || params_.bandwidth <= 0)
        throw std::invalid_argument("energy parameters must be strictly positive");
    EnergyLedger fresh;
    fresh.residual = params_.initial;
    ledgers_.assign(nodes, fresh);
}

double EnergyModel::apply(EnergyLedger& ledger, double joules, double EnergyLedger::*category)
{
    ledger.*category += joules;
    ledger.residual -= joules;
    if (ledger.residual <= 0.0)
        ledger.alive = false;
    return joules;
}

double EnergyModel::accrue_idle(NodeId node, SimTime upTo)
{
    EnergyLedger& ledger = ledgers_.at(node);
    if (!ledger.alive || upTo <= ledger.lastIdleAccrualAt)
        return 0.0;
    const double joules = params_.idlePower * (upTo - ledger.lastIdleAccrualAt);
    ledger.lastIdleAccrualAt = upTo;
    return apply(ledger, joules, &EnergyLedger::idle);
}

double EnergyModel::charge_tx(NodeId node, std::size_t bytes, PacketClass cls, SimTime t)
{
    accrue_idle(node, t);
    EnergyLedger& ledger = ledgers_.at(node);
    if (!ledger.alive)
        return 0.0;
    return apply(ledger, params_.tx_energy(bytes),
                 cls == PacketClass::Control ? &EnergyLedger::controlTx : &EnergyLedger::dataTx);
}

double EnergyModel::charge_rx(NodeId node, std::size_t bytes, PacketClass cls, SimTime t)
{
    accrue_idle(node, t);
    EnergyLedger& ledger = ledgers_.at(node);
    if (!ledger.alive)
        return 0.0;
    return apply(ledger, params_.rx_energy(bytes),
                 cls == PacketClass::Control ? &EnergyLedger::controlRx : &EnergyLedger::dataRx);
}

double EnergyModel::charge_transition(NodeId node, SimTime t)
{
    accrue_idle(node, t);
    EnergyLedger& ledger = ledgers_.at(node);
    if (!ledger.alive)
        return 0.0;
    return apply(ledger, params_.transitionPower * params_.transitionTime, &EnergyLedger::sleep);
}

} // namespace manet
