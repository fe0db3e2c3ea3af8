#pragma once

#include "manet/aodv.hpp"
#include "manet/dsr.hpp"
#include "manet/energy.hpp"
#include "manet/engine.hpp"
#include "manet/metrics.hpp"
#include "manet/mobility.hpp"
#include "manet/olsr.hpp"
#include "manet/protocol.hpp"
#include "manet/radio.hpp"
#include "manet/workload.hpp"

#include <memory>
#include <string>
#include <vector>

namespace manet
{

struct SimulationSetup
{
    Protocol protocol = Protocol::Aodv;
    std::uint64_t seed = 1;
    SimTime duration = 130.0;
    EnergyParams energy;
    RadioConfig radio;
    aodv::Config aodv;
    dsr::Config dsr;
    olsr::Config olsr;
    bool logEvents = false;
    bool logFrames = false;
    bool traceMobility = false;
};

/// One wired-up run: engine, mobility, energy, channel, metrics and one
/// routing agent per node.
class Simulation
{
public:
    Simulation(SimulationSetup setup, std::unique_ptr<MobilityModel> mobility);

    Simulation(const Simulation&) = delete;
    Simulation& operator=(const Simulation&) = delete;

    std::size_t node_count() const noexcept { return agents_.size(); }
    const SimulationSetup& setup() const noexcept { return setup_; }
    Engine& engine() noexcept { return engine_; }
    Channel& channel() noexcept { return *channel_; }
    EnergyModel& energy() noexcept { return energy_; }
    Metrics& metrics() noexcept { return metrics_; }
    MobilityModel& mobility() noexcept { return *mobility_; }
    RoutingAgent& agent(NodeId n) { return *agents_.at(n); }

    template <class AgentT>
    AgentT& agent_as(NodeId n)
    {
        return dynamic_cast<AgentT&>(*agents_.at(n));
    }

    /// Schedules the flow's ticks. Call before run().
    void add_flow(const CbrFlow& flow);
    const std::vector<CbrFlow>& flows() const noexcept { return flows_; }

    /// Injects one data packet from `src` at the current clock.
    SendOutcome send_data(NodeId src, NodeId dest, std::size_t bytes = 512);

    /// Starts agents and mobility. Idempotent.
    void start();
    void run_until(SimTime t);

    /// Runs to the configured duration and finalizes.
    RunStats run();
    RunStats finalize();

    std::string event_trace() const { return format_event_trace(engine_.log()); }
    const std::string& mobility_trace() const noexcept { return mobilityTrace_; }

private:
    void flow_tick(std::size_t flowIndex, std::uint64_t k);

    SimulationSetup setup_;
    Engine engine_;
    std::unique_ptr<MobilityModel> mobility_;
    EnergyModel energy_;
    Metrics metrics_;
    std::unique_ptr<Channel> channel_;
    std::unique_ptr<Services> services_;
    std::vector<std::unique_ptr<RoutingAgent>> agents_;
    std::vector<CbrFlow> flows_;
    std::uint64_t manualSeq_ = 0;
    bool started_ = false;
    std::string mobilityTrace_;
};

} // namespace manet
