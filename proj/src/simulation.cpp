#include "manet/simulation.hpp"

#include <algorithm>
#include <cstdio>

namespace manet
{

namespace
{

/// Flow id reserved for packets injected by send_data().
constexpr std::uint32_t kManualFlow = 0xFFFFFFFFu;

} // namespace

Simulation::Simulation(SimulationSetup setup, std::unique_ptr<MobilityModel> mobility)
    : setup_(setup), engine_(setup.seed), mobility_(std::move(mobility)),
      energy_(mobility_->node_count(), setup.energy)
{
    engine_.enable_log(setup_.logEvents);
    channel_ = std::make_unique<Channel>(engine_, *mobility_, energy_, setup_.radio);
    channel_->enable_frame_log(setup_.logFrames);
    services_ = std::make_unique<Services>(
        Services{engine_, *channel_, energy_, metrics_, mobility_->node_count()});

    const std::size_t n = mobility_->node_count();
    agents_.reserve(n);
    for (NodeId i = 0; i < n; ++i)
    {
        switch (setup_.protocol)
        {
        case Protocol::Aodv:
            agents_.push_back(std::make_unique<aodv::Agent>(i, *services_, setup_.aodv));
            break;
        case Protocol::Dsr:
            agents_.push_back(std::make_unique<dsr::Agent>(i, *services_, setup_.dsr));
            break;
        case Protocol::Olsr:
            agents_.push_back(std::make_unique<olsr::Agent>(i, *services_, setup_.olsr));
            break;
        }
    }
    channel_->set_receiver([this](NodeId to, const Frame& frame) { agents_[to]->handle_packet(frame); });
    channel_->set_tx_observer([this](const Frame& frame) {
        if (frame.cls() == PacketClass::Control)
            metrics_.record_control_tx(packet_kind(frame.payload));
    });
}

void Simulation::start()
{
    if (started_)
        return;
    started_ = true;
    MobilityModel::TransitionObserver observer;
    if (setup_.traceMobility)
    {
        observer = [this](NodeId node, SimTime t, const Position& p) {
            char buf[128];
            const int len =
                std::snprintf(buf, sizeof buf, "t=%.9f node=%u x=%.9f y=%.9f\n", t, node, p.x, p.y);
            mobilityTrace_.append(buf, static_cast<std::size_t>(len));
        };
    }
    mobility_->attach(engine_, std::move(observer));
    for (auto& agent : agents_)
        agent->start();
    engine_.schedule(std::max(setup_.duration, engine_.now()), kSystemTarget, EventKind::SimEnd,
                     [] {});
}

void Simulation::add_flow(const CbrFlow& flow)
{
    flows_.push_back(flow);
    const std::size_t index = flows_.size() - 1;
    if (flow.packets_offered() == 0)
        return;
    engine_.schedule(flow.tick_time(0), flow.src, EventKind::FlowTick,
                     [this, index] { flow_tick(index, 0); });
}

void Simulation::flow_tick(std::size_t flowIndex, std::uint64_t k)
{
    const CbrFlow& flow = flows_[flowIndex];
    if (!energy_.alive(flow.src))
        return;
    DataPacket packet;
    packet.flow = flow.id;
    packet.seq = k + 1;
    packet.src = flow.src;
    packet.dest = flow.dest;
    packet.payload = flow.packetSize;
    packet.sentAt = engine_.now();
    metrics_.record_sent(packet.flow, packet.seq, packet.sentAt);
    agents_[flow.src]->send_data(std::move(packet));

    const SimTime next = flow.tick_time(k + 1);
    if (next < flow.stop)
        engine_.schedule(next, flow.src, EventKind::FlowTick,
                         [this, flowIndex, k] { flow_tick(flowIndex, k + 1); });
}

SendOutcome Simulation::send_data(NodeId src, NodeId dest, std::size_t bytes)
{
    DataPacket packet;
    packet.flow = kManualFlow;
    packet.seq = ++manualSeq_;
    packet.src = src;
    packet.dest = dest;
    packet.payload = bytes;
    packet.sentAt = engine_.now();
    metrics_.record_sent(packet.flow, packet.seq, packet.sentAt);
    return agents_.at(src)->send_data(std::move(packet));
}

void Simulation::run_until(SimTime t)
{
    start();
    engine_.run(t);
}

RunStats Simulation::run()
{
    run_until(setup_.duration);
    return finalize();
}

RunStats Simulation::finalize()
{
    return manet::finalize(metrics_, energy_, engine_.now(), std::string(to_string(setup_.protocol)),
                           setup_.seed);
}

} // namespace manet
