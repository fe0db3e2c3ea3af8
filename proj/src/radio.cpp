#include "manet/radio.hpp"

#include <stdexcept>

namespace manet
{

Frame make_broadcast(NodeId src, Packet payload)
{
    return Frame{src, std::nullopt, std::move(payload)};
}

Frame make_unicast(NodeId src, NodeId dest, Packet payload)
{
    return Frame{src, dest, std::move(payload)};
}

Channel::Channel(Engine& engine, MobilityModel& mobility, EnergyModel& energy, RadioConfig config)
    : engine_(engine), mobility_(mobility), energy_(energy), config_(config)
{
    if (config_.range <= 0 || config_.bandwidth <= 0 || config_.propagationDelay < 0 ||
        config_.broadcastJitterMax < 0 || config_.lossProbability < 0 ||
        config_.lossProbability > 1)
        throw std::invalid_argument("invalid radio configuration");
    const std::size_t n = mobility_.node_count();
    jitter_.reserve(n);
    loss_.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        jitter_.push_back(engine_.rng_stream(RngPurpose::Jitter, i));
        loss_.push_back(engine_.rng_stream(RngPurpose::Loss, i));
    }
}

bool Channel::in_range(NodeId a, NodeId b, SimTime t)
{
    return distance(mobility_.position_at(a, t), mobility_.position_at(b, t)) <= config_.range;
}

std::vector<NodeId> Channel::neighbors(NodeId node, SimTime t)
{
    std::vector<NodeId> out;
    const Position self = mobility_.position_at(node, t);
    for (NodeId other = 0; other < mobility_.node_count(); ++other)
    {
        if (other != node && distance(self, mobility_.position_at(other, t)) <= config_.range)
            out.push_back(other);
    }
    return out;
}

SimTime Channel::tx_duration(std::size_t bytes) const
{
    if (bytes == 0)
        throw std::invalid_argument("frame size must be at least one byte");
    return static_cast<double>(bytes * 8) / config_.bandwidth;
}

void Channel::record(NodeId node, bool tx, const Frame& frame)
{
    if (!logFrames_)
        return;
    FrameRecord r{engine_.now(), node, tx, frame.size(), frame.cls(), packet_kind(frame.payload)};
    if (const auto* data = std::get_if<DataPacket>(&frame.payload))
    {
        r.flow = data->flow;
        r.seq = data->seq;
    }
    frameLog_.push_back(r);
}

TxResult Channel::transmit(Frame frame)
{
    const SimTime now = engine_.now();
    const NodeId src = frame.src;
    if (!energy_.alive(src))
        return TxResult::SourceDead;

    // Idle accrual inside the charge can finish the node off.
    if (energy_.charge_tx(src, frame.size(), frame.cls(), now) <= 0.0)
        return TxResult::SourceDead;
    record(src, true, frame);
    if (txObserver_)
        txObserver_(frame);

    const SimTime airtime = tx_duration(frame.size()) + config_.propagationDelay;
    auto shared = std::make_shared<const Frame>(std::move(frame));

    if (!shared->broadcast())
    {
        const NodeId to = *shared->dest;
        if (to == src || to >= mobility_.node_count() || !in_range(src, to, now))
            return TxResult::LinkFailure;
        if (config_.lossProbability > 0 && loss_[src].uniform01() < config_.lossProbability)
            return TxResult::Sent;
        schedule_delivery(to, shared, now + airtime);
        return TxResult::Sent;
    }

    const SimTime jitter =
        config_.broadcastJitterMax > 0 ? jitter_[src].uniform(0.0, config_.broadcastJitterMax) : 0.0;
    for (NodeId r : neighbors(src, now))
    {
        if (config_.lossProbability > 0 && loss_[src].uniform01() < config_.lossProbability)
            continue;
        schedule_delivery(r, shared, now + airtime + jitter);
    }
    return TxResult::Sent;
}

void Channel::schedule_delivery(NodeId to, const std::shared_ptr<const Frame>& frame, SimTime at)
{
    engine_.schedule(at, to, EventKind::PacketDelivery, [this, to, frame] {
        if (!energy_.alive(to) ||
            energy_.charge_rx(to, frame->size(), frame->cls(), engine_.now()) <= 0.0)
            return;
        record(to, false, *frame);
        if (energy_.alive(to) && receiver_)
            receiver_(to, *frame);
    });
}

} // namespace manet
