#include "manet/protocol.hpp"

namespace manet
{

std::string_view to_string(Protocol p) noexcept
{
    switch (p)
    {
    case Protocol::Aodv:
        return "aodv";
    case Protocol::Dsr:
        return "dsr";
    case Protocol::Olsr:
        return "olsr";
    }
    return "unknown";
}

std::optional<Protocol> parse_protocol(std::string_view name) noexcept
{
    if (name == "aodv")
        return Protocol::Aodv;
    if (name == "dsr")
        return Protocol::Dsr;
    if (name == "olsr")
        return Protocol::Olsr;
    return std::nullopt;
}

std::size_t SendBuffer::push(const DataPacket& packet, SimTime now)
{
    auto& q = queues_[packet.dest];
    q.push_back(Held{packet, now});
    std::size_t evicted = 0;
    while (q.size() > capacity_)
    {
        q.pop_front();
        ++evicted;
    }
    return evicted;
}

std::vector<DataPacket> SendBuffer::take(NodeId dest, SimTime now, std::size_t& expired)
{
    expired = 0;
    std::vector<DataPacket> out;
    auto it = queues_.find(dest);
    if (it == queues_.end())
        return out;
    for (auto& held : it->second)
    {
        if (now - held.enqueuedAt > maxHold_)
            ++expired;
        else
            out.push_back(std::move(held.packet));
    }
    queues_.erase(it);
    return out;
}

std::size_t SendBuffer::drop(NodeId dest)
{
    auto it = queues_.find(dest);
    if (it == queues_.end())
        return 0;
    const std::size_t n = it->second.size();
    queues_.erase(it);
    return n;
}

std::size_t SendBuffer::size(NodeId dest) const
{
    auto it = queues_.find(dest);
    return it == queues_.end() ? 0 : it->second.size();
}

void RoutingAgent::handle_packet(const Frame& frame)
{
    if (!alive())
        return;
    on_frame(frame);
}

TxResult RoutingAgent::broadcast(Packet packet)
{
    return svc_.channel.transmit(make_broadcast(self_, std::move(packet)));
}

TxResult RoutingAgent::unicast(NodeId to, Packet packet)
{
    return svc_.channel.transmit(make_unicast(self_, to, std::move(packet)));
}

void RoutingAgent::deliver(const DataPacket& packet)
{
    svc_.metrics.record_delivery(packet.flow, packet.seq, packet.sentAt, now());
}

void RoutingAgent::count_malformed()
{
    ++malformed_;
    svc_.metrics.record_drop(DropReason::Malformed);
}

void RoutingAgent::buffer_packet(const DataPacket& packet)
{
    drop(DropReason::BufferOverflow, buffer_.push(packet, now()));
}

std::vector<DataPacket> RoutingAgent::take_buffered(NodeId dest)
{
    std::size_t expired = 0;
    auto out = buffer_.take(dest, now(), expired);
    drop(DropReason::BufferTimeout, expired);
    return out;
}

} // namespace manet
