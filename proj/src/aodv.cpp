#include "manet/aodv.hpp"

#include <algorithm>
#include <cmath>

namespace manet::aodv
{

Agent::Agent(NodeId self, Services& services, Config config)
    : RoutingAgent(self, services), config_(config)
{
}

void Agent::start()
{
    // Desynchronize the periodic ticks across nodes.
    RngStream rng = engine().rng_stream(RngPurpose::Protocol, self_);
    const SimTime phase = rng.uniform(0.0, config_.helloInterval);
    engine().schedule(now() + phase, self_, EventKind::Timer, [this] { hello_tick(); });
}

Route* Agent::valid_route(NodeId dest, SimTime t)
{
    auto it = table_.find(dest);
    if (it == table_.end() || !it->second.valid)
        return nullptr;
    if (t >= it->second.expiry)
    {
        it->second.valid = false;
        ++it->second.seq;
        return nullptr;
    }
    return &it->second;
}

std::optional<RouteEntry> Agent::route_lookup(NodeId dest, SimTime t)
{
    const Route* r = valid_route(dest, t);
    if (!r)
        return std::nullopt;
    RouteEntry e;
    e.dest = dest;
    e.nextHop = r->nextHop;
    e.hopCount = r->hops;
    e.valid = true;
    e.freshness = AodvFreshness{r->seq, r->expiry};
    return e;
}

bool Agent::update_route(NodeId dest, std::uint32_t seq, std::uint32_t hops, NodeId nextHop,
                         SimTime t)
{
    if (dest == self_ || hops == 0)
        return false;
    Route* current = valid_route(dest, t);
    const bool accept = current == nullptr || seq > current->seq ||
                        (seq == current->seq && hops < current->hops);
    if (!accept)
        return false;
    Route& r = table_[dest];
    r.nextHop = nextHop;
    r.hops = hops;
    r.seq = seq;
    r.expiry = t + config_.activeRouteTimeout;
    r.valid = true;
    if (observer_)
        observer_(self_, dest);
    return true;
}

void Agent::refresh(NodeId dest, SimTime t)
{
    if (Route* r = valid_route(dest, t))
        r->expiry = std::max(r->expiry, t + config_.activeRouteTimeout);
}

TxResult Agent::broadcast_control(Packet packet)
{
    lastBroadcastAt_ = now();
    return broadcast(std::move(packet));
}

SendOutcome Agent::send_data(DataPacket packet)
{
    if (!alive())
        return SendOutcome::Dropped;
    if (valid_route(packet.dest, now()))
    {
        transmit_data(std::move(packet), true);
        return SendOutcome::Sent;
    }
    buffer_packet(packet);
    originate_rreq(packet.dest);
    return SendOutcome::Queued;
}

void Agent::transmit_data(DataPacket packet, bool atOrigin)
{
    const SimTime t = now();
    Route* r = valid_route(packet.dest, t);
    if (!r)
    {
        drop(DropReason::NoRoute);
        return;
    }
    const NodeId next = r->nextHop;
    refresh(packet.dest, t);
    const NodeId dest = packet.dest;
    if (unicast(next, packet) == TxResult::LinkFailure)
    {
        on_neighbor_lost(next);
        if (atOrigin)
        {
            buffer_packet(packet);
            originate_rreq(dest);
        }
        else
        {
            drop(DropReason::LinkBreak);
        }
    }
}

bool Agent::originate_rreq(NodeId dest)
{
    if (dest == self_ || !alive() || valid_route(dest, now()) || discoveries_.count(dest))
        return false;
    discoveries_[dest] = Discovery{};
    send_rreq(dest);
    return true;
}

void Agent::send_rreq(NodeId dest)
{
    Discovery& d = discoveries_.at(dest);
    ++ownSeq_;
    ++broadcastId_;
    Rreq rreq;
    rreq.src = self_;
    rreq.srcSeq = ownSeq_;
    rreq.broadcastId = broadcastId_;
    rreq.dest = dest;
    auto known = table_.find(dest);
    rreq.destSeqKnown = known == table_.end() ? 0 : known->second.seq;
    rreq.hopCount = 0;
    rreq.ttl = config_.netDiameter;
    seen_[{self_, broadcastId_}] = now() + config_.seenCacheExpiry;
    broadcast_control(rreq);
    const SimTime timeout = config_.retryBase * std::ldexp(1.0, static_cast<int>(d.retries));
    d.timer = engine().schedule(now() + timeout, self_, EventKind::Timer,
                                [this, dest] { on_discovery_timeout(dest); });
}

void Agent::on_discovery_timeout(NodeId dest)
{
    auto it = discoveries_.find(dest);
    if (it == discoveries_.end() || !alive())
        return;
    if (valid_route(dest, now()))
    {
        complete_discovery(dest);
        return;
    }
    if (it->second.retries < config_.rreqRetries)
    {
        ++it->second.retries;
        send_rreq(dest);
        return;
    }
    discoveries_.erase(it);
    drop(DropReason::NoRoute, buffer_.drop(dest));
}

void Agent::complete_discovery(NodeId dest)
{
    auto it = discoveries_.find(dest);
    if (it != discoveries_.end())
    {
        engine().cancel(it->second.timer);
        discoveries_.erase(it);
    }
    for (auto& packet : take_buffered(dest))
        transmit_data(std::move(packet), true);
}

void Agent::on_frame(const Frame& frame)
{
    neighbors_[frame.src] = now();
    std::visit(Overloaded{
                   [&](const Rreq& p) { handle_rreq(p, frame.src); },
                   [&](const Rrep& p) { handle_rrep(p, frame.src); },
                   [&](const Rerr& p) { handle_rerr(p, frame.src); },
                   [&](const Hello&) {},
                   [&](const DataPacket& p) { handle_data(p, frame.src); },
                   [&](const auto&) { count_malformed(); },
               },
               frame.payload);
}

void Agent::handle_rreq(const Rreq& rreq, NodeId sender)
{
    const SimTime t = now();
    const auto key = std::make_pair(rreq.src, rreq.broadcastId);
    auto seen = seen_.find(key);
    if (rreq.src == self_ || (seen != seen_.end() && seen->second > t))
        return;
    seen_[key] = t + config_.seenCacheExpiry;

    const std::uint32_t hops = rreq.hopCount + 1;
    update_route(rreq.src, rreq.srcSeq, hops, sender, t);
    refresh(rreq.src, t);

    if (rreq.dest == self_)
    {
        ownSeq_ = std::max(ownSeq_ + 1, rreq.destSeqKnown);
        Rrep rrep{rreq.src, self_, ownSeq_, 0, config_.activeRouteTimeout};
        if (const Route* back = valid_route(rreq.src, t))
        {
            if (unicast(back->nextHop, rrep) == TxResult::LinkFailure)
                on_neighbor_lost(sender);
        }
        return;
    }

    if (config_.intermediateReply)
    {
        const Route* fwd = valid_route(rreq.dest, t);
        if (fwd && fwd->seq >= rreq.destSeqKnown && fwd->nextHop != sender)
        {
            Rrep rrep{rreq.src, rreq.dest, fwd->seq, fwd->hops, fwd->expiry - t};
            if (const Route* back = valid_route(rreq.src, t))
            {
                if (unicast(back->nextHop, rrep) == TxResult::LinkFailure)
                    on_neighbor_lost(sender);
            }
            return;
        }
    }

    if (rreq.ttl <= 1)
        return;
    Rreq next = rreq;
    next.hopCount = hops;
    next.ttl = rreq.ttl - 1;
    ++rebroadcasts_;
    broadcast_control(next);
}

void Agent::handle_rrep(const Rrep& rrep, NodeId sender)
{
    const SimTime t = now();
    if (rrep.dest == self_)
        return;
    const bool accepted = update_route(rrep.dest, rrep.destSeq, rrep.hopCount + 1, sender, t);

    if (rrep.src == self_)
    {
        if (valid_route(rrep.dest, t))
            complete_discovery(rrep.dest);
        return;
    }
    if (!accepted)
        return;
    Route* back = valid_route(rrep.src, t);
    if (!back)
        return;
    refresh(rrep.src, t);
    Rrep next = rrep;
    next.hopCount = rrep.hopCount + 1;
    const NodeId to = back->nextHop;
    if (unicast(to, next) == TxResult::LinkFailure)
        on_neighbor_lost(to);
}

void Agent::handle_rerr(const Rerr& rerr, NodeId sender)
{
    const SimTime t = now();
    Rerr out;
    for (const auto& [dest, seq] : rerr.unreachable)
    {
        Route* r = valid_route(dest, t);
        if (!r || r->nextHop != sender)
            continue;
        r->valid = false;
        r->seq = std::max(r->seq, seq);
        out.unreachable.emplace_back(dest, r->seq);
    }
    if (!out.unreachable.empty())
        broadcast_control(std::move(out));
}

void Agent::handle_data(const DataPacket& packet, NodeId sender)
{
    const SimTime t = now();
    if (packet.dest == self_)
    {
        refresh(packet.src, t);
        deliver(packet);
        return;
    }
    refresh(packet.src, t);
    if (packet.ttl <= 1)
    {
        drop(DropReason::TtlExpired);
        return;
    }
    if (!valid_route(packet.dest, t))
    {
        // Tell upstream that this node cannot reach the destination.
        drop(DropReason::NoRoute);
        auto known = table_.find(packet.dest);
        Rerr rerr;
        rerr.unreachable.emplace_back(packet.dest,
                                      known == table_.end() ? 0 : known->second.seq);
        broadcast_control(std::move(rerr));
        return;
    }
    (void)sender;
    DataPacket fwd = packet;
    --fwd.ttl;
    transmit_data(std::move(fwd), false);
}

void Agent::on_neighbor_lost(NodeId neighbor)
{
    neighbors_.erase(neighbor);
    const SimTime t = now();
    Rerr rerr;
    for (auto& [dest, route] : table_)
    {
        if (route.nextHop != neighbor || !valid_route(dest, t))
            continue;
        route.valid = false;
        ++route.seq;
        rerr.unreachable.emplace_back(dest, route.seq);
    }
    if (!rerr.unreachable.empty())
        broadcast_control(std::move(rerr));
}

void Agent::hello_tick()
{
    if (!alive())
        return;
    const SimTime t = now();

    const SimTime timeout = config_.helloInterval * config_.allowedHelloLoss;
    std::vector<NodeId> lost;
    for (const auto& [n, heard] : neighbors_)
        if (t - heard > timeout)
            lost.push_back(n);
    for (NodeId n : lost)
        on_neighbor_lost(n);

    std::erase_if(seen_, [t](const auto& kv) { return kv.second <= t; });

    bool active = false;
    for (auto& [dest, route] : table_)
        if (valid_route(dest, t))
        {
            active = true;
            break;
        }
    if (active && t - lastBroadcastAt_ >= config_.helloInterval && alive())
        broadcast_control(Hello{self_, ownSeq_});

    engine().schedule(t + config_.helloInterval, self_, EventKind::Timer, [this] { hello_tick(); });
}

} // namespace manet::aodv
