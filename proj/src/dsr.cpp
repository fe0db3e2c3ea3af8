#include "manet/dsr.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace manet::dsr
{

bool has_duplicates(const std::vector<NodeId>& path)
{
    std::unordered_set<NodeId> seen;
    for (NodeId n : path)
        if (!seen.insert(n).second)
            return true;
    return false;
}

void RouteCache::purge(SimTime t)
{
    std::erase_if(entries_, [&](const Entry& e) { return t - e.insertedAt > lifetime_; });
}

bool RouteCache::insert(std::vector<NodeId> path, SimTime t)
{
    if (path.size() < 2 || has_duplicates(path))
        return false;
    std::erase_if(entries_, [&](const Entry& e) { return e.path == path; });
    entries_.push_back(Entry{std::move(path), t});
    while (entries_.size() > capacity_)
        entries_.erase(entries_.begin());
    return true;
}

std::optional<std::vector<NodeId>> RouteCache::lookup(NodeId dest, SimTime t)
{
    purge(t);
    std::optional<std::vector<NodeId>> best;
    for (const auto& e : entries_)
    {
        auto it = std::find(e.path.begin() + 1, e.path.end(), dest);
        if (it == e.path.end())
            continue;
        const auto len = static_cast<std::size_t>(it - e.path.begin()) + 1;
        if (!best || len <= best->size())
            best.emplace(e.path.begin(), it + 1);
    }
    return best;
}

std::size_t RouteCache::remove_link(NodeId a, NodeId b)
{
    return std::erase_if(entries_, [&](const Entry& e) {
        for (std::size_t i = 0; i + 1 < e.path.size(); ++i)
        {
            if ((e.path[i] == a && e.path[i + 1] == b) || (e.path[i] == b && e.path[i + 1] == a))
                return true;
        }
        return false;
    });
}

Agent::Agent(NodeId self, Services& services, Config config)
    : RoutingAgent(self, services), config_(config),
      cache_(config.cacheCapacity, config.cacheLifetime)
{
}

std::optional<RouteEntry> Agent::route_lookup(NodeId dest, SimTime t)
{
    auto path = cache_.lookup(dest, t);
    if (!path)
        return std::nullopt;
    RouteEntry e;
    e.dest = dest;
    e.nextHop = (*path)[1];
    e.hopCount = static_cast<std::uint32_t>(path->size() - 1);
    e.freshness = std::move(*path);
    return e;
}

SendOutcome Agent::send_data(DataPacket packet)
{
    if (!alive())
        return SendOutcome::Dropped;
    if (send_from_origin(packet))
        return SendOutcome::Sent;
    buffer_packet(packet);
    originate_discovery(packet.dest);
    return SendOutcome::Queued;
}

bool Agent::send_from_origin(DataPacket& packet)
{
    // A broken first hop purges the path; fall back to the next cached one.
    while (auto path = cache_.lookup(packet.dest, now()))
    {
        const NodeId next = (*path)[1];
        DataPacket out = packet;
        out.route = SourceRoute{std::move(*path), 1};
        if (unicast(next, std::move(out)) == TxResult::Sent)
            return true;
        cache_.remove_link(self_, next);
    }
    return false;
}

bool Agent::originate_discovery(NodeId dest)
{
    if (dest == self_ || !alive() || discoveries_.count(dest) || cache_.lookup(dest, now()))
        return false;
    discoveries_[dest] = Discovery{};
    send_rreq(dest);
    return true;
}

void Agent::send_rreq(NodeId dest)
{
    Discovery& d = discoveries_.at(dest);
    ++requestId_;
    seen_.insert({self_, requestId_});
    broadcast(Rreq{self_, requestId_, dest, {}});
    const SimTime timeout = config_.retryBase * std::ldexp(1.0, static_cast<int>(d.retries));
    d.timer = engine().schedule(now() + timeout, self_, EventKind::Timer,
                                [this, dest] { on_discovery_timeout(dest); });
}

void Agent::on_discovery_timeout(NodeId dest)
{
    auto it = discoveries_.find(dest);
    if (it == discoveries_.end() || !alive())
        return;
    if (cache_.lookup(dest, now()))
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
    auto pending = take_buffered(dest);
    for (std::size_t i = 0; i < pending.size(); ++i)
    {
        if (!send_from_origin(pending[i]))
        {
            // Every cached path failed at the first hop: requeue and rediscover.
            for (std::size_t j = i; j < pending.size(); ++j)
                buffer_packet(pending[j]);
            originate_discovery(dest);
            return;
        }
    }
}

void Agent::on_frame(const Frame& frame)
{
    std::visit(Overloaded{
                   [&](const Rreq& p) { handle_rreq(p); },
                   [&](const Rrep& p) { handle_rrep(p); },
                   [&](const Rerr& p) { handle_rerr(p); },
                   [&](const DataPacket& p) { handle_data(p); },
                   [&](const auto&) { count_malformed(); },
               },
               frame.payload);
}

void Agent::handle_rreq(const Rreq& rreq)
{
    const SimTime t = now();
    if (rreq.src == self_ || seen_.count({rreq.src, rreq.requestId}) ||
        std::find(rreq.record.begin(), rreq.record.end(), self_) != rreq.record.end())
        return;
    seen_.insert({rreq.src, rreq.requestId});

    // Path from here back to the initiator.
    std::vector<NodeId> back{self_};
    back.insert(back.end(), rreq.record.rbegin(), rreq.record.rend());
    back.push_back(rreq.src);

    if (rreq.dest == self_)
    {
        cache_.insert(back, t);
        std::vector<NodeId> full{rreq.src};
        full.insert(full.end(), rreq.record.begin(), rreq.record.end());
        full.push_back(self_);
        const NodeId prev = full[full.size() - 2];
        if (unicast(prev, Rrep{rreq.src, self_, std::move(full)}) == TxResult::LinkFailure)
            cache_.remove_link(self_, prev);
        return;
    }

    cache_.insert(back, t);

    if (config_.replyFromCache)
    {
        if (auto tail = cache_.lookup(rreq.dest, t))
        {
            std::vector<NodeId> full{rreq.src};
            full.insert(full.end(), rreq.record.begin(), rreq.record.end());
            full.insert(full.end(), tail->begin(), tail->end());
            if (!has_duplicates(full))
            {
                const NodeId prev = rreq.record.empty() ? rreq.src : rreq.record.back();
                if (unicast(prev, Rrep{rreq.src, rreq.dest, std::move(full)}) ==
                    TxResult::LinkFailure)
                    cache_.remove_link(self_, prev);
                return;
            }
        }
    }

    Rreq next = rreq;
    next.record.push_back(self_);
    broadcast(std::move(next));
}

void Agent::handle_rrep(const Rrep& rrep)
{
    const SimTime t = now();
    const auto& route = rrep.route;
    auto pos = std::find(route.begin(), route.end(), self_);
    if (pos == route.end() || has_duplicates(route) || route.size() < 2)
    {
        count_malformed();
        return;
    }
    const auto i = static_cast<std::size_t>(pos - route.begin());
    cache_.insert(std::vector<NodeId>(route.begin() + static_cast<std::ptrdiff_t>(i), route.end()),
                  t);
    if (i > 0)
    {
        std::vector<NodeId> back(route.rend() - static_cast<std::ptrdiff_t>(i) - 1, route.rend());
        cache_.insert(std::move(back), t);
    }

    if (i == 0)
    {
        complete_discovery(rrep.dest);
        return;
    }
    const NodeId prev = route[i - 1];
    if (unicast(prev, rrep) == TxResult::LinkFailure)
        cache_.remove_link(self_, prev);
}

void Agent::handle_rerr(Rerr rerr)
{
    cache_.remove_link(rerr.from, rerr.to);
    if (rerr.cursor >= rerr.route.size() || rerr.route[rerr.cursor] != self_)
    {
        count_malformed();
        return;
    }
    if (rerr.cursor + 1 == rerr.route.size())
        return; // reached the data source
    const NodeId next = rerr.route[rerr.cursor + 1];
    ++rerr.cursor;
    if (unicast(next, std::move(rerr)) == TxResult::LinkFailure)
        cache_.remove_link(self_, next);
}

void Agent::handle_data(DataPacket packet)
{
    if (!packet.route || packet.route->cursor >= packet.route->path.size() ||
        packet.route->path[packet.route->cursor] != self_)
    {
        count_malformed();
        return;
    }
    if (packet.route->cursor + 1 == packet.route->path.size())
    {
        deliver(packet);
        return;
    }
    forward_source_routed(std::move(packet));
}

void Agent::forward_source_routed(DataPacket packet)
{
    SourceRoute& sr = *packet.route;
    const NodeId next = sr.path[sr.cursor + 1];
    ++sr.cursor;
    if (unicast(next, packet) == TxResult::Sent)
        return;
    cache_.remove_link(self_, next);
    --sr.cursor;
    report_broken_link(packet, next);
    drop(DropReason::LinkBreak);
}

void Agent::report_broken_link(const DataPacket& packet, NodeId next)
{
    const SourceRoute& sr = *packet.route;
    Rerr rerr;
    rerr.from = self_;
    rerr.to = next;
    for (std::size_t k = sr.cursor + 1; k-- > 0;)
        rerr.route.push_back(sr.path[k]);
    rerr.cursor = 1;
    const NodeId toward = rerr.route[1];
    if (unicast(toward, std::move(rerr)) == TxResult::LinkFailure)
        cache_.remove_link(self_, toward);
}

} // namespace manet::dsr
