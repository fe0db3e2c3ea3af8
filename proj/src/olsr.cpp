#include "manet/olsr.hpp"

#include <algorithm>
#include <limits>

namespace manet::olsr
{

std::set<NodeId> strict_two_hop(NodeId self, const TwoHopMap& twoHop)
{
    std::set<NodeId> out;
    for (const auto& [via, reach] : twoHop)
        for (NodeId n : reach)
            if (n != self && twoHop.count(n) == 0)
                out.insert(n);
    return out;
}

std::set<NodeId> select_mprs(NodeId self, const TwoHopMap& twoHop)
{
    const std::set<NodeId> targets = strict_two_hop(self, twoHop);
    std::set<NodeId> mprs;
    std::set<NodeId> uncovered = targets;

    for (NodeId y : targets)
    {
        NodeId only = 0;
        int count = 0;
        for (const auto& [via, reach] : twoHop)
            if (reach.count(y))
            {
                only = via;
                ++count;
            }
        if (count == 1)
            mprs.insert(only);
    }
    for (NodeId m : mprs)
        for (NodeId y : twoHop.at(m))
            uncovered.erase(y);

    while (!uncovered.empty())
    {
        NodeId best = 0;
        std::size_t bestGain = 0;
        for (const auto& [via, reach] : twoHop)
        {
            if (mprs.count(via))
                continue;
            std::size_t gain = 0;
            for (NodeId y : reach)
                gain += uncovered.count(y);
            // Map iteration is in ascending id order, so strict > keeps the lower id on ties.
            if (gain > bestGain)
            {
                best = via;
                bestGain = gain;
            }
        }
        if (bestGain == 0)
            break;
        mprs.insert(best);
        for (NodeId y : twoHop.at(best))
            uncovered.erase(y);
    }
    return mprs;
}

Agent::Agent(NodeId self, Services& services, Config config)
    : RoutingAgent(self, services), config_(config)
{
}

void Agent::start()
{
    RngStream rng = engine().rng_stream(RngPurpose::Protocol, self_);
    const SimTime helloAt = now() + rng.uniform(0.0, config_.helloInterval);
    const SimTime tcAt = now() + rng.uniform(0.0, config_.tcInterval);
    engine().schedule(helloAt, self_, EventKind::Timer, [this] { hello_timer(); });
    engine().schedule(tcAt, self_, EventKind::Timer, [this] { tc_timer(); });
}

void Agent::hello_timer()
{
    if (!alive())
        return;
    emit_hello();
    engine().schedule(now() + config_.helloInterval, self_, EventKind::Timer,
                      [this] { hello_timer(); });
}

void Agent::tc_timer()
{
    if (!alive())
        return;
    emit_tc();
    engine().schedule(now() + config_.tcInterval, self_, EventKind::Timer, [this] { tc_timer(); });
}

void Agent::purge(SimTime t)
{
    for (auto it = neighbors_.begin(); it != neighbors_.end();)
    {
        if (it->second.expiry <= t)
        {
            if (it->second.symmetric)
            {
                routesDirty_ = true;
                mprDirty_ = true;
            }
            twoHop_.erase(it->first);
            it = neighbors_.erase(it);
        }
        else
            ++it;
    }
    for (auto it = twoHop_.begin(); it != twoHop_.end();)
    {
        if (it->second.second <= t)
        {
            mprDirty_ = true;
            routesDirty_ = true;
            it = twoHop_.erase(it);
        }
        else
            ++it;
    }
    std::erase_if(selectors_, [t](const auto& kv) { return kv.second <= t; });
    const auto before = topology_.size();
    std::erase_if(topology_, [t](const auto& kv) { return kv.second.expiry <= t; });
    if (topology_.size() != before)
        routesDirty_ = true;
}

TwoHopMap Agent::two_hop() const
{
    TwoHopMap out;
    for (const auto& [via, nb] : neighbors_)
    {
        if (!nb.symmetric)
            continue;
        auto it = twoHop_.find(via);
        out[via] = it == twoHop_.end() ? std::set<NodeId>{} : it->second.first;
    }
    return out;
}

std::set<NodeId> Agent::mpr_selectors() const
{
    std::set<NodeId> out;
    for (const auto& [n, expiry] : selectors_)
        out.insert(n);
    return out;
}

const std::set<NodeId>& Agent::compute_mprs()
{
    const TwoHopMap th = two_hop();
    mprs_ = select_mprs(self_, th);
    mprDirty_ = false;
    if (observer_)
        observer_(self_, th, mprs_);
    return mprs_;
}

Hello Agent::make_hello()
{
    purge(now());
    if (mprDirty_)
        compute_mprs();
    Hello hello;
    hello.originator = self_;
    for (const auto& [id, nb] : neighbors_)
        hello.neighbors.push_back(HelloEntry{
            id, nb.symmetric ? LinkStatus::Symmetric : LinkStatus::Heard, mprs_.count(id) != 0});
    return hello;
}

void Agent::emit_hello()
{
    Hello hello = make_hello();
    ++hellosSent_;
    broadcast(std::move(hello));
}

void Agent::emit_tc()
{
    purge(now());
    if (selectors_.empty())
        return;
    std::vector<NodeId> advertised;
    for (const auto& [n, expiry] : selectors_)
        advertised.push_back(n);
    if (advertised != lastAdvertised_)
    {
        ++ansn_;
        lastAdvertised_ = advertised;
    }
    ++msgSeq_;
    processed_.insert({self_, msgSeq_});
    forwarded_.insert({self_, msgSeq_});
    ++tcsOriginated_;
    broadcast(Tc{self_, msgSeq_, ansn_, std::move(advertised)});
}

void Agent::on_frame(const Frame& frame)
{
    std::visit(Overloaded{
                   [&](const Hello& p) { process_hello(p, frame.src); },
                   [&](const Tc& p) { process_tc(p, frame.src); },
                   [&](const DataPacket& p) { handle_data(p); },
                   [&](const auto&) { count_malformed(); },
               },
               frame.payload);
}

void Agent::process_hello(const Hello& hello, NodeId sender)
{
    const SimTime t = now();
    const SimTime expiry = t + config_.neighborHold;
    bool listed = false;
    bool selectsUs = false;
    std::set<NodeId> reach;
    for (const auto& e : hello.neighbors)
    {
        if (e.id == self_)
        {
            listed = true;
            selectsUs = e.mpr;
        }
        else if (e.status == LinkStatus::Symmetric)
            reach.insert(e.id);
    }

    auto [it, inserted] = neighbors_.try_emplace(sender);
    NeighborState& nb = it->second;
    if (inserted || nb.symmetric != listed)
    {
        mprDirty_ = true;
        routesDirty_ = true;
    }
    nb.symmetric = listed;
    nb.expiry = expiry;

    if (listed)
    {
        auto& entry = twoHop_[sender];
        if (entry.first != reach)
        {
            entry.first = std::move(reach);
            mprDirty_ = true;
            routesDirty_ = true;
        }
        entry.second = expiry;
    }
    else if (twoHop_.erase(sender))
    {
        mprDirty_ = true;
        routesDirty_ = true;
    }

    if (listed && selectsUs)
        selectors_[sender] = expiry;
    else
        selectors_.erase(sender);
}

void Agent::process_tc(const Tc& tc, NodeId sender)
{
    if (tc.originator == self_)
        return;
    const SimTime t = now();
    const auto key = std::make_pair(tc.originator, tc.msgSeq);

    if (processed_.insert(key).second)
    {
        auto latest = latestAnsn_.find(tc.originator);
        if (latest == latestAnsn_.end() || tc.ansn >= latest->second)
        {
            if (latest == latestAnsn_.end() || tc.ansn > latest->second)
            {
                std::erase_if(topology_,
                              [&](const auto& kv) { return kv.first.first == tc.originator; });
                latestAnsn_[tc.originator] = tc.ansn;
            }
            for (NodeId dest : tc.advertised)
            {
                auto [rec, inserted] = topology_.try_emplace({tc.originator, dest});
                rec->second.ansn = tc.ansn;
                rec->second.expiry = t + config_.topologyHold;
            }
            routesDirty_ = true;
        }
    }

    auto sel = selectors_.find(sender);
    if (sel == selectors_.end() || sel->second <= t)
        return;
    if (!forwarded_.insert(key).second)
        return;
    ++tcForwards_;
    broadcast(tc);
}

void Agent::compute_routing_table()
{
    routes_.clear();
    routesDirty_ = false;

    std::map<NodeId, std::vector<NodeId>> adj;
    for (const auto& [edge, rec] : topology_)
        adj[edge.first].push_back(edge.second);
    for (const auto& [via, entry] : twoHop_)
    {
        auto nb = neighbors_.find(via);
        if (nb == neighbors_.end() || !nb->second.symmetric)
            continue;
        for (NodeId n : entry.first)
            adj[via].push_back(n);
    }

    // BFS by layers. Each node keeps the predecessor with the lowest
    // (next hop, predecessor id).
    std::map<NodeId, std::pair<NodeId, std::uint32_t>> reached; // dest -> (next hop, hops)
    std::vector<NodeId> layer;
    for (const auto& [id, nb] : neighbors_)
    {
        if (!nb.symmetric)
            continue;
        reached[id] = {id, 1};
        layer.push_back(id);
    }
    std::uint32_t hops = 1;
    while (!layer.empty())
    {
        std::map<NodeId, std::pair<NodeId, NodeId>> next; // node -> (next hop, predecessor)
        for (NodeId u : layer)
        {
            auto it = adj.find(u);
            if (it == adj.end())
                continue;
            const NodeId via = reached[u].first;
            for (NodeId v : it->second)
            {
                if (v == self_ || reached.count(v))
                    continue;
                auto [cand, inserted] = next.try_emplace(v, via, u);
                if (!inserted && std::make_pair(via, u) < cand->second)
                    cand->second = {via, u};
            }
        }
        ++hops;
        layer.clear();
        for (const auto& [v, choice] : next)
        {
            reached[v] = {choice.first, hops};
            layer.push_back(v);
        }
    }
    for (const auto& [dest, r] : reached)
    {
        RouteEntry e;
        e.dest = dest;
        e.nextHop = r.first;
        e.hopCount = r.second;
        routes_[dest] = e;
    }
}

std::optional<RouteEntry> Agent::route_lookup(NodeId dest, SimTime t)
{
    purge(t);
    if (routesDirty_)
        compute_routing_table();
    auto it = routes_.find(dest);
    if (it == routes_.end())
        return std::nullopt;
    return it->second;
}

SendOutcome Agent::send_data(DataPacket packet)
{
    if (!alive())
        return SendOutcome::Dropped;
    auto route = route_lookup(packet.dest, now());
    if (!route)
    {
        drop(DropReason::NoRoute);
        return SendOutcome::Dropped;
    }
    const NodeId next = route->nextHop;
    if (unicast(next, std::move(packet)) == TxResult::LinkFailure)
    {
        on_link_failure(next);
        drop(DropReason::LinkBreak);
        return SendOutcome::Dropped;
    }
    return SendOutcome::Sent;
}

void Agent::handle_data(const DataPacket& packet)
{
    if (packet.dest == self_)
    {
        deliver(packet);
        return;
    }
    if (packet.ttl <= 1)
    {
        drop(DropReason::TtlExpired);
        return;
    }
    auto route = route_lookup(packet.dest, now());
    if (!route)
    {
        drop(DropReason::NoRoute);
        return;
    }
    Packet fwd{packet};
    --std::get<DataPacket>(fwd).ttl;
    const NodeId next = route->nextHop;
    if (unicast(next, std::move(fwd)) == TxResult::LinkFailure)
    {
        on_link_failure(next);
        drop(DropReason::LinkBreak);
    }
}

// Link-layer feedback: a failed unicast means the neighbor is gone now,
// not after the hold time runs out.
void Agent::on_link_failure(NodeId neighbor)
{
    auto it = neighbors_.find(neighbor);
    if (it == neighbors_.end())
        return;
    neighbors_.erase(it);
    twoHop_.erase(neighbor);
    selectors_.erase(neighbor);
    mprDirty_ = true;
    routesDirty_ = true;
}

} // namespace manet::olsr
