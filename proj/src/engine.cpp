#include "manet/engine.hpp"

#include <cmath>
#include <cstdio>

namespace manet
{

std::string_view to_string(EventKind kind) noexcept
{
    switch (kind)
    {
    case EventKind::PacketDelivery:
        return "packet-delivery";
    case EventKind::Timer:
        return "timer";
    case EventKind::MobilityLeg:
        return "mobility-leg";
    case EventKind::FlowTick:
        return "flow-tick";
    case EventKind::SimEnd:
        return "sim-end";
    }
    return "unknown";
}

namespace
{

std::uint64_t splitmix64(std::uint64_t& x) noexcept
{
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept
{
    return (x << k) | (x >> (64 - k));
}

} // namespace

RngStream::RngStream(std::uint64_t rootSeed, RngPurpose purpose, std::uint64_t entity) noexcept
{
    // Fold the key into one seed word, then expand with splitmix64.
    std::uint64_t mix = rootSeed;
    std::uint64_t key = splitmix64(mix);
    mix = key ^ (static_cast<std::uint64_t>(purpose) * 0xd1b54a32d192ed03ULL);
    key = splitmix64(mix);
    mix = key ^ (entity * 0x8cb92ba72f3d8dd7ULL + 0x632be59bd9b4e019ULL);
    for (auto& word : state_)
        word = splitmix64(mix);
}

std::uint64_t RngStream::next() noexcept
{
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double RngStream::uniform01() noexcept
{
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) noexcept
{
    return lo + (hi - lo) * uniform01();
}

std::uint64_t RngStream::below(std::uint64_t bound) noexcept
{
    // Rejection sampling keeps the draw unbiased.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do
    {
        x = next();
    } while (x >= limit);
    return x % bound;
}

EventHandle Engine::schedule(SimTime at, NodeId target, EventKind kind, Action action)
{
    if (!(at >= now_) || !std::isfinite(at))
    {
        char buf[128];
        std::snprintf(buf, sizeof buf, "event scheduled at t=%.9f before clock t=%.9f", at, now_);
        throw ScheduleError(buf);
    }
    const std::uint64_t seq = nextSeq_++;
    queue_.push(Entry{at, seq, target, kind, std::move(action)});
    pending_.insert(seq);
    return EventHandle{seq};
}

bool Engine::cancel(EventHandle handle)
{
    return pending_.erase(handle.seq) != 0;
}

std::uint64_t Engine::run(SimTime until)
{
    std::uint64_t count = 0;
    while (!queue_.empty() && queue_.top().at <= until)
    {
        // priority_queue::top is const; the entry is discarded right after.
        Entry entry = std::move(const_cast<Entry&>(queue_.top()));
        queue_.pop();
        if (pending_.erase(entry.seq) == 0)
            continue;
        now_ = entry.at;
        if (logEnabled_)
            log_.push_back(ExecutedEvent{entry.at, entry.seq, entry.target, entry.kind});
        ++executed_;
        ++count;
        entry.action();
    }
    if (until > now_)
        now_ = until;
    return count;
}

std::string format_event_trace(const std::vector<ExecutedEvent>& log)
{
    std::string out;
    out.reserve(log.size() * 48);
    char buf[128];
    for (const auto& e : log)
    {
        int n;
        if (e.target == kSystemTarget)
            n = std::snprintf(buf, sizeof buf, "t=%.9f seq=%llu target=system kind=%s\n", e.at,
                              static_cast<unsigned long long>(e.seq), to_string(e.kind).data());
        else
            n = std::snprintf(buf, sizeof buf, "t=%.9f seq=%llu target=%u kind=%s\n", e.at,
                              static_cast<unsigned long long>(e.seq), e.target,
                              to_string(e.kind).data());
        out.append(buf, static_cast<std::size_t>(n));
    }
    return out;
}

} // namespace manet
