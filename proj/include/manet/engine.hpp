#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace manet
{

/// Simulation time in seconds.
using SimTime = double;

using NodeId = std::uint32_t;

/// Target id used for events that belong to no particular node.
inline constexpr NodeId kSystemTarget = std::numeric_limits<NodeId>::max();

enum class EventKind : std::uint8_t
{
    PacketDelivery,
    Timer,
    MobilityLeg,
    FlowTick,
    SimEnd,
};

std::string_view to_string(EventKind kind) noexcept;

struct EventHandle
{
    std::uint64_t seq = 0;
    bool valid() const noexcept { return seq != 0; }
};

/// One executed event as recorded in the engine log.
struct ExecutedEvent
{
    SimTime at;
    std::uint64_t seq;
    NodeId target;
    EventKind kind;
};

class ScheduleError : public std::logic_error
{
public:
    using std::logic_error::logic_error;
};

enum class RngPurpose : std::uint8_t
{
    Placement = 1,
    Mobility = 2,
    Workload = 3,
    Jitter = 4,
    Loss = 5,
    Protocol = 6,
    Topology = 7,
};

/// Deterministic random stream keyed by (root seed, purpose, entity).
///
/// The generator is xoshiro256** seeded through splitmix64, so sequences are
/// identical across standard library implementations.
class RngStream
{
public:
    RngStream(std::uint64_t rootSeed, RngPurpose purpose, std::uint64_t entity) noexcept;

    std::uint64_t next() noexcept;
    /// Uniform in [0, 1).
    double uniform01() noexcept;
    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) noexcept;
    /// Uniform integer in [0, bound). bound must be > 0.
    std::uint64_t below(std::uint64_t bound) noexcept;

private:
    std::uint64_t state_[4];
};

/// Single-threaded discrete-event engine. Events run in (time, seq) order.
class Engine
{
public:
    using Action = std::function<void()>;

    explicit Engine(std::uint64_t rootSeed = 1) : rootSeed_(rootSeed) {}

    Engine(const Engine&) = delete;
    Engine& operator=(const Engine&) = delete;
    Engine(Engine&&) = default;
    Engine& operator=(Engine&&) = default;

    SimTime now() const noexcept { return now_; }
    std::uint64_t root_seed() const noexcept { return rootSeed_; }

    /// Throws ScheduleError when `at` lies before the current clock.
    EventHandle schedule(SimTime at, NodeId target, EventKind kind, Action action);
    EventHandle schedule_in(SimTime delay, NodeId target, EventKind kind, Action action)
    {
        return schedule(now_ + delay, target, kind, std::move(action));
    }

    bool cancel(EventHandle handle);
    bool pending(EventHandle handle) const { return pending_.count(handle.seq) != 0; }

    /// Executes every event with time <= until, then sets the clock to until.
    std::uint64_t run(SimTime until);

    RngStream rng_stream(RngPurpose purpose, std::uint64_t entity) const noexcept
    {
        return RngStream(rootSeed_, purpose, entity);
    }

    void enable_log(bool on) { logEnabled_ = on; }
    const std::vector<ExecutedEvent>& log() const noexcept { return log_; }
    std::uint64_t executed() const noexcept { return executed_; }
    std::size_t queued() const noexcept { return pending_.size(); }

private:
    struct Entry
    {
        SimTime at;
        std::uint64_t seq;
        NodeId target;
        EventKind kind;
        Action action;
    };
    struct Later
    {
        bool operator()(const Entry& a, const Entry& b) const noexcept
        {
            if (a.at != b.at)
                return a.at > b.at;
            return a.seq > b.seq;
        }
    };

    std::uint64_t rootSeed_;
    SimTime now_ = 0.0;
    std::uint64_t nextSeq_ = 1;
    std::uint64_t executed_ = 0;
    std::priority_queue<Entry, std::vector<Entry>, Later> queue_;
    std::unordered_set<std::uint64_t> pending_;
    bool logEnabled_ = false;
    std::vector<ExecutedEvent> log_;
};

/// Renders the log as `t=<sec> seq=<n> target=<id> kind=<tag>` lines.
std::string format_event_trace(const std::vector<ExecutedEvent>& log);

} // namespace manet
