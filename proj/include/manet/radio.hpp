#pragma once

#include "manet/energy.hpp"
#include "manet/engine.hpp"
#include "manet/mobility.hpp"
#include "manet/packets.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace manet
{

struct RadioConfig
{
    double range = 250.0;              // m
    double bandwidth = 2.0e6;          // bit/s
    SimTime propagationDelay = 1.0e-6; // s
    SimTime broadcastJitterMax = 0.01; // s
    double lossProbability = 0.0;
};

struct Frame
{
    NodeId src = 0;
    std::optional<NodeId> dest; ///< empty for broadcast
    Packet payload;

    bool broadcast() const noexcept { return !dest.has_value(); }
    std::size_t size() const noexcept { return packet_size(payload); }
    PacketClass cls() const noexcept { return packet_class(payload); }
};

Frame make_broadcast(NodeId src, Packet payload);
Frame make_unicast(NodeId src, NodeId dest, Packet payload);

enum class TxResult : std::uint8_t
{
    Sent,
    LinkFailure,
    SourceDead,
};

/// One radio charge, recorded when frame logging is on.
struct FrameRecord
{
    SimTime at;
    NodeId node;
    bool tx;
    std::size_t size;
    PacketClass cls;
    std::string_view kind;
    std::uint32_t flow = 0; // data frames only
    std::uint64_t seq = 0;
};

/// Unit-disk channel: no collisions or carrier sense. Unicast to a node out
/// of range fails at send time, standing in for a missing link-layer ACK.
class Channel
{
public:
    using Receiver = std::function<void(NodeId to, const Frame& frame)>;
    using TxObserver = std::function<void(const Frame& frame)>;

    Channel(Engine& engine, MobilityModel& mobility, EnergyModel& energy, RadioConfig config);

    const RadioConfig& config() const noexcept { return config_; }
    void set_receiver(Receiver receiver) { receiver_ = std::move(receiver); }
    void set_tx_observer(TxObserver observer) { txObserver_ = std::move(observer); }

    bool in_range(NodeId a, NodeId b, SimTime t);
    std::vector<NodeId> neighbors(NodeId node, SimTime t);

    /// Airtime of `bytes` bytes. Throws std::invalid_argument for 0.
    SimTime tx_duration(std::size_t bytes) const;

    /// Sends at the engine's current time.
    TxResult transmit(Frame frame);

    void enable_frame_log(bool on) { logFrames_ = on; }
    const std::vector<FrameRecord>& frame_log() const noexcept { return frameLog_; }

private:
    void record(NodeId node, bool tx, const Frame& frame);
    void schedule_delivery(NodeId to, const std::shared_ptr<const Frame>& frame, SimTime at);

    Engine& engine_;
    MobilityModel& mobility_;
    EnergyModel& energy_;
    RadioConfig config_;
    std::vector<RngStream> jitter_;
    std::vector<RngStream> loss_;
    Receiver receiver_;
    TxObserver txObserver_;
    bool logFrames_ = false;
    std::vector<FrameRecord> frameLog_;
};

} // namespace manet
