#pragma once

#include "manet/energy.hpp"
#include "manet/engine.hpp"

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace manet
{

/// DSR source-route header carried by data packets.
struct SourceRoute
{
    std::vector<NodeId> path;
    std::size_t cursor = 0; ///< index of the node currently holding the packet

    std::size_t header_bytes() const noexcept { return 4 * path.size(); }
};

struct DataPacket
{
    std::uint32_t flow = 0;
    std::uint64_t seq = 0;
    NodeId src = 0;
    NodeId dest = 0;
    std::size_t payload = 512;
    SimTime sentAt = 0.0;
    std::uint32_t ttl = 64; ///< hop limit for hop-by-hop forwarding
    std::optional<SourceRoute> route;

    std::size_t size() const noexcept { return payload + (route ? route->header_bytes() : 0); }
};

namespace aodv
{

struct Rreq
{
    NodeId src = 0;
    std::uint32_t srcSeq = 0;
    std::uint32_t broadcastId = 0;
    NodeId dest = 0;
    std::uint32_t destSeqKnown = 0;
    std::uint32_t hopCount = 0;
    std::uint32_t ttl = 0;

    static constexpr std::size_t size() noexcept { return 24; }
};

struct Rrep
{
    NodeId src = 0; ///< originator of the discovery
    NodeId dest = 0;
    std::uint32_t destSeq = 0;
    std::uint32_t hopCount = 0;
    SimTime lifetime = 0.0;

    static constexpr std::size_t size() noexcept { return 20; }
};

struct Rerr
{
    std::vector<std::pair<NodeId, std::uint32_t>> unreachable;

    std::size_t size() const noexcept { return 12 + 8 * unreachable.size(); }
};

struct Hello
{
    NodeId src = 0;
    std::uint32_t seq = 0;

    static constexpr std::size_t size() noexcept { return 16; }
};

} // namespace aodv

namespace dsr
{

struct Rreq
{
    NodeId src = 0;
    std::uint32_t requestId = 0;
    NodeId dest = 0;
    std::vector<NodeId> record; ///< intermediate nodes, excluding src and dest

    std::size_t size() const noexcept { return 16 + 4 * record.size(); }
};

struct Rrep
{
    NodeId src = 0;
    NodeId dest = 0;
    std::vector<NodeId> route; ///< src ... dest

    std::size_t size() const noexcept { return 16 + 4 * route.size(); }
};

/// Reports the broken link (from -> to) back to the data packet's source,
/// source-routed along `route` (reporter ... source).
struct Rerr
{
    NodeId from = 0;
    NodeId to = 0;
    std::vector<NodeId> route;
    std::size_t cursor = 0;

    std::size_t size() const noexcept { return 16 + 4 * route.size(); }
};

} // namespace dsr

namespace olsr
{

enum class LinkStatus : std::uint8_t
{
    Heard,
    Symmetric,
};

struct HelloEntry
{
    NodeId id = 0;
    LinkStatus status = LinkStatus::Heard;
    bool mpr = false;
};

inline constexpr std::uint8_t kWillDefault = 3;

struct Hello
{
    NodeId originator = 0;
    std::uint8_t willingness = kWillDefault;
    std::vector<HelloEntry> neighbors;

    std::size_t size() const noexcept { return 16 + 8 * neighbors.size(); }
};

struct Tc
{
    NodeId originator = 0;
    std::uint32_t msgSeq = 0; ///< duplicate-suppression key together with originator
    std::uint32_t ansn = 0;
    std::vector<NodeId> advertised;

    std::size_t size() const noexcept { return 12 + 4 * advertised.size(); }
};

} // namespace olsr

using Packet = std::variant<DataPacket, aodv::Rreq, aodv::Rrep, aodv::Rerr, aodv::Hello,
                            dsr::Rreq, dsr::Rrep, dsr::Rerr, olsr::Hello, olsr::Tc>;

std::size_t packet_size(const Packet& p) noexcept;
std::string_view packet_kind(const Packet& p) noexcept;

inline PacketClass packet_class(const Packet& p) noexcept
{
    return std::holds_alternative<DataPacket>(p) ? PacketClass::Data : PacketClass::Control;
}

template <class... Fs>
struct Overloaded : Fs...
{
    using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

} // namespace manet
