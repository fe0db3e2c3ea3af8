#include "manet/packets.hpp"

namespace manet
{

std::size_t packet_size(const Packet& p) noexcept
{
    return std::visit([](const auto& x) -> std::size_t { return x.size(); }, p);
}

std::string_view packet_kind(const Packet& p) noexcept
{
    return std::visit(
        Overloaded{
            [](const DataPacket&) -> std::string_view { return "DATA"; },
            [](const aodv::Rreq&) -> std::string_view { return "AODV_RREQ"; },
            [](const aodv::Rrep&) -> std::string_view { return "AODV_RREP"; },
            [](const aodv::Rerr&) -> std::string_view { return "AODV_RERR"; },
            [](const aodv::Hello&) -> std::string_view { return "AODV_HELLO"; },
            [](const dsr::Rreq&) -> std::string_view { return "DSR_RREQ"; },
            [](const dsr::Rrep&) -> std::string_view { return "DSR_RREP"; },
            [](const dsr::Rerr&) -> std::string_view { return "DSR_RERR"; },
            [](const olsr::Hello&) -> std::string_view { return "OLSR_HELLO"; },
            [](const olsr::Tc&) -> std::string_view { return "OLSR_TC"; },
        },
        p);
}

} // namespace manet
