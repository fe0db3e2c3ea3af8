#include "manet/metrics.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>

namespace manet
{

std::string_view to_string(DropReason reason) noexcept
{
    switch (reason)
    {
    case DropReason::NoRoute:
        return "no-route";
    case DropReason::BufferOverflow:
        return "buffer-overflow";
    case DropReason::BufferTimeout:
        return "buffer-timeout";
    case DropReason::LinkBreak:
        return "link-break";
    case DropReason::TtlExpired:
        return "ttl-expired";
    case DropReason::Malformed:
        return "malformed";
    }
    return "unknown";
}

void Metrics::record_sent(std::uint32_t flow, std::uint64_t seq, SimTime at)
{
    ++sent_;
    packets_[flow][seq] = PacketRecord{at, false};
}

void Metrics::record_delivery(std::uint32_t flow, std::uint64_t seq, SimTime sentAt,
                              SimTime receivedAt)
{
    auto& rec = packets_[flow][seq];
    if (rec.delivered)
    {
        ++duplicates_;
        return;
    }
    rec.sentAt = sentAt;
    rec.delivered = true;
    ++received_;
    delaySum_ += receivedAt - sentAt;
}

void Metrics::record_drop(DropReason reason, std::uint64_t count)
{
    if (count)
        drops_[reason] += count;
}

std::uint64_t Metrics::drops(DropReason reason) const
{
    auto it = drops_.find(reason);
    return it == drops_.end() ? 0 : it->second;
}

std::uint64_t Metrics::control_frames() const
{
    std::uint64_t total = 0;
    for (const auto& [kind, n] : controlFrames_)
        total += n;
    return total;
}

RunStats finalize(const Metrics& metrics, EnergyModel& energy, SimTime end, std::string protocol,
                  std::uint64_t seed)
{
    RunStats s;
    s.protocol = std::move(protocol);
    s.nodes = energy.size();
    s.seed = seed;
    s.duration = end;
    s.initialEnergy = energy.params().initial;
    for (NodeId n = 0; n < energy.size(); ++n)
        energy.accrue_idle(n, end);
    s.ledgers = energy.ledgers();
    for (const auto& l : s.ledgers)
    {
        s.controlEnergy += l.control_energy();
        s.totalEnergy += l.consumed();
        if (!l.alive)
            ++s.deadNodes;
    }
    s.dataSent = metrics.data_sent();
    s.dataReceived = metrics.data_received();
    s.noTraffic = s.dataSent == 0;
    s.pdr = s.noTraffic ? 1.0
                        : static_cast<double>(s.dataReceived) / static_cast<double>(s.dataSent);
    s.meanDelay = s.dataReceived ? metrics.delay_sum() / static_cast<double>(s.dataReceived) : 0.0;
    s.controlFrames = metrics.control_frames();
    s.controlFramesByType = metrics.control_frames_by_type();
    s.duplicates = metrics.duplicates();
    return s;
}

std::string format_number(double value)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", value);
    return buf;
}

std::string_view summary_csv_header() noexcept
{
    return "protocol,nodes,seed,duration_s,control_energy_J,total_energy_J,data_sent,data_recv,"
           "pdr,mean_delay_s,ctrl_frames,dead_nodes";
}

std::string_view node_csv_header() noexcept
{
    return "protocol,nodes,seed,node_id,residual_J,control_tx_J,control_rx_J,data_tx_J,data_rx_J,"
           "idle_J,alive_at_end";
}

std::string summary_csv_row(const RunStats& s)
{
    std::string row;
    row += s.protocol + ',' + std::to_string(s.nodes) + ',' + std::to_string(s.seed) + ',' +
           format_number(s.duration) + ',' + format_number(s.controlEnergy) + ',' +
           format_number(s.totalEnergy) + ',' + std::to_string(s.dataSent) + ',' +
           std::to_string(s.dataReceived) + ',' + format_number(s.pdr) + ',' +
           format_number(s.meanDelay) + ',' + std::to_string(s.controlFrames) + ',' +
           std::to_string(s.deadNodes) + '\n';
    return row;
}

std::string node_csv_rows(const RunStats& s)
{
    std::string out;
    for (std::size_t i = 0; i < s.ledgers.size(); ++i)
    {
        const auto& l = s.ledgers[i];
        out += s.protocol + ',' + std::to_string(s.nodes) + ',' + std::to_string(s.seed) + ',' +
               std::to_string(i) + ',' + format_number(l.residual) + ',' +
               format_number(l.controlTx) + ',' + format_number(l.controlRx) + ',' +
               format_number(l.dataTx) + ',' + format_number(l.dataRx) + ',' +
               format_number(l.idle) + ',' + (l.alive ? "1" : "0") + '\n';
    }
    return out;
}

namespace
{

void write_file(const std::filesystem::path& path, std::string_view content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw OutputError("cannot open " + path.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out)
        throw OutputError("failed writing " + path.string());
}

} // namespace

void write_csv(const RunStats& stats, const std::string& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    const std::filesystem::path base(dir);
    write_file(base / "summary.csv",
               std::string(summary_csv_header()) + '\n' + summary_csv_row(stats));
    write_file(base / "nodes.csv", std::string(node_csv_header()) + '\n' + node_csv_rows(stats));
}

} // namespace manet
