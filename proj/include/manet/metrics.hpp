#pragma once

#include "manet/energy.hpp"
#include "manet/engine.hpp"

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace manet
{

enum class DropReason : std::uint8_t
{
    NoRoute,
    BufferOverflow,
    BufferTimeout,
    LinkBreak,
    TtlExpired,
    Malformed,
};

std::string_view to_string(DropReason reason) noexcept;

/// Collects data-plane and control-plane counters for one run.
class Metrics
{
public:
    void record_sent(std::uint32_t flow, std::uint64_t seq, SimTime at);

    /// Counts each (flow, seq) once; later copies only bump `duplicates`.
    void record_delivery(std::uint32_t flow, std::uint64_t seq, SimTime sentAt, SimTime receivedAt);

    void record_control_tx(std::string_view kind) { ++controlFrames_[std::string(kind)]; }
    void record_drop(DropReason reason, std::uint64_t count = 1);

    std::uint64_t data_sent() const noexcept { return sent_; }
    std::uint64_t data_received() const noexcept { return received_; }
    std::uint64_t duplicates() const noexcept { return duplicates_; }
    std::uint64_t drops(DropReason reason) const;
    std::uint64_t control_frames() const;
    const std::map<std::string, std::uint64_t>& control_frames_by_type() const noexcept
    {
        return controlFrames_;
    }
    double delay_sum() const noexcept { return delaySum_; }

    /// Per-flow send time of each sequence number, and whether it arrived.
    struct PacketRecord
    {
        SimTime sentAt;
        bool delivered;
    };
    const std::map<std::uint32_t, std::map<std::uint64_t, PacketRecord>>& packets() const noexcept
    {
        return packets_;
    }

private:
    std::uint64_t sent_ = 0;
    std::uint64_t received_ = 0;
    std::uint64_t duplicates_ = 0;
    double delaySum_ = 0.0;
    std::map<std::string, std::uint64_t> controlFrames_;
    std::map<DropReason, std::uint64_t> drops_;
    std::map<std::uint32_t, std::map<std::uint64_t, PacketRecord>> packets_;
};

struct RunStats
{
    std::string protocol;
    std::size_t nodes = 0;
    std::uint64_t seed = 0;
    SimTime duration = 0.0;
    std::vector<EnergyLedger> ledgers;
    double initialEnergy = 0.0;
    double controlEnergy = 0.0;
    double totalEnergy = 0.0;
    std::uint64_t dataSent = 0;
    std::uint64_t dataReceived = 0;
    double pdr = 1.0;
    bool noTraffic = false;
    double meanDelay = 0.0;
    std::uint64_t controlFrames = 0;
    std::map<std::string, std::uint64_t> controlFramesByType;
    std::uint64_t deadNodes = 0;
    std::uint64_t duplicates = 0;
};

/// Flushes idle accrual to `end` on every node and assembles the summary.
RunStats finalize(const Metrics& metrics, EnergyModel& energy, SimTime end, std::string protocol,
                  std::uint64_t seed);

std::string_view summary_csv_header() noexcept;
std::string_view node_csv_header() noexcept;
std::string summary_csv_row(const RunStats& stats);
std::string node_csv_rows(const RunStats& stats);

/// Numbers rendered with 9 significant digits.
std::string format_number(double value);

class OutputError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Writes <dir>/summary.csv and <dir>/nodes.csv. Throws OutputError.
void write_csv(const RunStats& stats, const std::string& dir);

} // namespace manet
