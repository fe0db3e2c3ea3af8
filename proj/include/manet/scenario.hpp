#pragma once

#include "manet/metrics.hpp"
#include "manet/mobility.hpp"
#include "manet/protocol.hpp"
#include "manet/radio.hpp"
#include "manet/simulation.hpp"
#include "manet/workload.hpp"

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace manet
{

/// Experiment input. Defaults reproduce the reference setup: 50 nodes,
/// 500 m x 500 m, 130 s, 10 s pause, 20 m/s maximum speed, 512-byte CBR.
struct ScenarioConfig
{
    Protocol protocol = Protocol::Aodv;
    std::size_t nodes = 50;
    Area area;
    SimTime duration = 130.0;
    SimTime pause = 10.0;
    double speedMax = 20.0;
    double speedMin = 1.0;
    RadioConfig radio;
    EnergyParams energy;
    WorkloadSpec workload;
    std::uint64_t seed = 1;
    std::string outputDir = "out";
    bool trace = false;
};

class ConfigError : public std::runtime_error
{
public:
    ConfigError(std::string key, const std::string& message)
        : std::runtime_error(message), key_(std::move(key))
    {
    }
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

using ConfigOverrides = std::vector<std::pair<std::string, std::string>>;

/// Applies one `key = value` setting. Throws ConfigError naming the key.
void apply_setting(ScenarioConfig& config, const std::string& key, const std::string& value);

/// Parses the flat `key = value` format (`#` comments, dotted keys).
void apply_config_text(ScenarioConfig& config, const std::string& text);

/// Throws ConfigError when a value is out of range.
void validate(const ScenarioConfig& config);

/// Defaults, then the optional file, then overrides; validated.
ScenarioConfig parse_config(const std::optional<std::string>& file,
                            const ConfigOverrides& overrides);

/// Builds a ready-to-run simulation with Random Waypoint mobility and the
/// default CBR workload.
std::unique_ptr<Simulation> build_simulation(const ScenarioConfig& config, bool logEvents = false,
                                             bool logFrames = false);

/// Runs one scenario and writes summary.csv / nodes.csv (and traces when
/// enabled) into config.outputDir. Throws OutputError on I/O failure.
RunStats run_scenario(const ScenarioConfig& config);

/// Runs the scenario without touching the filesystem.
RunStats simulate(const ScenarioConfig& config);

struct AveragedRow
{
    Protocol protocol;
    std::size_t nodes;
    double meanControlEnergy;
    double stddev;
    std::size_t runs;
};

struct SweepResult
{
    std::vector<RunStats> runs; ///< ordered by (protocol, nodes, seed)
    std::vector<AveragedRow> averaged;
};

class SweepError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Every (protocol, nodes, seed) combination; runs may execute on up to
/// `threads` workers, results are merged in deterministic order.
SweepResult run_sweep(const ScenarioConfig& base, const std::vector<Protocol>& protocols,
                      const std::vector<std::size_t>& nodeCounts,
                      const std::vector<std::uint64_t>& seeds, unsigned threads = 1);

std::string_view averaged_csv_header() noexcept;
std::string sweep_summary_csv(const SweepResult& result);
std::string sweep_nodes_csv(const SweepResult& result);
std::string sweep_averaged_csv(const SweepResult& result);

/// Writes sweep_summary.csv, sweep_nodes.csv and sweep_averaged.csv.
void write_sweep(const SweepResult& result, const std::string& dir);

} // namespace manet
