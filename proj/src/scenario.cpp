#include "manet/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

namespace manet
{

namespace
{

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v)
{
    double out = 0.0;
    const char* end = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end || !std::isfinite(out))
        throw ConfigError(key, "invalid number for '" + key + "': '" + v + "'");
    return out;
}

std::uint64_t to_uint(const std::string& key, const std::string& v)
{
    std::uint64_t out = 0;
    const char* end = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end)
        throw ConfigError(key, "invalid non-negative integer for '" + key + "': '" + v + "'");
    return out;
}

bool to_bool(const std::string& key, const std::string& v)
{
    if (v == "1" || v == "true" || v == "yes" || v == "on")
        return true;
    if (v == "0" || v == "false" || v == "no" || v == "off")
        return false;
    throw ConfigError(key, "invalid boolean for '" + key + "': '" + v + "'");
}

using Setter = std::function<void(ScenarioConfig&, const std::string&, const std::string&)>;

Setter real(double ScenarioConfig::*field)
{
    return [field](ScenarioConfig& c, const std::string& k, const std::string& v) {
        c.*field = to_double(k, v);
    };
}

template <class Sub>
Setter real(Sub ScenarioConfig::*sub, double Sub::*field)
{
    return [sub, field](ScenarioConfig& c, const std::string& k, const std::string& v) {
        (c.*sub).*field = to_double(k, v);
    };
}

const std::map<std::string, Setter>& setters()
{
    static const std::map<std::string, Setter> table = {
        {"protocol",
         [](ScenarioConfig& c, const std::string& k, const std::string& v) {
             auto p = parse_protocol(v);
             if (!p)
                 throw ConfigError(k, "unknown protocol '" + v + "' (expected aodv, dsr or olsr)");
             c.protocol = *p;
         }},
        {"nodes",
         [](ScenarioConfig& c, const std::string& k, const std::string& v) {
             c.nodes = static_cast<std::size_t>(to_uint(k, v));
         }},
        {"seed",
         [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.seed = to_uint(k, v); }},
        {"duration", real(&ScenarioConfig::duration)},
        {"pause", real(&ScenarioConfig::pause)},
        {"speed_max", real(&ScenarioConfig::speedMax)},
        {"speed_min", real(&ScenarioConfig::speedMin)},
        {"area.width", real(&ScenarioConfig::area, &Area::width)},
        {"area.height", real(&ScenarioConfig::area, &Area::height)},
        {"output",
         [](ScenarioConfig& c, const std::string&, const std::string& v) { c.outputDir = v; }},
        {"trace",
         [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.trace = to_bool(k, v); }},
        {"radio.range", real(&ScenarioConfig::radio, &RadioConfig::range)},
        {"radio.bandwidth", real(&ScenarioConfig::radio, &RadioConfig::bandwidth)},
        {"radio.propagation_delay", real(&ScenarioConfig::radio, &RadioConfig::propagationDelay)},
        {"radio.broadcast_jitter_max",
         real(&ScenarioConfig::radio, &RadioConfig::broadcastJitterMax)},
        {"radio.loss_probability", real(&ScenarioConfig::radio, &RadioConfig::lossProbability)},
        {"energy.initial", real(&ScenarioConfig::energy, &EnergyParams::initial)},
        {"energy.idle_power", real(&ScenarioConfig::energy, &EnergyParams::idlePower)},
        {"energy.rx_power", real(&ScenarioConfig::energy, &EnergyParams::rxPower)},
        {"energy.tx_power", real(&ScenarioConfig::energy, &EnergyParams::txPower)},
        {"energy.transition_power", real(&ScenarioConfig::energy, &EnergyParams::transitionPower)},
        {"energy.sleep_power", real(&ScenarioConfig::energy, &EnergyParams::sleepPower)},
        {"energy.transition_time", real(&ScenarioConfig::energy, &EnergyParams::transitionTime)},
        {"energy.bandwidth", real(&ScenarioConfig::energy, &EnergyParams::bandwidth)},
        {"workload.flows",
         [](ScenarioConfig& c, const std::string& k, const std::string& v) {
             c.workload.flows = static_cast<std::size_t>(to_uint(k, v));
         }},
        {"workload.interval", real(&ScenarioConfig::workload, &WorkloadSpec::interval)},
        {"workload.packet_size",
         [](ScenarioConfig& c, const std::string& k, const std::string& v) {
             c.workload.packetSize = static_cast<std::size_t>(to_uint(k, v));
         }},
        {"workload.start_min", real(&ScenarioConfig::workload, &WorkloadSpec::startMin)},
        {"workload.start_max", real(&ScenarioConfig::workload, &WorkloadSpec::startMax)},
        {"workload.stop", real(&ScenarioConfig::workload, &WorkloadSpec::stop)},
    };
    return table;
}

void require(bool ok, const char* key, const std::string& what)
{
    if (!ok)
        throw ConfigError(key, std::string("'") + key + "' " + what);
}

} // namespace

void apply_setting(ScenarioConfig& config, const std::string& key, const std::string& value)
{
    const auto& table = setters();
    auto it = table.find(key);
    if (it == table.end())
        throw ConfigError(key, "unknown configuration key '" + key + "'");
    it->second(config, key, value);
}

void apply_config_text(ScenarioConfig& config, const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    int lineNo = 0;
    while (std::getline(in, line))
    {
        ++lineNo;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("", "line " + std::to_string(lineNo) + ": expected 'key = value'");
        apply_setting(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
}

void validate(const ScenarioConfig& c)
{
    require(c.nodes >= 1, "nodes", "must be at least 1");
    require(c.duration > 0, "duration", "must be positive");
    require(c.pause >= 0, "pause", "must be non-negative");
    require(c.speedMin > 0, "speed_min", "must be positive");
    require(c.speedMax >= c.speedMin, "speed_max", "must be >= speed_min");
    require(c.area.width > 0, "area.width", "must be positive");
    require(c.area.height > 0, "area.height", "must be positive");
    require(c.radio.range > 0, "radio.range", "must be positive");
    require(c.radio.bandwidth > 0, "radio.bandwidth", "must be positive");
    require(c.radio.propagationDelay >= 0, "radio.propagation_delay", "must be non-negative");
    require(c.radio.broadcastJitterMax >= 0, "radio.broadcast_jitter_max", "must be non-negative");
    require(c.radio.lossProbability >= 0 && c.radio.lossProbability <= 1,
            "radio.loss_probability", "must lie in [0, 1]");
    require(c.energy.initial > 0, "energy.initial", "must be positive");
    require(c.energy.idlePower > 0, "energy.idle_power", "must be positive");
    require(c.energy.rxPower > 0, "energy.rx_power", "must be positive");
    require(c.energy.txPower > 0, "energy.tx_power", "must be positive");
    require(c.energy.transitionPower > 0, "energy.transition_power", "must be positive");
    require(c.energy.sleepPower > 0, "energy.sleep_power", "must be positive");
    require(c.energy.transitionTime > 0, "energy.transition_time", "must be positive");
    require(c.energy.bandwidth > 0, "energy.bandwidth", "must be positive");
    require(c.energy.bandwidth == c.radio.bandwidth, "energy.bandwidth",
            "must equal radio.bandwidth");
    require(c.workload.interval > 0, "workload.interval", "must be positive");
    require(c.workload.packetSize >= 1, "workload.packet_size", "must be at least 1");
    require(c.workload.startMin >= 0, "workload.start_min", "must be non-negative");
    require(c.workload.startMax >= c.workload.startMin, "workload.start_max",
            "must be >= workload.start_min");
    require(c.workload.stop > 0, "workload.stop", "must be positive");
}

ScenarioConfig parse_config(const std::optional<std::string>& file, const ConfigOverrides& overrides)
{
    ScenarioConfig config;
    if (file)
    {
        std::ifstream in(*file);
        if (!in)
            throw ConfigError("config", "cannot read config file '" + *file + "'");
        std::stringstream buffer;
        buffer << in.rdbuf();
        apply_config_text(config, buffer.str());
    }
    for (const auto& [key, value] : overrides)
        apply_setting(config, key, value);
    validate(config);
    return config;
}

std::unique_ptr<Simulation> build_simulation(const ScenarioConfig& config, bool logEvents,
                                             bool logFrames)
{
    RandomWaypointParams rwp;
    rwp.area = config.area;
    rwp.pause = config.pause;
    rwp.speedMin = config.speedMin;
    rwp.speedMax = config.speedMax;

    SimulationSetup setup;
    setup.protocol = config.protocol;
    setup.seed = config.seed;
    setup.duration = config.duration;
    setup.energy = config.energy;
    setup.radio = config.radio;
    setup.logEvents = logEvents || config.trace;
    setup.logFrames = logFrames;
    setup.traceMobility = config.trace;

    auto sim = std::make_unique<Simulation>(
        setup, std::make_unique<RandomWaypoint>(config.nodes, rwp, config.duration, config.seed));

    WorkloadSpec spec = config.workload;
    spec.stop = std::min(spec.stop, config.duration);
    RngStream rng(config.seed, RngPurpose::Workload, kSystemTarget);
    for (const auto& flow : generate_flows(spec, config.nodes, rng))
        sim->add_flow(flow);
    return sim;
}

RunStats simulate(const ScenarioConfig& config)
{
    auto sim = build_simulation(config);
    return sim->run();
}

namespace
{

void write_text(const std::filesystem::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw OutputError("cannot open " + path.string() + " for writing");
    out << content;
    if (!out)
        throw OutputError("failed writing " + path.string());
}

} // namespace

RunStats run_scenario(const ScenarioConfig& config)
{
    auto sim = build_simulation(config);
    RunStats stats = sim->run();
    write_csv(stats, config.outputDir);
    if (config.trace)
    {
        const std::filesystem::path dir(config.outputDir);
        write_text(dir / "events.trace", sim->event_trace());
        write_text(dir / "mobility.trace", sim->mobility_trace());
    }
    return stats;
}

SweepResult run_sweep(const ScenarioConfig& base, const std::vector<Protocol>& protocols,
                      const std::vector<std::size_t>& nodeCounts,
                      const std::vector<std::uint64_t>& seeds, unsigned threads)
{
    if (nodeCounts.empty() || seeds.empty() || protocols.empty())
        throw SweepError("sweep needs at least one protocol, node count and seed");

    std::vector<std::tuple<Protocol, std::size_t, std::uint64_t>> jobs;
    for (Protocol p : protocols)
        for (std::size_t n : nodeCounts)
            for (std::uint64_t s : seeds)
                jobs.emplace_back(p, n, s);
    std::sort(jobs.begin(), jobs.end());

    std::vector<RunStats> results(jobs.size());
    std::atomic<std::size_t> next{0};
    std::mutex errorMutex;
    std::string firstError;

    auto worker = [&] {
        for (;;)
        {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size())
                return;
            {
                std::lock_guard lock(errorMutex);
                if (!firstError.empty())
                    return;
            }
            const auto& [p, n, s] = jobs[i];
            ScenarioConfig cfg = base;
            cfg.protocol = p;
            cfg.nodes = n;
            cfg.seed = s;
            try
            {
                results[i] = simulate(cfg);
            }
            catch (const std::exception& e)
            {
                std::lock_guard lock(errorMutex);
                if (firstError.empty())
                    firstError = "run (" + std::string(to_string(p)) + ", " + std::to_string(n) +
                                 ", " + std::to_string(s) + ") failed: " + e.what();
            }
        }
    };

    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(jobs.size())));
    if (threads == 1)
        worker();
    else
    {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
    }
    if (!firstError.empty())
        throw SweepError(firstError);

    SweepResult out;
    out.runs = std::move(results);
    std::map<std::pair<Protocol, std::size_t>, std::vector<double>> groups;
    for (std::size_t i = 0; i < jobs.size(); ++i)
        groups[{std::get<0>(jobs[i]), std::get<1>(jobs[i])}].push_back(out.runs[i].controlEnergy);
    for (const auto& [key, values] : groups)
    {
        double mean = 0.0;
        for (double v : values)
            mean += v;
        mean /= static_cast<double>(values.size());
        double var = 0.0;
        for (double v : values)
            var += (v - mean) * (v - mean);
        const double sd =
            values.size() > 1 ? std::sqrt(var / static_cast<double>(values.size() - 1)) : 0.0;
        out.averaged.push_back(AveragedRow{key.first, key.second, mean, sd, values.size()});
    }
    return out;
}

std::string_view averaged_csv_header() noexcept
{
    return "protocol,nodes,mean_control_energy_J,stddev";
}

std::string sweep_summary_csv(const SweepResult& result)
{
    std::string out(summary_csv_header());
    out += '\n';
    for (const auto& r : result.runs)
        out += summary_csv_row(r);
    return out;
}

std::string sweep_nodes_csv(const SweepResult& result)
{
    std::string out(node_csv_header());
    out += '\n';
    for (const auto& r : result.runs)
        out += node_csv_rows(r);
    return out;
}

std::string sweep_averaged_csv(const SweepResult& result)
{
    std::string out(averaged_csv_header());
    out += '\n';
    for (const auto& row : result.averaged)
        out += std::string(to_string(row.protocol)) + ',' + std::to_string(row.nodes) + ',' +
               format_number(row.meanControlEnergy) + ',' + format_number(row.stddev) + '\n';
    return out;
}

void write_sweep(const SweepResult& result, const std::string& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    const std::filesystem::path base(dir);
    write_text(base / "sweep_summary.csv", sweep_summary_csv(result));
    write_text(base / "sweep_nodes.csv", sweep_nodes_csv(result));
    write_text(base / "sweep_averaged.csv", sweep_averaged_csv(result));
}

} // namespace manet
