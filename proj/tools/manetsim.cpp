// Command-line front end: single scenario runs and node-count sweeps.

#include "manet/scenario.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace
{

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitOutput = 3;

void print_summary(const manet::RunStats& s)
{
    std::printf("%s nodes=%zu seed=%llu control_energy_J=%s total_energy_J=%s pdr=%s "
                "ctrl_frames=%llu dead=%llu\n",
                s.protocol.c_str(), s.nodes, static_cast<unsigned long long>(s.seed),
                manet::format_number(s.controlEnergy).c_str(),
                manet::format_number(s.totalEnergy).c_str(), manet::format_number(s.pdr).c_str(),
                static_cast<unsigned long long>(s.controlFrames),
                static_cast<unsigned long long>(s.deadNodes));
    for (const auto& [kind, count] : s.controlFramesByType)
        std::printf("  %-11s %llu\n", kind.c_str(), static_cast<unsigned long long>(count));
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Discrete-event MANET simulator: AODV, DSR and OLSR energy comparison"};

    std::optional<std::string> protocol;
    std::optional<std::size_t> nodes;
    std::optional<std::uint64_t> seed;
    std::optional<double> duration;
    std::optional<std::string> configFile;
    std::optional<std::string> output;
    std::vector<std::string> settings;
    std::vector<std::size_t> nodeCounts{10, 20, 30, 50};
    std::uint64_t seedCount = 10;
    bool sweep = false;
    bool trace = false;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());

    app.add_option("--protocol", protocol, "aodv, dsr or olsr");
    app.add_option("--nodes", nodes, "number of mobile nodes");
    app.add_option("--seed", seed, "root random seed");
    app.add_option("--duration", duration, "simulated seconds");
    app.add_option("--config", configFile, "flat key = value configuration file");
    app.add_option("--output", output, "output directory");
    app.add_option("--set", settings, "extra key=value overrides (e.g. radio.range=200)");
    app.add_flag("--sweep", sweep, "run the protocol x node-count x seed grid");
    app.add_option("--seeds", seedCount, "number of seeds (1..N) per sweep cell")
        ->check(CLI::PositiveNumber);
    app.add_option("--node-counts", nodeCounts, "node counts for --sweep")->delimiter(',');
    app.add_option("--threads", threads, "parallel runs during a sweep")->check(CLI::PositiveNumber);
    app.add_flag("--trace", trace, "write event and mobility traces");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    manet::ConfigOverrides overrides;
    for (const auto& s : settings)
    {
        const auto eq = s.find('=');
        if (eq == std::string::npos)
        {
            std::cerr << "error: --set expects key=value, got '" << s << "'\n";
            return kExitConfig;
        }
        overrides.emplace_back(s.substr(0, eq), s.substr(eq + 1));
    }
    if (protocol)
        overrides.emplace_back("protocol", *protocol);
    if (nodes)
        overrides.emplace_back("nodes", std::to_string(*nodes));
    if (seed)
        overrides.emplace_back("seed", std::to_string(*seed));
    if (duration)
        overrides.emplace_back("duration", std::to_string(*duration));
    if (output)
        overrides.emplace_back("output", *output);
    if (trace)
        overrides.emplace_back("trace", "true");

    manet::ScenarioConfig config;
    try
    {
        config = manet::parse_config(configFile, overrides);
    }
    catch (const manet::ConfigError& e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }

    try
    {
        if (!sweep)
        {
            print_summary(manet::run_scenario(config));
            return 0;
        }
        std::vector<manet::Protocol> protocols{manet::Protocol::Aodv, manet::Protocol::Dsr,
                                               manet::Protocol::Olsr};
        if (protocol)
            protocols = {config.protocol};
        std::vector<std::uint64_t> seeds;
        for (std::uint64_t s = 1; s <= seedCount; ++s)
            seeds.push_back(s);
        for (std::size_t n : nodeCounts)
            if (n == 0)
            {
                std::cerr << "config error: node counts must be at least 1\n";
                return kExitConfig;
            }
        const auto result = manet::run_sweep(config, protocols, nodeCounts, seeds, threads);
        manet::write_sweep(result, config.outputDir);
        std::cout << manet::sweep_averaged_csv(result);
        return 0;
    }
    catch (const manet::OutputError& e)
    {
        std::cerr << "output error: " << e.what() << '\n';
        return kExitOutput;
    }
    catch (const std::exception& e)
    {
        std::cerr << "runtime error: " << e.what() << '\n';
        return kExitRuntime;
    }
}
