// apusim: run, compare and sweep beaconing strategies, and evaluate the overhead model.

#include "apu/analysis.hpp"
#include "apu/config.hpp"
#include "apu/experiments.hpp"
#include "apu/report_io.hpp"
#include "apu/simulator.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::vector<apu::Strategy> parse_strategies(const std::vector<std::string>& names)
{
    std::vector<apu::Strategy> out;
    for (const std::string& name : names) out.push_back(apu::strategy_from_string(name));
    return out;
}

apu::ScenarioConfig load(const std::string& path, const std::optional<std::uint64_t>& seed)
{
    apu::ScenarioConfig config = apu::load_scenario(path);
    if (seed) config.seed = *seed;
    return config;
}

void write_mobility_trace(const apu::Simulator& sim, const std::filesystem::path& file)
{
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot open '" + file.string() + "' for writing");
    out << "time_s,node,x,y,vx,vy\n";
    for (const apu::MobilityRecord& r : sim.mobility_trace()) {
        out << apu::format_number(r.time) << ',' << r.node << ',' << apu::format_number(r.position.x) << ','
            << apu::format_number(r.position.y) << ',' << apu::format_number(r.velocity.x) << ','
            << apu::format_number(r.velocity.y) << '\n';
    }
}

std::optional<double> cell(const std::map<std::string, std::string>& row, const std::string& key)
{
    auto it = row.find(key);
    if (it == row.end() || it->second == "NA") return std::nullopt;
    return std::stod(it->second);
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Beacon-update strategies for geographic routing: simulation and overhead model"};
    app.require_subcommand(1);

    std::string scenario;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> strategy_names{"PB", "DB", "SB", "APU"};
    unsigned jobs = 0;

    auto* run_cmd = app.add_subcommand("run", "Run one scenario and write its CSV report");
    run_cmd->add_option("--scenario", scenario, "Scenario file (JSON)")->required()->check(CLI::ExistingFile);
    run_cmd->add_option("--out", out_dir, "Output directory")->required();
    run_cmd->add_option("--seed", seed, "Override the scenario seed");
    bool trace = false;
    run_cmd->add_flag("--trace", trace, "Also write mobility.csv (waypoint changes)");

    auto* compare_cmd = app.add_subcommand("compare", "Run every strategy on the same scenario");
    compare_cmd->add_option("--scenario", scenario, "Scenario file (JSON)")->required()->check(CLI::ExistingFile);
    compare_cmd->add_option("--out", out_dir, "Output directory")->required();
    compare_cmd->add_option("--seed", seed, "Override the scenario seed");
    compare_cmd->add_option("--strategies", strategy_names, "Strategies to compare")->delimiter(',');
    compare_cmd->add_option("--jobs", jobs, "Worker threads (0 = all cores)");

    auto* sweep_cmd = app.add_subcommand("sweep", "Sweep one scenario parameter over a value list");
    std::string parameter;
    std::vector<double> values;
    std::uint32_t replications = 1;
    sweep_cmd->add_option("--scenario", scenario, "Base scenario file (JSON)")->required()->check(CLI::ExistingFile);
    sweep_cmd->add_option("--out", out_dir, "Output directory")->required();
    sweep_cmd->add_option("--seed", seed, "Override the base seed");
    sweep_cmd->add_option("--param", parameter, "Dotted scenario key, e.g. mobility.max_speed")->required();
    sweep_cmd->add_option("--values", values, "Comma-separated values")->required()->delimiter(',');
    sweep_cmd->add_option("--replications", replications, "Seeds per value");
    sweep_cmd->add_option("--strategies", strategy_names, "Strategies to run")->delimiter(',');
    sweep_cmd->add_option("--jobs", jobs, "Worker threads (0 = all cores)");

    auto* predict_cmd = app.add_subcommand("predict", "Evaluate the analytical overhead model");
    std::string run_dir;
    std::optional<double> gamma;
    predict_cmd->add_option("--scenario", scenario, "Scenario file (JSON)")->required()->check(CLI::ExistingFile);
    predict_cmd->add_option("--run-dir", run_dir, "Directory of a finished run to compare against")
        ->check(CLI::ExistingDirectory);
    predict_cmd->add_option("--gamma", gamma, "ODL beacons per forwarding operation (else measured from --run-dir)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            apu::Simulator sim(load(scenario, seed));
            sim.record_mobility(trace);
            const apu::MetricsReport report = sim.finish();
            apu::emit_report(report, out_dir);
            if (trace) write_mobility_trace(sim, std::filesystem::path(out_dir) / "mobility.csv");
            std::cout << "beacons " << report.beacons.total() << ", pdr " << apu::format_number(report.pdr())
                      << ", report in " << out_dir << '\n';
        } else if (*compare_cmd) {
            const std::vector<apu::Strategy> strategies = parse_strategies(strategy_names);
            const auto reports = apu::compare(load(scenario, seed), strategies, jobs);
            for (const apu::MetricsReport& report : reports) {
                apu::emit_report(report, std::filesystem::path(out_dir) / std::string(apu::to_string(report.strategy)));
            }
            apu::write_comparison(reports, std::filesystem::path(out_dir) / "compare.csv");
            std::cout << "compared " << reports.size() << " strategies, table in " << out_dir << "/compare.csv\n";
        } else if (*sweep_cmd) {
            apu::SweepSpec spec{load(scenario, seed), parameter, values, replications, parse_strategies(strategy_names)};
            const auto points = apu::sweep(spec, jobs);
            apu::write_sweep(spec, points, out_dir);
            std::cout << points.size() << " runs, results in " << out_dir << "/sweep.csv\n";
        } else if (*predict_cmd) {
            const apu::ScenarioConfig config = apu::load_scenario(scenario);
            const apu::AnalyticalScenario model{config.area_a,      config.area_b,     double(config.node_count),
                                                config.radio_range, config.packet_rate, double(config.flow_count),
                                                config.duration};
            const apu::OverheadPrediction p = apu::predict_overhead(model);

            std::optional<std::map<std::string, std::string>> simulated;
            if (!run_dir.empty()) {
                const auto rows = apu::read_csv(std::filesystem::path(run_dir) / "metrics.csv");
                if (rows.empty()) throw std::runtime_error("no rows in " + run_dir + "/metrics.csv");
                simulated = rows.front();
            }
            auto sim = [&](const std::string& key) -> std::optional<double> {
                return simulated ? cell(*simulated, key) : std::nullopt;
            };
            std::optional<double> measured_gamma;
            if (auto ops = sim("forwarding_ops"); ops && *ops > 0) measured_gamma = *sim("beacons_odl") / *ops;
            const std::optional<double> used_gamma = gamma ? gamma : measured_gamma;
            const std::optional<double> o_mp = sim("beacons_mp");
            std::optional<double> o_odl;
            if (used_gamma) o_odl = apu::odl_overhead(p.forwarding_ops, *used_gamma);
            std::optional<double> o_apu;
            if (o_odl && o_mp) o_apu = apu::total_overhead(*o_mp, *o_odl);
            std::optional<double> sim_apu;
            if (o_mp && sim("beacons_odl")) sim_apu = *o_mp + *sim("beacons_odl");

            std::cout << "quantity,analytical,simulated\n";
            auto line = [](const char* name, std::optional<double> a, std::optional<double> s) {
                std::cout << name << ',' << apu::format_number(a) << ',' << apu::format_number(s) << '\n';
            };
            line("D", p.mean_distance, std::nullopt);
            line("H", p.hops, sim("mean_hops"));
            line("chi", p.forwarding_ops, sim("forwarding_ops"));
            line("gamma", used_gamma, measured_gamma);
            line("O_ODL", o_odl, sim("beacons_odl"));
            line("O_MP", o_mp, o_mp);
            line("O_APU", o_apu, sim_apu);
        }
    } catch (const apu::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
