#include "apu/experiments.hpp"

#include "apu/report_io.hpp"
#include "apu/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <tuple>
#include <mutex>
#include <thread>

namespace apu {

namespace fs = std::filesystem;

namespace {

/// Runs every config on a small worker pool; results keep input order.
std::vector<MetricsReport> run_all(const std::vector<ScenarioConfig>& configs, unsigned jobs)
{
    std::vector<MetricsReport> reports(configs.size());
    if (jobs == 0) jobs = std::max(1U, std::thread::hardware_concurrency());
    jobs = std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(1, configs.size())));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < configs.size(); i = next++) {
            try {
                reports[i] = run(configs[i]);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (std::thread& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return reports;
}

}  // namespace

std::vector<MetricsReport> compare(const ScenarioConfig& config, std::span<const Strategy> strategies, unsigned jobs)
{
    if (strategies.empty()) throw std::invalid_argument("compare: no strategies given");
    validate(config);
    std::vector<ScenarioConfig> configs;
    for (Strategy s : strategies) {
        ScenarioConfig c = config;
        c.strategy = s;
        configs.push_back(std::move(c));
    }
    return run_all(configs, jobs);
}

void validate(const SweepSpec& spec)
{
    if (spec.values.empty()) throw ConfigError("sweep.values", "need at least one value");
    if (spec.replications == 0) throw ConfigError("sweep.replications", "need at least one replication");
    if (spec.strategies.empty()) throw ConfigError("sweep.strategies", "need at least one strategy");
    validate(spec.base);
}

std::vector<SweepPoint> sweep(const SweepSpec& spec, unsigned jobs)
{
    validate(spec);
    std::vector<SweepPoint> points;
    std::vector<ScenarioConfig> configs;
    for (double value : spec.values) {
        const ScenarioConfig at_value = with_override(spec.base, spec.parameter, value);
        for (std::uint32_t r = 0; r < spec.replications; ++r) {
            for (Strategy s : spec.strategies) {
                ScenarioConfig c = at_value;
                c.seed = spec.base.seed + r;
                c.strategy = s;
                configs.push_back(std::move(c));
                points.push_back(SweepPoint{value, r, s, {}});
            }
        }
    }
    std::vector<MetricsReport> reports = run_all(configs, jobs);
    for (std::size_t i = 0; i < points.size(); ++i) points[i].report = std::move(reports[i]);
    return points;
}

std::vector<SweepSummary> summarize(std::span<const SweepPoint> points)
{
    // Keyed by first appearance to keep the value/strategy/metric order of the sweep.
    std::vector<SweepSummary> out;
    std::map<std::tuple<double, int, std::string>, std::pair<std::size_t, std::vector<double>>> groups;
    for (const SweepPoint& p : points) {
        for (const auto& [metric, value] : metric_values(p.report)) {
            auto key = std::make_tuple(p.value, static_cast<int>(p.strategy), metric);
            auto [it, inserted] = groups.try_emplace(key, out.size(), std::vector<double>{});
            if (inserted) out.push_back(SweepSummary{p.value, p.strategy, metric});
            if (value) it->second.second.push_back(*value);
        }
    }
    for (const auto& [key, entry] : groups) {
        const auto& [index, samples] = entry;
        SweepSummary& s = out[index];
        s.count = samples.size();
        if (samples.empty()) {
            s.mean = std::nan("");
            continue;
        }
        double sum = 0.0;
        for (double v : samples) sum += v;
        s.mean = sum / static_cast<double>(samples.size());
        double sq = 0.0;
        for (double v : samples) sq += (v - s.mean) * (v - s.mean);
        s.stddev = samples.size() > 1 ? std::sqrt(sq / static_cast<double>(samples.size() - 1)) : 0.0;
    }
    return out;
}

void write_sweep(const SweepSpec& spec, std::span<const SweepPoint> points, const fs::path& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create directory '" + dir.string() + "': " + ec.message());

    auto open = [](const fs::path& path) {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
        return out;
    };
    const std::string provenance = "# config: " + dump_scenario(spec.base) + "\n# seed: " +
                                   std::to_string(spec.base.seed) + "\n# parameter: " + spec.parameter + "\n";

    std::ofstream longform = open(dir / "sweep.csv");
    longform << provenance << "parameter,value,replication,seed,strategy,metric,metric_value\n";
    for (const SweepPoint& p : points) {
        for (const auto& [metric, value] : metric_values(p.report)) {
            longform << spec.parameter << ',' << format_number(p.value) << ',' << p.replication << ','
                     << p.report.seed << ',' << to_string(p.strategy) << ',' << metric << ','
                     << format_number(value) << '\n';
        }
    }
    longform.close();
    if (!longform) throw std::runtime_error("failed writing '" + (dir / "sweep.csv").string() + "'");

    std::ofstream summary = open(dir / "sweep_summary.csv");
    summary << provenance << "parameter,value,strategy,metric,mean,std,n\n";
    for (const SweepSummary& s : summarize(points)) {
        summary << spec.parameter << ',' << format_number(s.value) << ',' << to_string(s.strategy) << ',' << s.metric
                << ',' << (s.count ? format_number(s.mean) : "NA") << ',' << format_number(s.stddev) << ','
                << s.count << '\n';
    }
    summary.close();
    if (!summary) throw std::runtime_error("failed writing '" + (dir / "sweep_summary.csv").string() + "'");
}

}  // namespace apu
