#include "apu/report_io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace apu {

namespace fs = std::filesystem;

std::string format_number(double value)
{
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.9g", value);
    return buffer;
}

std::string format_number(const std::optional<double>& value)
{
    return value ? format_number(*value) : std::string("NA");
}

namespace {

std::string hex(std::uint64_t value)
{
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%016" PRIx64, value);
    return buffer;
}

std::optional<double> count(std::uint64_t v) { return static_cast<double>(v); }

class CsvFile {
public:
    CsvFile(const fs::path& path, const MetricsReport* provenance) : path_(path), out_(path)
    {
        if (!out_) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
        if (provenance != nullptr) {
            out_ << "# config: " << provenance->config_json << '\n';
            out_ << "# seed: " << provenance->seed << '\n';
        }
    }

    void row(const std::vector<std::string>& cells)
    {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i > 0) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }

    void close()
    {
        out_.close();
        if (!out_) throw std::runtime_error("failed writing '" + path_.string() + "'");
    }

private:
    fs::path path_;
    std::ofstream out_;
};

std::vector<std::string> metrics_header()
{
    std::vector<std::string> header{"strategy", "seed"};
    for (const auto& [name, value] : metric_values(MetricsReport{})) header.push_back(name);
    header.push_back("mobility_hash");
    header.push_back("traffic_hash");
    return header;
}

std::vector<std::string> metrics_row(const MetricsReport& report)
{
    std::vector<std::string> row{std::string(to_string(report.strategy)), std::to_string(report.seed)};
    for (const auto& [name, value] : metric_values(report)) row.push_back(format_number(value));
    row.push_back(hex(report.mobility_hash));
    row.push_back(hex(report.traffic_hash));
    return row;
}

void ensure_directory(const fs::path& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create directory '" + dir.string() + "': " + ec.message());
}

}  // namespace

MetricValues metric_values(const MetricsReport& r)
{
    MetricValues v;
    v.emplace_back("nodes", count(r.node_count));
    v.emplace_back("duration_s", r.duration);
    v.emplace_back("beacons_total", count(r.beacons.total()));
    for (BeaconCause cause : kAllBeaconCauses) {
        v.emplace_back("beacons_" + std::string(to_string(cause)), count(r.beacons[cause]));
    }
    v.emplace_back("generated", count(r.generated()));
    v.emplace_back("delivered", count(r.delivered()));
    v.emplace_back("dropped_void", count(r.dropped_void()));
    v.emplace_back("dropped_retries", count(r.dropped_retries()));
    v.emplace_back("in_flight", count(r.in_flight()));
    v.emplace_back("pdr", r.pdr());
    v.emplace_back("mean_delay_s", r.mean_delay());
    v.emplace_back("mean_hops", r.mean_hops());
    v.emplace_back("forwarding_ops", count(r.forwarding_ops));
    v.emplace_back("unicast_attempts", count(r.unicast_attempts));
    v.emplace_back("failed_transmissions", count(r.failed_transmissions));
    v.emplace_back("mean_unknown_ratio", r.mean_unknown_ratio());
    v.emplace_back("mean_false_ratio", r.mean_false_ratio());
    v.emplace_back("energy_total_uws", r.energy.total());
    for (EnergyOp op : kAllEnergyOps) {
        v.emplace_back("energy_" + std::string(to_string(op)) + "_uws", r.energy.class_total(op));
    }
    return v;
}

void emit_report(const MetricsReport& report, const fs::path& dir)
{
    ensure_directory(dir);

    CsvFile metrics(dir / "metrics.csv", &report);
    metrics.row(metrics_header());
    metrics.row(metrics_row(report));
    metrics.close();

    CsvFile accuracy(dir / "accuracy.csv", &report);
    accuracy.row({"time_s", "mean_unknown_ratio", "mean_false_ratio", "unknown_count", "false_count",
                  "true_neighbor_count"});
    for (const AccuracySample& s : report.accuracy) {
        accuracy.row({format_number(s.time), format_number(s.unknown_ratio), format_number(s.false_ratio),
                      std::to_string(s.unknown_count), std::to_string(s.false_count),
                      std::to_string(s.true_neighbor_count)});
    }
    accuracy.close();

    CsvFile energy(dir / "energy.csv", &report);
    energy.row({"node", "op_class", "events", "energy_uws"});
    for (NodeId node = 0; node < report.energy.node_count(); ++node) {
        for (EnergyOp op : kAllEnergyOps) {
            energy.row({std::to_string(node), std::string(to_string(op)), std::to_string(report.energy.events(node, op)),
                        format_number(report.energy.energy(node, op))});
        }
    }
    energy.close();

    CsvFile flows(dir / "flows.csv", &report);
    flows.row({"flow", "source", "destination", "generated", "delivered", "dropped_void", "dropped_retries",
               "in_flight", "pdr", "delay_sum_s", "mean_delay_s", "hop_sum", "mean_hops"});
    for (const FlowStats& f : report.flows) {
        flows.row({std::to_string(f.flow), std::to_string(f.source), std::to_string(f.destination),
                   std::to_string(f.generated), std::to_string(f.delivered), std::to_string(f.dropped_void),
                   std::to_string(f.dropped_retries), std::to_string(f.in_flight), format_number(f.pdr()),
                   format_number(f.delay_sum), format_number(f.mean_delay()), std::to_string(f.hop_sum),
                   format_number(f.mean_hops())});
    }
    flows.close();

    CsvFile beacons(dir / "beacons.csv", &report);
    std::vector<std::string> header{"node"};
    for (BeaconCause cause : kAllBeaconCauses) header.emplace_back(to_string(cause));
    header.emplace_back("total");
    beacons.row(header);
    for (NodeId node = 0; node < report.node_beacons.size(); ++node) {
        const BeaconCounts& counts = report.node_beacons[node];
        std::vector<std::string> row{std::to_string(node)};
        for (BeaconCause cause : kAllBeaconCauses) row.push_back(std::to_string(counts[cause]));
        row.push_back(std::to_string(counts.total()));
        beacons.row(row);
    }
    beacons.close();
}

void write_comparison(const std::vector<MetricsReport>& reports, const fs::path& file)
{
    if (file.has_parent_path()) ensure_directory(file.parent_path());
    CsvFile out(file, reports.empty() ? nullptr : &reports.front());
    out.row(metrics_header());
    for (const MetricsReport& report : reports) out.row(metrics_row(report));
    out.close();
}

std::vector<std::map<std::string, std::string>> read_csv(const fs::path& file)
{
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open '" + file.string() + "'");
    auto split = [](const std::string& line) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        return cells;
    };
    std::vector<std::string> header;
    std::vector<std::map<std::string, std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#') continue;
        if (header.empty()) {
            header = split(line);
            continue;
        }
        const std::vector<std::string> cells = split(line);
        if (cells.size() != header.size()) {
            throw std::runtime_error("'" + file.string() + "': row has " + std::to_string(cells.size()) +
                                     " cells, header has " + std::to_string(header.size()));
        }
        std::map<std::string, std::string> row;
        for (std::size_t i = 0; i < header.size(); ++i) row[header[i]] = cells[i];
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace apu
