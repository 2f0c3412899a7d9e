#include "apu/metrics.hpp"

namespace apu {

namespace {

template <typename Field>
std::uint64_t sum_flows(const std::vector<FlowStats>& flows, Field field)
{
    std::uint64_t total = 0;
    for (const FlowStats& f : flows) total += f.*field;
    return total;
}

}  // namespace

std::optional<double> FlowStats::pdr() const
{
    if (generated == 0) return std::nullopt;
    return static_cast<double>(delivered) / static_cast<double>(generated);
}

std::optional<double> FlowStats::mean_delay() const
{
    if (delivered == 0) return std::nullopt;
    return delay_sum / static_cast<double>(delivered);
}

std::optional<double> FlowStats::mean_hops() const
{
    if (delivered == 0) return std::nullopt;
    return static_cast<double>(hop_sum) / static_cast<double>(delivered);
}

std::uint64_t MetricsReport::generated() const { return sum_flows(flows, &FlowStats::generated); }
std::uint64_t MetricsReport::delivered() const { return sum_flows(flows, &FlowStats::delivered); }
std::uint64_t MetricsReport::dropped_void() const { return sum_flows(flows, &FlowStats::dropped_void); }
std::uint64_t MetricsReport::dropped_retries() const { return sum_flows(flows, &FlowStats::dropped_retries); }
std::uint64_t MetricsReport::in_flight() const { return sum_flows(flows, &FlowStats::in_flight); }

std::optional<double> MetricsReport::pdr() const
{
    const std::uint64_t gen = generated();
    if (gen == 0) return std::nullopt;
    return static_cast<double>(delivered()) / static_cast<double>(gen);
}

std::optional<double> MetricsReport::mean_delay() const
{
    const std::uint64_t n = delivered();
    if (n == 0) return std::nullopt;
    double sum = 0.0;
    for (const FlowStats& f : flows) sum += f.delay_sum;
    return sum / static_cast<double>(n);
}

std::optional<double> MetricsReport::mean_hops() const
{
    const std::uint64_t n = delivered();
    if (n == 0) return std::nullopt;
    return static_cast<double>(sum_flows(flows, &FlowStats::hop_sum)) / static_cast<double>(n);
}

double MetricsReport::mean_unknown_ratio() const
{
    if (accuracy.empty()) return 0.0;
    double sum = 0.0;
    for (const AccuracySample& s : accuracy) sum += s.unknown_ratio;
    return sum / static_cast<double>(accuracy.size());
}

double MetricsReport::mean_false_ratio() const
{
    if (accuracy.empty()) return 0.0;
    double sum = 0.0;
    for (const AccuracySample& s : accuracy) sum += s.false_ratio;
    return sum / static_cast<double>(accuracy.size());
}

}  // namespace apu
