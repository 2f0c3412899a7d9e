#pragma once

#include "apu/metrics.hpp"

#include <cstddef>
#include <cstdint>
#include <stdexcept>

namespace apu {

/// Raised when an analytical formula is evaluated outside the region where it is meaningful.
class ModelDomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct AnalyticalScenario {
    double area_a = 0.0;
    double area_b = 0.0;
    double node_count = 0.0;
    double radio_range = 0.0;
    double packet_rate = 0.0;
    double flow_count = 0.0;
    double duration = 0.0;

    double density() const { return node_count / (area_a * area_b); }
};

/// Mean Euclidean distance between two independent uniform points in an a x b
/// rectangle (closed form, symmetric in a and b).
double avg_distance(double a, double b);

/// Expected fraction of the radio range covered by one greedy hop at node
/// density `density`: 1 - integral_0^1 exp(-density R^2 (acos t - t sqrt(1 - t^2))) dt.
/// Throws ModelDomainError when the result underflows to 0 or the quadrature fails.
double hop_progress_fraction(double radio_range, double density);

/// Mean hop count over distance d: d / (R * hop_progress_fraction(R, density)).
double avg_hops(double distance, double radio_range, double density);

/// Total forwarding operations: packets generated (rate * flows * duration) times hops per packet.
double forwarding_ops(double packet_rate, double flow_count, double duration, double hops);

double odl_overhead(double forwarding_ops, double gamma);
double total_overhead(double mp_overhead, double odl_overhead);

/// ODL beacons per forwarding operation, measured on a finished run.
double estimate_gamma(const MetricsReport& report);

struct MonteCarloEstimate {
    double mean = 0.0;
    double standard_error = 0.0;
    std::size_t samples = 0;
};

/// Independent estimate of avg_distance by sampling point pairs.
MonteCarloEstimate monte_carlo_distance(double a, double b, std::size_t samples, std::uint64_t seed);

struct OverheadPrediction {
    double mean_distance = 0.0;
    double hops = 0.0;
    double forwarding_ops = 0.0;
};

OverheadPrediction predict_overhead(const AnalyticalScenario& scenario);

}  // namespace apu
