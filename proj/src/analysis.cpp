#include "apu/analysis.hpp"

#include "apu/random.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <string>

namespace apu {

double avg_distance(double a, double b)
{
    if (!(a > 0.0) || !(b > 0.0)) {
        throw std::invalid_argument("avg_distance: dimensions must be positive (got " + std::to_string(a) + ", " +
                                    std::to_string(b) + ")");
    }
    const double d = std::hypot(a, b);
    const double a2 = a * a;
    const double b2 = b * b;
    const double algebraic = (a * a2 / b2 + b * b2 / a2 + d * (3.0 - a2 / b2 - b2 / a2)) / 15.0;
    const double logarithmic = (b2 / a * std::acosh(d / b) + a2 / b * std::acosh(d / a)) / 6.0;
    return algebraic + logarithmic;
}

double hop_progress_fraction(double radio_range, double density)
{
    if (!(radio_range > 0.0)) throw std::invalid_argument("hop_progress_fraction: radio range must be > 0");
    if (!(density > 0.0)) throw std::invalid_argument("hop_progress_fraction: density must be > 0");
    const double mean_in_range = density * radio_range * radio_range;
    // 1 - exp(-rho * area of the circular segment beyond t*R) = P(some neighbor makes progress > t*R).
    // Integrating this directly avoids the cancellation in 1 - integral(exp(...)) at low density.
    auto progress_beyond = [mean_in_range](double t) {
        return -std::expm1(-mean_in_range * (std::acos(t) - t * std::sqrt(1.0 - t * t)));
    };
    double error = 0.0;
    const double fraction = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(progress_beyond, 0.0, 1.0,
                                                                                          20, 1e-12, &error);
    if (error > 1e-9) throw ModelDomainError("hop_progress_fraction: quadrature did not converge");
    if (!(fraction > 0.0) || fraction > 1.0) {
        throw ModelDomainError("hop progress fraction " + std::to_string(fraction) + " outside (0, 1]");
    }
    return fraction;
}

double avg_hops(double distance, double radio_range, double density)
{
    if (distance < 0.0) throw std::invalid_argument("avg_hops: distance must be >= 0");
    const double fraction = hop_progress_fraction(radio_range, density);
    return distance / (radio_range * fraction);
}

double forwarding_ops(double packet_rate, double flow_count, double duration, double hops)
{
    return packet_rate * flow_count * duration * hops;
}

double odl_overhead(double forwarding_ops, double gamma) { return forwarding_ops * gamma; }

double total_overhead(double mp_overhead, double odl_overhead) { return mp_overhead + odl_overhead; }

double estimate_gamma(const MetricsReport& report)
{
    if (report.forwarding_ops == 0) throw std::invalid_argument("estimate_gamma: run has no forwarding operations");
    return static_cast<double>(report.beacons[BeaconCause::OnDemand]) / static_cast<double>(report.forwarding_ops);
}

MonteCarloEstimate monte_carlo_distance(double a, double b, std::size_t samples, std::uint64_t seed)
{
    if (samples == 0) throw std::invalid_argument("monte_carlo_distance: need at least one sample");
    Rng rng = make_stream(seed, StreamId::Oracle);
    std::uniform_real_distribution<double> ux(0.0, a);
    std::uniform_real_distribution<double> uy(0.0, b);
    // Welford running mean/variance.
    double mean = 0.0;
    double m2 = 0.0;
    for (std::size_t i = 1; i <= samples; ++i) {
        const double x1 = ux(rng);
        const double y1 = uy(rng);
        const double x2 = ux(rng);
        const double y2 = uy(rng);
        const double d = std::hypot(x1 - x2, y1 - y2);
        const double delta = d - mean;
        mean += delta / static_cast<double>(i);
        m2 += delta * (d - mean);
    }
    const double variance = samples > 1 ? m2 / static_cast<double>(samples - 1) : 0.0;
    return {mean, std::sqrt(variance / static_cast<double>(samples)), samples};
}

OverheadPrediction predict_overhead(const AnalyticalScenario& s)
{
    OverheadPrediction p;
    p.mean_distance = avg_distance(s.area_a, s.area_b);
    p.hops = avg_hops(p.mean_distance, s.radio_range, s.density());
    p.forwarding_ops = forwarding_ops(s.packet_rate, s.flow_count, s.duration, p.hops);
    return p;
}

}  // namespace apu
