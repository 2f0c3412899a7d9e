#include "apu/analysis.hpp"
#include "apu/random.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace apu;

namespace {

// E|P - Q| for independent uniform P, Q in an a x b box, integrated directly over the
// density of the coordinate differences (triangular on each axis). Midpoint rule.
double distance_by_quadrature(double a, double b, int cells)
{
    double sum = 0.0;
    const double hx = a / cells;
    const double hy = b / cells;
    for (int i = 0; i < cells; ++i) {
        const double x = (i + 0.5) * hx;
        const double wx = 2.0 * (a - x) / (a * a);
        for (int j = 0; j < cells; ++j) {
            const double y = (j + 0.5) * hy;
            sum += std::hypot(x, y) * wx * 2.0 * (b - y) / (b * b);
        }
    }
    return sum * hx * hy;
}

// Mean greedy progress towards a far destination in units of R, with neighbors drawn
// as a Poisson process of intensity `density` over the radio disk.
double progress_by_sampling(double range, double density, int trials, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::poisson_distribution<int> count(density * std::numbers::pi * range * range);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double sum = 0.0;
    for (int t = 0; t < trials; ++t) {
        double best = 0.0;
        const int n = count(rng);
        for (int k = 0; k < n; ++k) {
            const double r = range * std::sqrt(u(rng));
            const double phi = 2.0 * std::numbers::pi * u(rng);
            best = std::max(best, r * std::cos(phi));
        }
        sum += best / range;
    }
    return sum / trials;
}

}  // namespace

TEST_CASE("avg_distance agrees with direct quadrature")
{
    CHECK(avg_distance(1, 1) == doctest::Approx(0.5214054331647207).epsilon(1e-12));
    for (auto [a, b] : {std::pair{1.0, 1.0}, {1000.0, 1000.0}, {1500.0, 500.0}, {1500.0, 1000.0}, {3.0, 0.2}}) {
        CAPTURE(a);
        CAPTURE(b);
        CHECK(avg_distance(a, b) == doctest::Approx(distance_by_quadrature(a, b, 1500)).epsilon(1e-5));
    }
    CHECK(avg_distance(1000, 1000) == doctest::Approx(521.405).epsilon(1e-5));
}

TEST_CASE("avg_distance is symmetric and homogeneous of degree one")
{
    for (double a : {0.5, 1.0, 7.0, 1500.0}) {
        for (double b : {0.25, 1.0, 30.0, 1000.0}) {
            CHECK(avg_distance(a, b) == doctest::Approx(avg_distance(b, a)).epsilon(1e-12));
            CHECK(avg_distance(3.5 * a, 3.5 * b) == doctest::Approx(3.5 * avg_distance(a, b)).epsilon(1e-8));
        }
    }
    CHECK_THROWS_AS(avg_distance(0, 1), std::invalid_argument);
    CHECK_THROWS_AS(avg_distance(1, -2), std::invalid_argument);
}

TEST_CASE("monte_carlo_distance")
{
    const MonteCarloEstimate e = monte_carlo_distance(1, 1, 1'000'000, 11);
    CHECK(e.samples == 1'000'000);
    CHECK(std::abs(e.mean - avg_distance(1, 1)) < 4 * e.standard_error);
    CHECK(e.standard_error < 3e-4);

    const MonteCarloEstimate thin = monte_carlo_distance(1, 1e-6, 200'000, 3);
    CHECK(thin.mean == doctest::Approx(1.0 / 3).epsilon(5e-3));

    const MonteCarloEstimate again = monte_carlo_distance(1, 1, 1000, 11);
    CHECK(again.mean == monte_carlo_distance(1, 1, 1000, 11).mean);
    CHECK(monte_carlo_distance(2, 2, 1, 5).standard_error == 0.0);
    CHECK_THROWS_AS(monte_carlo_distance(1, 1, 0, 1), std::invalid_argument);
}

TEST_CASE("hop progress fraction matches a Poisson-disk greedy simulation")
{
    const double range = 250.0;
    for (double density : {1e-5, 5e-5, 3e-4}) {
        CAPTURE(density);
        const double model = hop_progress_fraction(range, density);
        CHECK(model > 0.0);
        CHECK(model <= 1.0);
        CHECK(model == doctest::Approx(progress_by_sampling(range, density, 200'000, 17)).epsilon(0.01));
    }
}

TEST_CASE("avg_hops")
{
    const double rho = 300.0 / 1e6;
    CHECK(avg_hops(0.0, 250.0, rho) == 0.0);
    double previous = 0.0;
    for (double d = 10.0; d < 2000.0; d += 97.0) {
        const double h = avg_hops(d, 250.0, rho);
        CHECK(h > previous);
        previous = h;
    }
    CHECK(avg_hops(avg_distance(1000, 1000), 250.0, rho) == doctest::Approx(2.279).epsilon(2e-3));
    CHECK_THROWS_AS(avg_hops(-1.0, 250.0, rho), std::invalid_argument);
    CHECK_THROWS_AS(avg_hops(10.0, 0.0, rho), std::invalid_argument);
    CHECK_THROWS_AS(avg_hops(10.0, 250.0, 0.0), std::invalid_argument);
}

TEST_CASE("hop progress fraction in sparse networks")
{
    // For small rho R^2 the fraction tends to rho R^2 * integral_0^1 (acos t - t sqrt(1 - t^2)) dt = 2/3 rho R^2.
    for (double density : {1e-12, 1e-20, 1e-300}) {
        CHECK(hop_progress_fraction(250.0, density) == doctest::Approx(2.0 / 3.0 * density * 62500.0).epsilon(1e-6));
    }
    CHECK_THROWS_AS(hop_progress_fraction(1e-20, 1e-300), ModelDomainError);
}

TEST_CASE("overhead arithmetic")
{
    CHECK(forwarding_ops(1, 10, 100, 4) == 4000.0);
    CHECK(forwarding_ops(0, 10, 100, 4) == 0.0);
    CHECK(forwarding_ops(4, 5, 900, 3.2) == doctest::Approx(57600.0));
    CHECK(odl_overhead(4000, 0.05) == doctest::Approx(200.0));
    CHECK(odl_overhead(4000, 0.0) == 0.0);
    CHECK(total_overhead(150, 200) == 350.0);
    CHECK(total_overhead(0, 0) == 0.0);
}

TEST_CASE("estimate_gamma")
{
    MetricsReport r;
    r.forwarding_ops = 4000;
    for (int i = 0; i < 200; ++i) r.beacons.add(BeaconCause::OnDemand);
    for (int i = 0; i < 50; ++i) r.beacons.add(BeaconCause::MobilityPrediction);
    CHECK(estimate_gamma(r) == doctest::Approx(0.05));
    r.forwarding_ops = 0;
    CHECK_THROWS_AS(estimate_gamma(r), std::invalid_argument);
}

TEST_CASE("predict_overhead chains distance, hops and forwarding ops")
{
    const AnalyticalScenario s{1000, 1000, 300, 250, 4, 20, 100};
    const OverheadPrediction p = predict_overhead(s);
    CHECK(p.mean_distance == doctest::Approx(avg_distance(1000, 1000)));
    CHECK(p.hops == doctest::Approx(avg_hops(p.mean_distance, 250, 3e-4)));
    CHECK(p.forwarding_ops == doctest::Approx(4 * 20 * 100 * p.hops));
}
