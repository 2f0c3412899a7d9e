#include "apu/beaconing.hpp"
#include "apu/simulator.hpp"
#include "scenario_builders.hpp"

#include <doctest.h>

#include <cmath>

using namespace apu;
using apu::testing::static_scenario;
using apu::testing::turn_scenario;

namespace {

std::vector<double> beacon_times(const Simulator& sim, NodeId node, BeaconCause cause)
{
    std::vector<double> out;
    for (const BeaconRecord& b : sim.beacon_log())
        if (b.node == node && b.cause == cause) out.push_back(b.time);
    return out;
}

}  // namespace

TEST_CASE("mp_check: no deviation without motion or along a straight leg")
{
    BeaconState s;
    CHECK_FALSE(mp_check(s, {0, 0}, 1.0, 10.0).fire);

    s.last_beacon = KinematicSnapshot{{50, 50}, {0, 0}, 0.0};
    for (double t = 0.0; t < 100.0; t += 7.3) CHECK(mp_check(s, {50, 50}, t, 1e-9).deviation == 0.0);

    s.last_beacon = KinematicSnapshot{{0, 0}, {3, 4}, 2.0};
    const MpDecision d = mp_check(s, {3 * 8.0, 4 * 8.0}, 10.0, 1e-6);
    CHECK_FALSE(d.fire);
    CHECK(d.deviation < 1e-9);
}

TEST_CASE("mp_check: perpendicular turn fires once deviation exceeds the threshold")
{
    BeaconState s;
    s.last_beacon = KinematicSnapshot{{0, 0}, {20, 0}, 0.0};
    // At t after the turn the prediction is (20t, 0) and the node is at (0, 20t).
    auto deviation_at = [&](double t) { return mp_check(s, {0, 20 * t}, t, 10.0); };
    CHECK_FALSE(deviation_at(0.3).fire);
    CHECK(deviation_at(0.4).fire);
    CHECK(deviation_at(0.4).deviation == doctest::Approx(20 * std::sqrt(2.0) * 0.4));
}

TEST_CASE("odl_check: only previously unknown transmitters trigger")
{
    NeighborTable t(5);
    CHECK(odl_check(t, 1, {{0, 0}, {0, 0}, 1.0}));
    CHECK(t.find(1)->source == EntrySource::Piggyback);
    CHECK_FALSE(odl_check(t, 1, {{1, 0}, {0, 0}, 2.0}));

    const AdaptivePositionUpdate apu(10.0);
    BeaconState s;
    s.last_beacon = KinematicSnapshot{{0, 0}, {0, 0}, 0.0};
    CHECK(apu.on_data_heard(s, true, {0, 0}, 1.0) == BeaconCause::OnDemand);
    CHECK_FALSE(apu.on_data_heard(s, false, {0, 0}, 1.0).has_value());
    // Both rules true at the same instant: a single beacon attributed to MP.
    CHECK(apu.on_data_heard(s, true, {50, 0}, 1.0) == BeaconCause::MobilityPrediction);
}

TEST_CASE("pb_next walks the interval grid")
{
    CHECK(pb_next(1.0, 0.0) == 1.0);
    CHECK(pb_next(3.0, 3.0) == 6.0);
    CHECK(pb_next(3.0, 4.5) == 6.0);
    CHECK(pb_next(0.1, 0.30000000000000004) == doctest::Approx(0.4));
}

TEST_CASE("db_check accumulates path length, not displacement")
{
    BeaconState s;
    CHECK_FALSE(db_check(s, {0, 0}, 50.0));
    CHECK_FALSE(db_check(s, {30, 0}, 50.0));
    CHECK(db_check(s, {10, 0}, 50.0));
    CHECK(s.odometer == doctest::Approx(50.0));
}

TEST_CASE("sb_interval is linear between its endpoints")
{
    const SpeedBeaconing p{5.0, 0.5, 0.0, 10.0};
    CHECK(sb_interval(0.0, p) == 5.0);
    CHECK(sb_interval(10.0, p) == 0.5);
    CHECK(sb_interval(25.0, p) == 0.5);
    CHECK(sb_interval(5.0, p) == doctest::Approx(2.75));
    CHECK(sb_next(5.0, 1.0, p) == doctest::Approx(3.75));
}

TEST_CASE("periodic beaconing in the simulator")
{
    ScenarioConfig c = static_scenario({{0, 0}, {100, 0}});
    c.strategy = Strategy::Periodic;

    SUBCASE("interval 3 over 10 s: beacons at 0, 3, 6, 9")
    {
        c.params.periodic_interval = 3.0;
        Simulator sim(c);
        const MetricsReport r = sim.finish();
        CHECK(r.beacons.total() == 8);
        CHECK(beacon_times(sim, 0, BeaconCause::Periodic) == std::vector<double>{3.0, 6.0, 9.0});
    }
    SUBCASE("interval longer than the run: initial beacon only")
    {
        c.params.periodic_interval = 20.0;
        CHECK(run(c).beacons.total() == 2);
    }
}

TEST_CASE("distance beaconing counts pacing path length")
{
    // Node paces 30 m east and back at 10 m/s: 50 m of path every 5 s, never
    // more than 30 m from where it started.
    ScenarioConfig c = static_scenario({{100, 100}, {100, 150}});
    for (int leg = 0; leg < 12; ++leg) c.placement[0].script.push_back({{leg % 2 == 0 ? 130.0 : 100.0, 100}, 10.0, 0.0});
    c.strategy = Strategy::Distance;
    c.params.distance_threshold = 50.0;
    c.duration = 30.0;
    Simulator sim(c);
    sim.finish();
    const std::vector<double> times = beacon_times(sim, 0, BeaconCause::Distance);
    REQUIRE(times.size() == 5);
    for (std::size_t i = 0; i < times.size(); ++i) CHECK(times[i] == doctest::Approx(5.0 * (i + 1)));
    CHECK(beacon_times(sim, 1, BeaconCause::Distance).empty());
}

TEST_CASE("speed beaconing: a stationary node beacons every interval_max")
{
    ScenarioConfig c = static_scenario({{0, 0}});
    c.strategy = Strategy::Speed;
    c.params.speed_interval_max = 5.0;
    c.duration = 20.0;
    Simulator sim(c);
    sim.finish();
    CHECK(beacon_times(sim, 0, BeaconCause::Speed) == std::vector<double>{5.0, 10.0, 15.0});
}

TEST_CASE("APU: a perpendicular turn fires MP at the first tick 0.4 s after it")
{
    Simulator sim(turn_scenario());
    const MetricsReport r = sim.finish();
    const std::vector<double> mp = beacon_times(sim, 0, BeaconCause::MobilityPrediction);
    REQUIRE_FALSE(mp.empty());
    CHECK(mp.front() == doctest::Approx(1.4));
    CHECK(r.beacons[BeaconCause::OnDemand] == 0);
    CHECK(r.beacons[BeaconCause::Initial] + r.beacons[BeaconCause::MobilityPrediction] == r.beacons.total());
}

TEST_CASE("APU: beacons from unknown nodes do not draw ODL responses")
{
    // The initial beacons at t=0 all come from unknown senders.
    ScenarioConfig c = static_scenario({{0, 0}, {100, 0}, {0, 100}});
    c.strategy = Strategy::Adaptive;
    const MetricsReport r = run(c);
    CHECK(r.beacons.total() == 3);
    CHECK(r.beacons[BeaconCause::OnDemand] == 0);
}
