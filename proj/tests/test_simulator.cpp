#include "apu/simulator.hpp"
#include "scenario_builders.hpp"

#include <doctest.h>

#include <cmath>

using namespace apu;
using apu::testing::add_flow;
using apu::testing::static_scenario;

namespace {

ScenarioConfig small_mobile(Strategy strategy, std::uint64_t seed = 3)
{
    ScenarioConfig c;
    c.node_count = 40;
    c.flow_count = 6;
    c.duration = 40.0;
    c.max_speed = 15.0;
    c.radio = RadioKind::LossyDisk;
    c.strategy = strategy;
    c.seed = seed;
    return c;
}

void check_conservation(const MetricsReport& r)
{
    for (const FlowStats& f : r.flows) {
        CHECK(f.generated == f.delivered + f.dropped_void + f.dropped_retries + f.in_flight);
    }
    CHECK(r.generated() == r.delivered() + r.dropped_void() + r.dropped_retries() + r.in_flight());
}

}  // namespace

TEST_CASE("a single node beacons once and has no flows")
{
    for (Strategy s : {Strategy::Periodic, Strategy::Distance, Strategy::Speed, Strategy::Adaptive}) {
        ScenarioConfig c = static_scenario({{10, 10}});
        c.strategy = s;
        c.params.periodic_interval = 20.0;
        c.params.speed_interval_max = 20.0;
        c.params.speed_interval_min = 20.0;
        const MetricsReport r = run(c);
        CHECK(r.beacons.total() == 1);
        CHECK(r.beacons[BeaconCause::Initial] == 1);
        CHECK_FALSE(r.pdr().has_value());
    }
}

TEST_CASE("two static nodes under 1 s periodic beaconing for 10 s")
{
    ScenarioConfig c = static_scenario({{0, 0}, {100, 0}});
    c.strategy = Strategy::Periodic;
    c.params.periodic_interval = 1.0;
    const MetricsReport r = run(c);
    CHECK(r.beacons[BeaconCause::Initial] == 2);
    CHECK(r.beacons[BeaconCause::Periodic] == 18);
    CHECK(r.beacons.total() == 20);
    CHECK(r.energy.class_events(EnergyOp::BroadcastSend) == 20);
    CHECK(r.energy.class_events(EnergyOp::BroadcastRecv) == 20);
}

TEST_CASE("true positions: placement at t=0, constant for static nodes, consistent with advance")
{
    ScenarioConfig c = small_mobile(Strategy::Adaptive);
    Simulator sim(c);
    std::vector<Vec2> initial;
    for (NodeId n = 0; n < sim.node_count(); ++n) initial.push_back(sim.true_position(n, 0.0));
    sim.run_until(12.34);
    for (NodeId n = 0; n < sim.node_count(); ++n) {
        const NodeKinematics& k = sim.kinematics(n);
        CHECK(distance(sim.true_position(n, 12.34), position_at(k, 12.34, c.area())) < 1e-9);
    }

    Simulator still(static_scenario({{5, 6}, {7, 8}}));
    still.run_until(9.0);
    CHECK(still.true_position(1, 9.0) == Vec2{7, 8});
}

TEST_CASE("identical config and seed give identical runs")
{
    for (Strategy s : {Strategy::Periodic, Strategy::Distance, Strategy::Speed, Strategy::Adaptive}) {
        const ScenarioConfig c = small_mobile(s);
        Simulator a(c);
        Simulator b(c);
        const MetricsReport ra = a.finish();
        const MetricsReport rb = b.finish();
        CHECK(ra.mobility_hash == rb.mobility_hash);
        CHECK(ra.traffic_hash == rb.traffic_hash);
        CHECK(ra.beacons.total() == rb.beacons.total());
        CHECK(ra.energy.total() == rb.energy.total());
        CHECK(ra.delivered() == rb.delivered());
        REQUIRE(a.beacon_log().size() == b.beacon_log().size());
        for (std::size_t i = 0; i < a.beacon_log().size(); ++i) {
            CHECK(a.beacon_log()[i].time == b.beacon_log()[i].time);
            CHECK(a.beacon_log()[i].node == b.beacon_log()[i].node);
        }
    }
    CHECK(run(small_mobile(Strategy::Adaptive, 3)).mobility_hash !=
          run(small_mobile(Strategy::Adaptive, 4)).mobility_hash);
}

TEST_CASE("streams are separated: strategy and perturbations leave mobility and traffic alone")
{
    const MetricsReport base = run(small_mobile(Strategy::Adaptive));
    for (Strategy s : {Strategy::Periodic, Strategy::Distance, Strategy::Speed}) {
        const MetricsReport other = run(small_mobile(s));
        CHECK(other.mobility_hash == base.mobility_hash);
        CHECK(other.traffic_hash == base.traffic_hash);
    }
    ScenarioConfig noisy = small_mobile(Strategy::Adaptive);
    noisy.localization_sigma = 5.0;
    const MetricsReport n = run(noisy);
    CHECK(n.mobility_hash == base.mobility_hash);
    CHECK(n.traffic_hash == base.traffic_hash);
}

TEST_CASE("packet conservation and counter identities hold on mobile runs")
{
    for (Strategy s : {Strategy::Periodic, Strategy::Distance, Strategy::Speed, Strategy::Adaptive}) {
        for (std::uint64_t seed : {1u, 2u}) {
            const MetricsReport r = run(small_mobile(s, seed));
            CAPTURE(to_string(s));
            REQUIRE(r.generated() > 0);
            check_conservation(r);
            CHECK(r.beacons[BeaconCause::Initial] == r.node_count);
            CHECK(r.energy.class_events(EnergyOp::BroadcastSend) == r.beacons.total());
            CHECK(r.energy.class_events(EnergyOp::P2PSend) == r.unicast_attempts);
            CHECK(r.forwarding_ops >= r.failed_transmissions);
            BeaconCounts summed;
            for (const BeaconCounts& nb : r.node_beacons) summed += nb;
            for (BeaconCause cause : kAllBeaconCauses) CHECK(summed[cause] == r.beacons[cause]);
            if (s == Strategy::Adaptive) {
                CHECK(r.beacons[BeaconCause::Initial] + r.beacons[BeaconCause::MobilityPrediction] +
                          r.beacons[BeaconCause::OnDemand] ==
                      r.beacons.total());
            }
            const std::optional<double> pdr = r.pdr();
            REQUIRE(pdr.has_value());
            CHECK(*pdr >= 0.0);
            CHECK(*pdr <= 1.0);
            for (const AccuracySample& a : r.accuracy) {
                CHECK(a.unknown_ratio >= 0.0);
                CHECK(a.unknown_ratio <= 1.0);
                CHECK(a.false_ratio >= 0.0);
                CHECK(a.false_ratio <= 1.0);
            }
        }
    }
}

TEST_CASE("the clock never runs backwards and stops before the horizon")
{
    Simulator sim(small_mobile(Strategy::Adaptive));
    double last = 0.0;
    std::size_t seen = 0;
    bool monotone = true;
    sim.set_event_observer([&](const Event& e) {
        monotone = monotone && e.fire_time >= last;
        last = e.fire_time;
        ++seen;
    });
    sim.finish();
    CHECK(monotone);
    CHECK(seen > 1000);
    CHECK(last < sim.config().duration);
}

TEST_CASE("finish may only be called once")
{
    Simulator sim(static_scenario({{0, 0}}));
    sim.finish();
    CHECK_THROWS(sim.finish());
}

TEST_CASE("a static APU network stays silent and accurate")
{
    std::vector<Vec2> pos;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) pos.push_back({100.0 + 150.0 * i, 100.0 + 150.0 * j});
    ScenarioConfig c = static_scenario(pos);
    c.duration = 60.0;
    add_flow(c, 0, 24, 1.0, 59.0);
    add_flow(c, 4, 20, 1.0, 59.0);
    const MetricsReport r = run(c);
    CHECK(r.beacons.total() == pos.size());
    CHECK(r.pdr() == 1.0);
    REQUIRE(r.accuracy.size() >= 59);
    for (const AccuracySample& a : r.accuracy) {
        CHECK(a.unknown_count == 0);
        CHECK(a.false_count == 0);
    }
}

TEST_CASE("invalid configurations name the offending field")
{
    auto field_of = [](ScenarioConfig c) -> std::string {
        try {
            Simulator sim(std::move(c));
        } catch (const ConfigError& e) {
            return e.field();
        }
        return "";
    };
    ScenarioConfig c;
    c.area_a = -5;
    CHECK(field_of(c) == "area.a");
    c = ScenarioConfig{};
    c.node_count = 0;
    CHECK(field_of(c) == "nodes.count");
    c = ScenarioConfig{};
    c.max_speed = 0.5;
    CHECK(field_of(c) == "mobility.max_speed");
    c = ScenarioConfig{};
    c.loss_probability = 1.5;
    CHECK(field_of(c) == "radio.loss_probability");
    c = ScenarioConfig{};
    c.params.acceptable_error = -1.0;
    CHECK(field_of(c) == "strategy.acceptable_error");
    c = ScenarioConfig{};
    c.tick_interval = 0.0;
    CHECK(field_of(c) == "timing.tick_interval");
    c = static_scenario({{0, 0}, {1, 1}});
    add_flow(c, 0, 5);
    CHECK(field_of(c) == "traffic.flows");
    c = static_scenario({{0, 0}, {2000, 1}});
    CHECK(field_of(c) == "nodes.placement");
}
