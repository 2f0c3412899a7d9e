#include "apu/radio.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace apu;

TEST_CASE("in_range uses a closed disk")
{
    const RadioModel unit{RadioKind::UnitDisk, 250.0, 0.0};
    CHECK(in_range({10, 10}, {10, 10}, unit));
    CHECK(in_range({0, 0}, {250, 0}, unit));
    CHECK(in_range({0, 0}, {150, 200}, unit));
    CHECK_FALSE(in_range({0, 0}, {250.000001, 0}, unit));
}

TEST_CASE("energy_cost matches the per-operation cost table")
{
    CHECK(energy_cost(EnergyOp::BroadcastSend, 100) == 482.0);
    CHECK(energy_cost(EnergyOp::P2PSend, 0) == 431.0);
    CHECK(energy_cost(EnergyOp::PromiscuousDiscard, 100) == doctest::Approx(65.0).epsilon(1e-15));
    CHECK(energy_cost(EnergyOp::P2PRecv, 512) == doctest::Approx(0.12 * 512 + 316));
    CHECK(energy_cost(EnergyOp::BroadcastRecv, 1) == doctest::Approx(50.26));
    CHECK(energy_cost(EnergyOp::PromiscuousRecv, 32) == doctest::Approx(0.12 * 32 + 83));
}

TEST_CASE("energy op names round-trip")
{
    for (const EnergyOp op : kAllEnergyOps) CHECK(energy_op_from_string(to_string(op)) == op);
    CHECK_THROWS_AS(energy_op_from_string("teleport"), std::invalid_argument);
}

TEST_CASE("ledger totals are additive over nodes and classes")
{
    EnergyLedger ledger(3);
    ledger.charge(0, EnergyOp::BroadcastSend, 32);
    ledger.charge(1, EnergyOp::BroadcastRecv, 32);
    ledger.charge(2, EnergyOp::BroadcastRecv, 32);
    ledger.charge(1, EnergyOp::P2PSend, 512);
    ledger.charge(1, EnergyOp::P2PSend, 512);
    CHECK(ledger.events(1, EnergyOp::P2PSend) == 2);
    CHECK(ledger.class_events(EnergyOp::BroadcastRecv) == 2);
    double by_node = 0.0;
    double by_class = 0.0;
    for (NodeId n = 0; n < 3; ++n) by_node += ledger.node_total(n);
    for (const EnergyOp op : kAllEnergyOps) by_class += ledger.class_total(op);
    const double expected = energy_cost(EnergyOp::BroadcastSend, 32) + 2 * energy_cost(EnergyOp::BroadcastRecv, 32) +
                            2 * energy_cost(EnergyOp::P2PSend, 512);
    CHECK(ledger.total() == doctest::Approx(expected));
    CHECK(by_node == doctest::Approx(expected));
    CHECK(by_class == doctest::Approx(expected));
    CHECK_THROWS(ledger.charge(3, EnergyOp::P2PRecv, 1));
}

TEST_CASE("localization error: exact with sigma 0, unbiased Gaussian otherwise")
{
    Rng rng(99);
    CHECK(observed_position({12.5, 7}, {0.0}, rng) == Vec2{12.5, 7});

    const Vec2 truth{300, 400};
    const int samples = 100'000;
    double sx = 0, sy = 0, sxx = 0, syy = 0;
    for (int i = 0; i < samples; ++i) {
        const Vec2 p = observed_position(truth, {10.0}, rng);
        sx += p.x;
        sy += p.y;
        sxx += (p.x - truth.x) * (p.x - truth.x);
        syy += (p.y - truth.y) * (p.y - truth.y);
    }
    const double mx = sx / samples;
    const double my = sy / samples;
    CHECK(std::abs(mx - truth.x) < 0.2);
    CHECK(std::abs(my - truth.y) < 0.2);
    const double stdx = std::sqrt(sxx / samples - (mx - truth.x) * (mx - truth.x));
    const double stdy = std::sqrt(syy / samples - (my - truth.y) * (my - truth.y));
    CHECK(std::abs(stdx - 10.0) < 0.2);
    CHECK(std::abs(stdy - 10.0) < 0.2);
}

TEST_CASE("broadcast delivery and charging")
{
    Rng rng(1);
    EnergyLedger ledger(4);
    Radio radio({RadioKind::UnitDisk, 250.0, 0.0}, rng, ledger);

    SUBCASE("lone sender still pays")
    {
        const std::vector<Vec2> pos{{0, 0}, {900, 0}, {0, 900}, {900, 900}};
        CHECK(radio.deliver_broadcast(0, pos, 32).empty());
        CHECK(ledger.events(0, EnergyOp::BroadcastSend) == 1);
        CHECK(ledger.class_events(EnergyOp::BroadcastRecv) == 0);
    }
    SUBCASE("all three in range receive")
    {
        const std::vector<Vec2> pos{{0, 0}, {100, 0}, {0, 100}, {-100, -100}};
        CHECK(radio.deliver_broadcast(0, pos, 32) == std::vector<NodeId>{1, 2, 3});
        CHECK(ledger.class_events(EnergyOp::BroadcastRecv) == 3);
    }
}

TEST_CASE("lossy disk with certain loss delivers nothing")
{
    Rng rng(1);
    EnergyLedger ledger(3);
    Radio radio({RadioKind::LossyDisk, 250.0, 1.0}, rng, ledger);
    const std::vector<Vec2> pos{{0, 0}, {10, 0}, {20, 0}};
    for (int i = 0; i < 50; ++i) CHECK(radio.deliver_broadcast(0, pos, 32).empty());
    const UnicastResult r = radio.send_unicast(0, 1, pos, 512, 4);
    CHECK(r.outcome == UnicastOutcome::FailedAfterRetries);
    CHECK(r.attempts == 4);
}

TEST_CASE("unicast outcomes and charging")
{
    Rng rng(1);
    EnergyLedger ledger(3);
    Radio radio({RadioKind::UnitDisk, 250.0, 0.0}, rng, ledger);

    SUBCASE("in range: one attempt, bystander overhears")
    {
        const std::vector<Vec2> pos{{0, 0}, {200, 0}, {0, 200}};
        const UnicastResult r = radio.send_unicast(0, 1, pos, 512, 4);
        CHECK(r.outcome == UnicastOutcome::Delivered);
        CHECK(r.attempts == 1);
        CHECK(ledger.events(0, EnergyOp::P2PSend) == 1);
        CHECK(ledger.events(1, EnergyOp::P2PRecv) == 1);
        CHECK(ledger.events(2, EnergyOp::P2PRecv) == 0);
        REQUIRE(r.overheard.size() == 1);
        CHECK(r.overheard[0] == std::pair<NodeId, int>{2, 1});
    }
    SUBCASE("out of range: retry limit exhausted")
    {
        const std::vector<Vec2> pos{{0, 0}, {300, 0}, {0, 200}};
        const UnicastResult r = radio.send_unicast(0, 1, pos, 512, 4);
        CHECK(r.outcome == UnicastOutcome::FailedAfterRetries);
        CHECK(r.attempts == 4);
        CHECK(ledger.events(0, EnergyOp::P2PSend) == 4);
        CHECK(ledger.events(1, EnergyOp::P2PRecv) == 0);
        REQUIRE(r.overheard.size() == 1);
        CHECK(r.overheard[0].second == 4);
    }
}
