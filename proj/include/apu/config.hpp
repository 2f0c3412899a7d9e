#pragma once

#include "apu/geometry.hpp"
#include "apu/mobility.hpp"
#include "apu/radio.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace apu {

enum class Strategy { Periodic, Distance, Speed, Adaptive };

std::string_view to_string(Strategy strategy);  // "PB", "DB", "SB", "APU"
Strategy strategy_from_string(std::string_view name);

struct StrategyParams {
    double periodic_interval = 1.0;    // PB, seconds
    double distance_threshold = 50.0;  // DB, meters of path length
    double speed_interval_max = 5.0;   // SB, interval at or below speed_low
    double speed_interval_min = 0.5;   // SB, interval at or above speed_high
    double speed_low = 0.0;
    std::optional<double> speed_high;        // defaults to the scenario max speed
    std::optional<double> acceptable_error;  // APU AER, defaults to 0.1 * radio range
    double timeout_factor = 3.0;             // PB/DB/SB entry lifetime in nominal intervals
};

struct NodeSpec {
    Vec2 position;
    std::vector<ScriptedLeg> script;  // non-empty overrides the scenario mobility model
};

struct FlowSpec {
    NodeId source = 0;
    NodeId destination = 0;
    std::optional<double> start;
    std::optional<double> stop;
};

struct ScenarioConfig {
    // area
    double area_a = 1500.0;
    double area_b = 1000.0;
    // nodes
    std::uint32_t node_count = 100;
    std::vector<NodeSpec> placement;  // explicit placement; empty means uniform random
    // mobility
    MobilityModel mobility = MobilityModel::RandomWaypoint;
    double min_speed = 1.0;
    double max_speed = 10.0;
    double pause_time = 0.0;
    // radio
    RadioKind radio = RadioKind::UnitDisk;
    double radio_range = 250.0;
    double loss_probability = 0.1;
    int retry_limit = 4;
    double p2p_rate_bps = 11e6;
    double broadcast_rate_bps = 2e6;
    double processing_delay = 1e-3;
    // traffic
    std::uint32_t flow_count = 10;
    double packet_rate = 4.0;
    std::uint32_t packet_size = 512;
    double traffic_start = 1.0;
    std::uint32_t max_hops = 128;
    std::vector<FlowSpec> flows;  // explicit flows; empty means drawn at random
    // beaconing
    Strategy strategy = Strategy::Adaptive;
    StrategyParams params;
    std::uint32_t beacon_size = 32;
    // perturbations
    double localization_sigma = 0.0;
    // timing
    double duration = 900.0;
    double tick_interval = 0.1;
    double metrics_sample_interval = 1.0;
    std::uint64_t seed = 1;

    Area area() const { return {area_a, area_b}; }
    RadioModel radio_model() const;
    double acceptable_error() const { return params.acceptable_error.value_or(0.1 * radio_range); }
    double speed_high() const { return params.speed_high.value_or(max_speed); }
};

/// Invalid scenario; `field()` names the offending key in scenario-file notation.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string field, const std::string& message)
        : std::invalid_argument(field + ": " + message), field_(std::move(field))
    {
    }
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

void validate(const ScenarioConfig& config);

/// Scenario files are JSON objects with sections mirroring ScenarioConfig:
/// area, nodes, mobility, radio, traffic, strategy, perturbations, timing, seed.
/// Missing keys take their defaults; unknown keys are rejected.
ScenarioConfig parse_scenario(std::string_view json_text);
ScenarioConfig load_scenario(const std::string& path);
std::string dump_scenario(const ScenarioConfig& config, int indent = -1);

/// Sets a dotted key (e.g. "mobility.max_speed") to `value` and re-validates.
ScenarioConfig with_override(const ScenarioConfig& config, std::string_view dotted_key, double value);

}  // namespace apu
