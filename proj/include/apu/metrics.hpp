#pragma once

#include "apu/beaconing.hpp"
#include "apu/config.hpp"
#include "apu/radio.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace apu {

struct AccuracySample {
    double time = 0.0;
    double unknown_ratio = 0.0;  // mean over nodes
    double false_ratio = 0.0;    // mean over nodes
    std::uint64_t unknown_count = 0;
    std::uint64_t false_count = 0;
    std::uint64_t true_neighbor_count = 0;
};

struct FlowStats {
    std::uint32_t flow = 0;
    NodeId source = 0;
    NodeId destination = 0;
    std::uint64_t generated = 0;
    std::uint64_t delivered = 0;
    std::uint64_t dropped_void = 0;
    std::uint64_t dropped_retries = 0;
    std::uint64_t in_flight = 0;
    double delay_sum = 0.0;
    std::uint64_t hop_sum = 0;

    std::optional<double> pdr() const;
    std::optional<double> mean_delay() const;
    std::optional<double> mean_hops() const;
};

struct MetricsReport {
    std::string config_json;
    Strategy strategy = Strategy::Adaptive;
    std::uint64_t seed = 0;
    double duration = 0.0;
    std::uint32_t node_count = 0;

    BeaconCounts beacons;
    std::vector<BeaconCounts> node_beacons;
    std::vector<AccuracySample> accuracy;
    std::vector<FlowStats> flows;
    EnergyLedger energy;

    std::uint64_t forwarding_ops = 0;
    std::uint64_t unicast_attempts = 0;
    std::uint64_t failed_transmissions = 0;

    std::uint64_t mobility_hash = 0;
    std::uint64_t traffic_hash = 0;

    std::uint64_t generated() const;
    std::uint64_t delivered() const;
    std::uint64_t dropped_void() const;
    std::uint64_t dropped_retries() const;
    std::uint64_t in_flight() const;
    /// nullopt when no packet was generated ("no flows").
    std::optional<double> pdr() const;
    /// Averaged over delivered packets only.
    std::optional<double> mean_delay() const;
    std::optional<double> mean_hops() const;
    double mean_unknown_ratio() const;
    double mean_false_ratio() const;
};

}  // namespace apu
