#pragma once

#include "apu/beaconing.hpp"
#include "apu/config.hpp"
#include "apu/event_queue.hpp"
#include "apu/metrics.hpp"
#include "apu/mobility.hpp"
#include "apu/neighbor_table.hpp"
#include "apu/radio.hpp"
#include "apu/random.hpp"
#include "apu/routing.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

namespace apu {

struct BeaconRecord {
    double time = 0.0;
    NodeId node = 0;
    BeaconCause cause = BeaconCause::Initial;
};

struct PacketRecord {
    std::uint64_t id = 0;
    std::uint32_t flow = 0;
    double created = 0.0;
    double finished = 0.0;
    ForwardOutcome outcome = ForwardOutcome::Delivered;
    std::vector<NodeId> trace;
    Vec2 destination_position;
};

struct MobilityRecord {
    double time = 0.0;
    NodeId node = 0;
    Vec2 position;
    Vec2 velocity;
};

/// One simulation run over [0, duration). Single-threaded; independent instances
/// share nothing and may run concurrently.
class Simulator {
public:
    explicit Simulator(ScenarioConfig config);

    Simulator(const Simulator&) = delete;
    Simulator& operator=(const Simulator&) = delete;

    const ScenarioConfig& config() const { return config_; }
    double now() const { return queue_.now(); }

    /// Processes every event with fire time <= t (and < duration).
    void run_until(double t);
    /// Runs to the end of the scenario and assembles the report. Call once.
    MetricsReport finish();

    std::size_t node_count() const { return nodes_.size(); }
    Vec2 true_position(NodeId node, double t) const;
    Vec2 observed_position(NodeId node, double t) const;
    const NodeKinematics& kinematics(NodeId node) const { return nodes_.at(node); }
    const NeighborTable& neighbors(NodeId node) const { return tables_.at(node); }
    /// Direct table access for building hand-crafted topologies in tests.
    NeighborTable& mutable_neighbors(NodeId node) { return tables_.at(node); }
    const BeaconState& beacon_state(NodeId node) const { return beacon_states_.at(node); }
    const BeaconPolicy& policy() const { return *policy_; }
    const EnergyLedger& energy() const { return ledger_; }
    const std::vector<BeaconRecord>& beacon_log() const { return beacon_log_; }
    const std::vector<PacketRecord>& packet_log() const { return packet_log_; }
    const std::vector<FlowStats>& flow_stats() const { return flow_stats_; }
    std::uint64_t forwarding_ops() const { return forwarding_ops_; }
    std::uint64_t unicast_attempts() const { return unicast_attempts_; }

    /// True neighbor set of `node` at time t, ascending ids.
    std::vector<NodeId> true_neighbors(NodeId node, double t) const;
    AccuracySample sample_accuracy(double t) const;

    void set_event_observer(std::function<void(const Event&)> observer) { observer_ = std::move(observer); }
    /// Enables the waypoint-change trace (time, node, x, y, vx, vy).
    void record_mobility(bool enabled);
    const std::vector<MobilityRecord>& mobility_trace() const { return mobility_trace_; }

private:
    struct Flow {
        FlowSpec spec;
        double start = 0.0;
        double stop = 0.0;
        std::uint64_t next_index = 0;
        std::uint64_t hash = 0;
    };

    struct Transmission {
        bool is_beacon = false;
        Beacon beacon;
        std::vector<NodeId> receivers;
        DataPacket packet;
        NodeId sender = 0;
        NodeId receiver = 0;
        UnicastResult result;
    };

    void dispatch(const Event& event);
    void process(double horizon, bool inclusive);

    void on_tick(std::uint64_t index);
    void on_waypoint(NodeId node);
    void on_generate(std::uint32_t flow);
    void on_arrival(std::uint64_t ref);
    void on_retransmit_timeout(std::uint64_t ref);
    void on_sample(std::uint64_t index);

    void emit_beacon(NodeId node, BeaconCause cause);
    void reschedule_timer(NodeId node);
    void forward(NodeId holder, DataPacket packet, bool after_failure);
    void finish_packet(const DataPacket& packet, ForwardOutcome outcome);
    bool handle_data_heard(NodeId node, NodeId transmitter, const KinematicSnapshot& piggyback, bool addressed);
    void process_overhearers(const Transmission& tx);

    void schedule_if_before_end(double time, EventKind kind, NodeId node = 0, std::uint64_t ref = 0);
    std::span<const Vec2> positions_now();
    Radio radio() { return Radio(config_.radio_model(), loss_rng_, ledger_); }
    double p2p_latency(std::size_t bytes) const;
    double broadcast_latency(std::size_t bytes) const;
    void hash_mobility(NodeId node);

    ScenarioConfig config_;
    Area area_;
    std::unique_ptr<BeaconPolicy> policy_;
    EventQueue queue_;

    std::vector<MotionParams> motion_;
    std::vector<NodeKinematics> nodes_;
    std::vector<Rng> mobility_rngs_;
    std::vector<Vec2> fix_error_;
    std::vector<NeighborTable> tables_;
    std::vector<BeaconState> beacon_states_;
    std::vector<EventHandle> beacon_timers_;
    std::vector<std::uint64_t> mobility_hashes_;

    Rng traffic_rng_;
    Rng loss_rng_;
    Rng localization_rng_;
    EnergyLedger ledger_;

    std::vector<Flow> flows_;
    std::vector<FlowStats> flow_stats_;
    std::unordered_map<std::uint64_t, Transmission> in_transit_;
    std::uint64_t next_transmission_ = 0;
    std::uint64_t next_packet_ = 0;

    std::vector<Vec2> positions_;
    double positions_time_ = -1.0;

    std::uint64_t forwarding_ops_ = 0;
    std::uint64_t unicast_attempts_ = 0;
    std::uint64_t failed_transmissions_ = 0;
    std::vector<AccuracySample> accuracy_;
    std::vector<BeaconRecord> beacon_log_;
    std::vector<PacketRecord> packet_log_;
    std::vector<MobilityRecord> mobility_trace_;
    bool record_mobility_ = false;
    bool finished_ = false;
    std::function<void(const Event&)> observer_;
};

/// Validates `config`, runs it to completion and returns the report.
MetricsReport run(const ScenarioConfig& config);

}  // namespace apu
