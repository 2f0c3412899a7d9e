#include "apu/simulator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

namespace apu {

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

void mix(std::uint64_t& hash, std::uint64_t word)
{
    for (int i = 0; i < 8; ++i) {
        hash ^= (word >> (8 * i)) & 0xffU;
        hash *= kFnvPrime;
    }
}

void mix(std::uint64_t& hash, double value) { mix(hash, std::bit_cast<std::uint64_t>(value)); }

}  // namespace

Simulator::Simulator(ScenarioConfig config)
    : config_(std::move(config)),
      area_(config_.area()),
      traffic_rng_(make_stream(config_.seed, StreamId::Traffic)),
      loss_rng_(make_stream(config_.seed, StreamId::RadioLoss)),
      localization_rng_(make_stream(config_.seed, StreamId::Localization)),
      ledger_(config_.node_count)
{
    validate(config_);
    policy_ = make_policy(config_);

    const std::uint32_t n = config_.node_count;
    motion_.reserve(n);
    nodes_.reserve(n);
    mobility_rngs_.reserve(n);
    tables_.reserve(n);
    fix_error_.assign(n, Vec2{});
    beacon_states_.assign(n, BeaconState{});
    beacon_timers_.assign(n, EventHandle{});
    mobility_hashes_.assign(n, kFnvOffset);

    const LocalizationErrorModel localization{config_.localization_sigma};
    for (NodeId i = 0; i < n; ++i) {
        Rng& rng = mobility_rngs_.emplace_back(make_stream(config_.seed, StreamId::Mobility, i));
        MotionParams params{area_, config_.mobility, config_.min_speed, config_.max_speed, config_.pause_time, {}};
        Vec2 start;
        if (config_.placement.empty()) {
            start = {uniform(rng, 0.0, area_.width), uniform(rng, 0.0, area_.height)};
        } else {
            start = config_.placement[i].position;
            if (!config_.placement[i].script.empty()) {
                params.model = MobilityModel::Scripted;
                params.script = config_.placement[i].script;
            }
        }
        motion_.push_back(std::move(params));
        nodes_.push_back(place(start, motion_.back(), rng));
        tables_.emplace_back(i);
        beacon_states_[i].last_tick_position = start;
        fix_error_[i] = apu::observed_position(Vec2{}, localization, localization_rng_);
        hash_mobility(i);
    }

    // Flows: explicit, or M distinct ordered pairs drawn without replacement.
    if (!config_.flows.empty()) {
        for (const FlowSpec& spec : config_.flows) flows_.push_back(Flow{spec});
    } else {
        std::set<std::pair<NodeId, NodeId>> used;
        std::uniform_int_distribution<NodeId> pick(0, n - 1);
        while (flows_.size() < config_.flow_count) {
            const NodeId s = pick(traffic_rng_);
            const NodeId d = pick(traffic_rng_);
            if (s == d || !used.emplace(s, d).second) continue;
            flows_.push_back(Flow{FlowSpec{s, d, std::nullopt, std::nullopt}});
        }
    }
    for (std::uint32_t f = 0; f < flows_.size(); ++f) {
        Flow& flow = flows_[f];
        if (flow.spec.start) {
            flow.start = *flow.spec.start;
        } else {
            const double period = config_.packet_rate > 0.0 ? 1.0 / config_.packet_rate : 0.0;
            flow.start = config_.traffic_start + uniform(traffic_rng_, 0.0, 1.0) * period;
        }
        flow.stop = std::min(flow.spec.stop.value_or(config_.duration), config_.duration);
        flow.hash = kFnvOffset;
        flow_stats_.push_back(FlowStats{f, flow.spec.source, flow.spec.destination});
        if (config_.packet_rate > 0.0 && flow.start < flow.stop) {
            schedule_if_before_end(flow.start, EventKind::PacketGeneration, flow.spec.source, f);
        }
    }

    for (NodeId i = 0; i < n; ++i) {
        queue_.schedule(0.0, EventKind::BeaconEmit, i, static_cast<std::uint64_t>(BeaconCause::Initial));
    }
    for (NodeId i = 0; i < n; ++i) schedule_if_before_end(next_change_time(nodes_[i]), EventKind::WaypointChange, i);
    schedule_if_before_end(config_.tick_interval, EventKind::NodeTick, 0, 1);
    schedule_if_before_end(config_.metrics_sample_interval, EventKind::MetricsSample, 0, 1);
}

void Simulator::schedule_if_before_end(double time, EventKind kind, NodeId node, std::uint64_t ref)
{
    if (time < config_.duration) queue_.schedule(time, kind, node, ref);
}

double Simulator::p2p_latency(std::size_t bytes) const
{
    return static_cast<double>(bytes) * 8.0 / config_.p2p_rate_bps + config_.processing_delay;
}

double Simulator::broadcast_latency(std::size_t bytes) const
{
    return static_cast<double>(bytes) * 8.0 / config_.broadcast_rate_bps + config_.processing_delay;
}

Vec2 Simulator::true_position(NodeId node, double t) const
{
    return position_at(nodes_.at(node), t, area_);
}

Vec2 Simulator::observed_position(NodeId node, double t) const
{
    return true_position(node, t) + fix_error_.at(node);
}

std::span<const Vec2> Simulator::positions_now()
{
    const double now = queue_.now();
    if (positions_time_ != now || positions_.size() != nodes_.size()) {
        positions_.resize(nodes_.size());
        for (NodeId i = 0; i < nodes_.size(); ++i) positions_[i] = true_position(i, now);
        positions_time_ = now;
    }
    return positions_;
}

void Simulator::hash_mobility(NodeId node)
{
    const NodeKinematics& k = nodes_[node];
    std::uint64_t& h = mobility_hashes_[node];
    mix(h, k.time);
    mix(h, k.position.x);
    mix(h, k.position.y);
    mix(h, k.velocity.x);
    mix(h, k.velocity.y);
    if (record_mobility_) mobility_trace_.push_back({k.time, node, k.position, k.velocity});
}

void Simulator::record_mobility(bool enabled)
{
    if (enabled && !record_mobility_) {
        for (NodeId i = 0; i < nodes_.size(); ++i) {
            mobility_trace_.push_back({nodes_[i].time, i, nodes_[i].position, nodes_[i].velocity});
        }
    }
    record_mobility_ = enabled;
}

void Simulator::run_until(double t)
{
    process(t, true);
}

void Simulator::process(double horizon, bool inclusive)
{
    while (!queue_.empty()) {
        const double t = queue_.next_time();
        if (t >= config_.duration) break;
        if (inclusive ? t > horizon : t >= horizon) break;
        const Event event = queue_.pop();
        if (observer_) observer_(event);
        dispatch(event);
    }
}

void Simulator::dispatch(const Event& event)
{
    switch (event.kind) {
    case EventKind::NodeTick: on_tick(event.ref); break;
    case EventKind::BeaconEmit:
        beacon_timers_[event.node] = EventHandle{};
        emit_beacon(event.node, static_cast<BeaconCause>(event.ref));
        break;
    case EventKind::PacketArrival: on_arrival(event.ref); break;
    case EventKind::PacketGeneration: on_generate(static_cast<std::uint32_t>(event.ref)); break;
    case EventKind::MetricsSample: on_sample(event.ref); break;
    case EventKind::WaypointChange: on_waypoint(event.node); break;
    case EventKind::RetransmitTimeout: on_retransmit_timeout(event.ref); break;
    }
}

void Simulator::on_tick(std::uint64_t index)
{
    const double now = queue_.now();
    const LocalizationErrorModel localization{config_.localization_sigma};
    const std::optional<double> timeout = policy_->neighbor_timeout();
    for (NodeId i = 0; i < nodes_.size(); ++i) {
        if (localization.sigma > 0.0) fix_error_[i] = apu::observed_position(Vec2{}, localization, localization_rng_);
        const Vec2 truth = true_position(i, now);
        const Vec2 self = truth + fix_error_[i];
        tables_[i].purge_out_of_range(self, now, config_.radio_range);
        if (timeout) tables_[i].purge_stale(now, *timeout);
        if (auto cause = policy_->on_tick(beacon_states_[i], self, truth, now)) emit_beacon(i, *cause);
    }
    schedule_if_before_end(static_cast<double>(index + 1) * config_.tick_interval, EventKind::NodeTick, 0, index + 1);
}

void Simulator::on_waypoint(NodeId node)
{
    NodeKinematics& k = nodes_[node];
    k = advance(k, queue_.now() - k.time, motion_[node], mobility_rngs_[node]);
    positions_time_ = -1.0;
    hash_mobility(node);
    schedule_if_before_end(next_change_time(k), EventKind::WaypointChange, node);
    if (policy_->strategy() == Strategy::Speed) reschedule_timer(node);
}

void Simulator::emit_beacon(NodeId node, BeaconCause cause)
{
    const double now = queue_.now();
    const NodeKinematics& k = nodes_[node];
    Beacon beacon{node, {observed_position(node, now), k.moving() ? k.velocity : Vec2{}, now}, cause,
                  config_.beacon_size};
    beacon_states_[node].record(beacon);
    beacon_log_.push_back({now, node, cause});

    Transmission tx;
    tx.is_beacon = true;
    tx.sender = node;
    tx.receivers = radio().deliver_broadcast(node, positions_now(), config_.beacon_size);
    tx.beacon = beacon;
    const std::uint64_t ref = next_transmission_++;
    in_transit_.emplace(ref, std::move(tx));
    queue_.schedule(now + broadcast_latency(config_.beacon_size), EventKind::PacketArrival, node, ref);

    reschedule_timer(node);
}

void Simulator::reschedule_timer(NodeId node)
{
    queue_.cancel(beacon_timers_[node]);
    beacon_timers_[node] = EventHandle{};
    const double now = queue_.now();
    const NodeKinematics& k = nodes_[node];
    const double speed = k.moving() ? k.speed : 0.0;
    const std::optional<double> next = policy_->next_scheduled(beacon_states_[node], now, speed);
    if (next && *next < config_.duration) {
        beacon_timers_[node] = queue_.schedule(std::max(now, *next), EventKind::BeaconEmit, node,
                                               static_cast<std::uint64_t>(policy_->scheduled_cause()));
    }
}

void Simulator::on_generate(std::uint32_t f)
{
    const double now = queue_.now();
    Flow& flow = flows_[f];
    DataPacket packet;
    packet.id = next_packet_++;
    packet.flow = f;
    packet.source = flow.spec.source;
    packet.destination = flow.spec.destination;
    packet.destination_position = true_position(flow.spec.destination, now);
    packet.size = config_.packet_size;
    packet.created = now;
    ++flow_stats_[f].generated;
    mix(flow.hash, now);

    ++flow.next_index;
    const double next = flow.start + static_cast<double>(flow.next_index) / config_.packet_rate;
    if (next < flow.stop) schedule_if_before_end(next, EventKind::PacketGeneration, flow.spec.source, f);

    forward(packet.source, std::move(packet), false);
}

void Simulator::forward(NodeId holder, DataPacket packet, bool after_failure)
{
    const double now = queue_.now();
    if (holder == packet.destination) {
        finish_packet(packet, ForwardOutcome::Delivered);
        return;
    }
    if (packet.hop_count() >= config_.max_hops) {
        finish_packet(packet, ForwardOutcome::DroppedVoid);
        return;
    }
    const Vec2 self = observed_position(holder, now);
    const std::optional<NodeId> next = select_next_hop(tables_[holder], self, packet.destination_position, now);
    if (!next) {
        finish_packet(packet, after_failure ? ForwardOutcome::DroppedRetries : ForwardOutcome::DroppedVoid);
        return;
    }

    const NodeKinematics& k = nodes_[holder];
    packet.piggyback_sender = holder;
    packet.piggyback = {self, k.moving() ? k.velocity : Vec2{}, now};
    ++forwarding_ops_;

    Transmission tx;
    tx.sender = holder;
    tx.receiver = *next;
    tx.result = radio().send_unicast(holder, *next, positions_now(), packet.size, config_.retry_limit);
    tx.packet = std::move(packet);
    unicast_attempts_ += static_cast<std::uint64_t>(tx.result.attempts);

    const double done = now + tx.result.attempts * p2p_latency(tx.packet.size);
    const bool delivered = tx.result.outcome == UnicastOutcome::Delivered;
    if (!delivered) ++failed_transmissions_;
    const std::uint64_t ref = next_transmission_++;
    in_transit_.emplace(ref, std::move(tx));
    queue_.schedule(done, delivered ? EventKind::PacketArrival : EventKind::RetransmitTimeout, holder, ref);
}

void Simulator::finish_packet(const DataPacket& packet, ForwardOutcome outcome)
{
    const double now = queue_.now();
    FlowStats& stats = flow_stats_[packet.flow];
    switch (outcome) {
    case ForwardOutcome::Delivered:
        ++stats.delivered;
        stats.delay_sum += now - packet.created;
        stats.hop_sum += packet.hop_count();
        break;
    case ForwardOutcome::DroppedVoid: ++stats.dropped_void; break;
    case ForwardOutcome::DroppedRetries: ++stats.dropped_retries; break;
    case ForwardOutcome::Forwarded: break;
    }
    packet_log_.push_back({packet.id, packet.flow, packet.created, now, outcome, packet.trace, packet.destination_position});
}

bool Simulator::handle_data_heard(NodeId node, NodeId transmitter, const KinematicSnapshot& piggyback, bool addressed)
{
    NeighborTable& table = tables_[node];
    if (!addressed && !table.contains(transmitter) && !policy_->learns_from_overheard_data()) return false;
    const bool was_new = table.upsert(transmitter, piggyback, EntrySource::Piggyback);
    const double now = queue_.now();
    if (auto cause = policy_->on_data_heard(beacon_states_[node], was_new, observed_position(node, now), now)) {
        emit_beacon(node, *cause);
    }
    return true;
}

void Simulator::process_overhearers(const Transmission& tx)
{
    for (const auto& [node, receptions] : tx.result.overheard) {
        const bool processed = handle_data_heard(node, tx.sender, tx.packet.piggyback, false);
        const EnergyOp op = processed ? EnergyOp::PromiscuousRecv : EnergyOp::PromiscuousDiscard;
        for (int i = 0; i < receptions; ++i) ledger_.charge(node, op, tx.packet.size);
    }
}

void Simulator::on_arrival(std::uint64_t ref)
{
    auto it = in_transit_.find(ref);
    Transmission tx = std::move(it->second);
    in_transit_.erase(it);

    if (tx.is_beacon) {
        for (NodeId receiver : tx.receivers) {
            tables_[receiver].upsert(tx.sender, tx.beacon.announced, EntrySource::Beacon);
        }
        return;
    }
    process_overhearers(tx);
    handle_data_heard(tx.receiver, tx.sender, tx.packet.piggyback, true);
    tx.packet.trace.push_back(tx.sender);
    forward(tx.receiver, std::move(tx.packet), false);
}

void Simulator::on_retransmit_timeout(std::uint64_t ref)
{
    auto it = in_transit_.find(ref);
    Transmission tx = std::move(it->second);
    in_transit_.erase(it);

    process_overhearers(tx);
    tables_[tx.sender].erase(tx.receiver);
    forward(tx.sender, std::move(tx.packet), true);
}

std::vector<NodeId> Simulator::true_neighbors(NodeId node, double t) const
{
    const RadioModel model = config_.radio_model();
    const Vec2 self = true_position(node, t);
    std::vector<NodeId> out;
    for (NodeId j = 0; j < nodes_.size(); ++j) {
        if (j != node && in_range(self, true_position(j, t), model)) out.push_back(j);
    }
    return out;
}

AccuracySample Simulator::sample_accuracy(double t) const
{
    const RadioModel model = config_.radio_model();
    std::vector<Vec2> positions(nodes_.size());
    for (NodeId i = 0; i < nodes_.size(); ++i) positions[i] = true_position(i, t);

    AccuracySample sample;
    sample.time = t;
    std::vector<NodeId> truth;
    for (NodeId i = 0; i < nodes_.size(); ++i) {
        truth.clear();
        for (NodeId j = 0; j < nodes_.size(); ++j) {
            if (j != i && in_range(positions[i], positions[j], model)) truth.push_back(j);
        }
        const NeighborDiscrepancy d = compare_with_truth(tables_[i], truth);
        sample.unknown_count += d.unknown;
        sample.false_count += d.stale;
        sample.true_neighbor_count += d.truth;
        sample.unknown_ratio += unknown_neighbor_ratio(tables_[i], truth);
        sample.false_ratio += false_neighbor_ratio(tables_[i], truth);
    }
    sample.unknown_ratio /= static_cast<double>(nodes_.size());
    sample.false_ratio /= static_cast<double>(nodes_.size());
    return sample;
}

void Simulator::on_sample(std::uint64_t index)
{
    accuracy_.push_back(sample_accuracy(queue_.now()));
    schedule_if_before_end(static_cast<double>(index + 1) * config_.metrics_sample_interval, EventKind::MetricsSample, 0,
                           index + 1);
}

MetricsReport Simulator::finish()
{
    if (finished_) throw std::logic_error("Simulator::finish called twice");
    process(config_.duration, false);
    finished_ = true;

    MetricsReport report;
    report.config_json = dump_scenario(config_);
    report.strategy = config_.strategy;
    report.seed = config_.seed;
    report.duration = config_.duration;
    report.node_count = config_.node_count;
    for (const BeaconState& state : beacon_states_) {
        report.node_beacons.push_back(state.counts);
        report.beacons += state.counts;
    }
    report.accuracy = accuracy_;
    report.flows = flow_stats_;
    for (const auto& [ref, tx] : in_transit_) {
        if (!tx.is_beacon) ++report.flows[tx.packet.flow].in_flight;
    }
    report.energy = ledger_;
    report.forwarding_ops = forwarding_ops_;
    report.unicast_attempts = unicast_attempts_;
    report.failed_transmissions = failed_transmissions_;

    report.mobility_hash = kFnvOffset;
    for (std::uint64_t h : mobility_hashes_) mix(report.mobility_hash, h);
    report.traffic_hash = kFnvOffset;
    for (const Flow& flow : flows_) {
        mix(report.traffic_hash, std::uint64_t{flow.spec.source});
        mix(report.traffic_hash, std::uint64_t{flow.spec.destination});
        mix(report.traffic_hash, flow.hash);
    }
    return report;
}

MetricsReport run(const ScenarioConfig& config)
{
    Simulator sim(config);
    return sim.finish();
}

}  // namespace apu
