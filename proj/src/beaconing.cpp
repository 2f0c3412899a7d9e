#include "apu/beaconing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace apu {

std::string_view to_string(BeaconCause cause)
{
    switch (cause) {
    case BeaconCause::Initial: return "initial";
    case BeaconCause::Periodic: return "periodic";
    case BeaconCause::Distance: return "distance";
    case BeaconCause::Speed: return "speed";
    case BeaconCause::MobilityPrediction: return "mp";
    case BeaconCause::OnDemand: return "odl";
    }
    return "unknown";
}

std::uint64_t BeaconCounts::total() const
{
    return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

BeaconCounts& BeaconCounts::operator+=(const BeaconCounts& other)
{
    for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
    return *this;
}

void BeaconState::record(const Beacon& beacon)
{
    last_beacon = beacon.announced;
    odometer = 0.0;
    counts.add(beacon.cause);
}

MpDecision mp_check(const BeaconState& state, Vec2 observed_now, double now, double acceptable_error)
{
    if (!state.last_beacon) return {};
    const double deviation = distance(predict_position(*state.last_beacon, now), observed_now);
    return {deviation > acceptable_error, deviation};
}

bool odl_check(NeighborTable& table, NodeId transmitter, const KinematicSnapshot& piggyback)
{
    return table.upsert(transmitter, piggyback, EntrySource::Piggyback);
}

double pb_next(double interval, double now)
{
    // Grid index computed from scratch each time so long runs do not drift.
    const double slot = std::floor(now / interval + 1e-9);
    return (slot + 1.0) * interval;
}

bool db_check(BeaconState& state, Vec2 position_now, double threshold)
{
    if (state.last_tick_position) state.odometer += distance(*state.last_tick_position, position_now);
    state.last_tick_position = position_now;
    return state.odometer + 1e-9 >= threshold;
}

double sb_interval(double speed, const SpeedBeaconing& params)
{
    if (speed <= params.speed_low) return params.interval_max;
    if (speed >= params.speed_high) return params.interval_min;
    const double fraction = (speed - params.speed_low) / (params.speed_high - params.speed_low);
    return params.interval_max + fraction * (params.interval_min - params.interval_max);
}

double sb_next(double speed, double last_beacon_time, const SpeedBeaconing& params)
{
    return last_beacon_time + sb_interval(speed, params);
}

std::optional<double> PeriodicBeaconing::next_scheduled(const BeaconState& state, double now, double) const
{
    return pb_next(interval_, state.last_beacon ? state.last_beacon->timestamp : now);
}

DistanceBeaconing::DistanceBeaconing(double threshold, double nominal_speed, double timeout_factor)
    : threshold_(threshold)
{
    if (nominal_speed > 0.0) timeout_ = timeout_factor * threshold / nominal_speed;
}

std::optional<BeaconCause> DistanceBeaconing::on_tick(BeaconState& state, Vec2, Vec2 true_position, double) const
{
    if (db_check(state, true_position, threshold_)) return BeaconCause::Distance;
    return std::nullopt;
}

std::optional<double> SpeedBeaconingPolicy::next_scheduled(const BeaconState& state, double now, double speed) const
{
    const double last = state.last_beacon ? state.last_beacon->timestamp : now;
    return std::max(now, sb_next(speed, last, params_));
}

std::optional<BeaconCause> AdaptivePositionUpdate::on_tick(BeaconState& state, Vec2 observed, Vec2, double now) const
{
    if (mp_check(state, observed, now, acceptable_error_).fire) return BeaconCause::MobilityPrediction;
    return std::nullopt;
}

std::optional<BeaconCause> AdaptivePositionUpdate::on_data_heard(const BeaconState& state, bool was_new,
                                                                 Vec2 observed, double now) const
{
    if (!was_new) return std::nullopt;
    if (mp_check(state, observed, now, acceptable_error_).fire) return BeaconCause::MobilityPrediction;
    return BeaconCause::OnDemand;
}

std::unique_ptr<BeaconPolicy> make_policy(const ScenarioConfig& config)
{
    const StrategyParams& p = config.params;
    switch (config.strategy) {
    case Strategy::Periodic:
        return std::make_unique<PeriodicBeaconing>(p.periodic_interval, p.timeout_factor);
    case Strategy::Distance: {
        double nominal_speed = 0.0;
        if (config.mobility == MobilityModel::RandomWaypoint) nominal_speed = 0.5 * (config.min_speed + config.max_speed);
        return std::make_unique<DistanceBeaconing>(p.distance_threshold, nominal_speed, p.timeout_factor);
    }
    case Strategy::Speed:
        return std::make_unique<SpeedBeaconingPolicy>(
            SpeedBeaconing{p.speed_interval_max, p.speed_interval_min, p.speed_low, config.speed_high()},
            p.timeout_factor);
    case Strategy::Adaptive:
        return std::make_unique<AdaptivePositionUpdate>(config.acceptable_error());
    }
    throw ConfigError("strategy.name", "unsupported strategy");
}

}  // namespace apu
