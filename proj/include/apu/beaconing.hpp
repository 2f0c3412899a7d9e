#pragma once

#include "apu/config.hpp"
#include "apu/geometry.hpp"
#include "apu/mobility.hpp"
#include "apu/neighbor_table.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>

namespace apu {

enum class BeaconCause : std::uint8_t { Initial, Periodic, Distance, Speed, MobilityPrediction, OnDemand };

inline constexpr std::size_t kBeaconCauseCount = 6;
inline constexpr std::array<BeaconCause, kBeaconCauseCount> kAllBeaconCauses = {
    BeaconCause::Initial, BeaconCause::Periodic,           BeaconCause::Distance,
    BeaconCause::Speed,   BeaconCause::MobilityPrediction, BeaconCause::OnDemand,
};

std::string_view to_string(BeaconCause cause);  // initial, periodic, distance, speed, mp, odl

struct Beacon {
    NodeId sender = 0;
    KinematicSnapshot announced;  // advertised (observed) position, velocity, emission time
    BeaconCause cause = BeaconCause::Initial;
    std::uint32_t size = 32;
};

class BeaconCounts {
public:
    void add(BeaconCause cause) { ++counts_[static_cast<std::size_t>(cause)]; }
    std::uint64_t operator[](BeaconCause cause) const { return counts_[static_cast<std::size_t>(cause)]; }
    std::uint64_t total() const;
    BeaconCounts& operator+=(const BeaconCounts& other);

private:
    std::array<std::uint64_t, kBeaconCauseCount> counts_{};
};

/// Per-node beaconing state.
struct BeaconState {
    std::optional<KinematicSnapshot> last_beacon;  // what neighbors currently predict from
    double odometer = 0.0;                         // path length since last own beacon
    std::optional<Vec2> last_tick_position;
    BeaconCounts counts;

    void record(const Beacon& beacon);
};

struct MpDecision {
    bool fire = false;
    double deviation = 0.0;
};

/// Mobility-prediction rule: fire when the node's own position deviates from
/// what neighbors extrapolate out of its last beacon by more than `acceptable_error`.
MpDecision mp_check(const BeaconState& state, Vec2 observed_now, double now, double acceptable_error);

/// On-demand learning rule. Upserts the transmitter from its piggybacked kinematics
/// and returns true iff it was not in the table, i.e. a response beacon is due.
bool odl_check(NeighborTable& table, NodeId transmitter, const KinematicSnapshot& piggyback);

/// Next beacon on the periodic grid 0, I, 2I, ... strictly after `now`.
double pb_next(double interval, double now);

/// Adds the path travelled since the previous tick to the odometer; true once it
/// reaches `threshold` (1e-9 m slack absorbs accumulated rounding).
bool db_check(BeaconState& state, Vec2 position_now, double threshold);

struct SpeedBeaconing {
    double interval_max = 5.0;
    double interval_min = 0.5;
    double speed_low = 0.0;
    double speed_high = 10.0;
};

/// Interval interpolated linearly from interval_max at speed_low down to
/// interval_min at speed_high.
double sb_interval(double speed, const SpeedBeaconing& params);
double sb_next(double speed, double last_beacon_time, const SpeedBeaconing& params);

/// One of PB, DB, SB, APU as seen by the simulator.
class BeaconPolicy {
public:
    virtual ~BeaconPolicy() = default;

    virtual Strategy strategy() const = 0;

    /// Self-check run every tick after neighbor purging.
    virtual std::optional<BeaconCause> on_tick(BeaconState& /*state*/, Vec2 /*observed*/, Vec2 /*true_position*/,
                                               double /*now*/) const
    {
        return std::nullopt;
    }

    /// Time of the next timer-driven beacon given the node's last one.
    virtual std::optional<double> next_scheduled(const BeaconState& /*state*/, double /*now*/, double /*speed*/) const
    {
        return std::nullopt;
    }
    virtual BeaconCause scheduled_cause() const { return BeaconCause::Periodic; }

    /// Whether overheard data from an unknown transmitter enters the table.
    virtual bool learns_from_overheard_data() const { return false; }

    /// Reaction to a data transmission from `transmitter`; `was_new` tells whether it
    /// was absent from the table before this packet.
    virtual std::optional<BeaconCause> on_data_heard(const BeaconState& /*state*/, bool /*was_new*/,
                                                     Vec2 /*observed*/, double /*now*/) const
    {
        return std::nullopt;
    }

    /// Entries older than this are dropped regardless of prediction.
    virtual std::optional<double> neighbor_timeout() const { return std::nullopt; }
};

class PeriodicBeaconing final : public BeaconPolicy {
public:
    PeriodicBeaconing(double interval, double timeout_factor) : interval_(interval), timeout_factor_(timeout_factor) {}
    Strategy strategy() const override { return Strategy::Periodic; }
    std::optional<double> next_scheduled(const BeaconState& state, double now, double speed) const override;
    std::optional<double> neighbor_timeout() const override { return timeout_factor_ * interval_; }

private:
    double interval_;
    double timeout_factor_;
};

class DistanceBeaconing final : public BeaconPolicy {
public:
    DistanceBeaconing(double threshold, double nominal_speed, double timeout_factor);
    Strategy strategy() const override { return Strategy::Distance; }
    std::optional<BeaconCause> on_tick(BeaconState& state, Vec2 observed, Vec2 true_position,
                                       double now) const override;
    std::optional<double> neighbor_timeout() const override { return timeout_; }

private:
    double threshold_;
    std::optional<double> timeout_;
};

class SpeedBeaconingPolicy final : public BeaconPolicy {
public:
    SpeedBeaconingPolicy(SpeedBeaconing params, double timeout_factor)
        : params_(params), timeout_factor_(timeout_factor)
    {
    }
    Strategy strategy() const override { return Strategy::Speed; }
    std::optional<double> next_scheduled(const BeaconState& state, double now, double speed) const override;
    BeaconCause scheduled_cause() const override { return BeaconCause::Speed; }
    std::optional<double> neighbor_timeout() const override { return timeout_factor_ * params_.interval_max; }

private:
    SpeedBeaconing params_;
    double timeout_factor_;
};

/// MP rule on every tick, ODL rule on data from new neighbors. When both fire at
/// the same instant the single beacon is attributed to MP.
class AdaptivePositionUpdate final : public BeaconPolicy {
public:
    explicit AdaptivePositionUpdate(double acceptable_error) : acceptable_error_(acceptable_error) {}
    Strategy strategy() const override { return Strategy::Adaptive; }
    double acceptable_error() const { return acceptable_error_; }
    std::optional<BeaconCause> on_tick(BeaconState& state, Vec2 observed, Vec2 true_position,
                                       double now) const override;
    bool learns_from_overheard_data() const override { return true; }
    std::optional<BeaconCause> on_data_heard(const BeaconState& state, bool was_new, Vec2 observed,
                                             double now) const override;

private:
    double acceptable_error_;
};

std::unique_ptr<BeaconPolicy> make_policy(const ScenarioConfig& config);

}  // namespace apu
