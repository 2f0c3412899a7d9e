#pragma once

#include "apu/geometry.hpp"
#include "apu/random.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace apu {

/// What a neighbor knows about a node: announced position and velocity at `timestamp`.
struct KinematicSnapshot {
    Vec2 position;
    Vec2 velocity;
    double timestamp = 0.0;

    friend bool operator==(const KinematicSnapshot&, const KinematicSnapshot&) = default;
};

/// Linear dead reckoning from the last announcement:
///   x' = x + (now - t_last) * vx,  y' = y + (now - t_last) * vy.
/// Throws std::domain_error when `now` precedes the snapshot.
Vec2 predict_position(const KinematicSnapshot& snapshot, double now);

enum class MobilityModel { Static, RandomWaypoint, Scripted };

struct ScriptedLeg {
    Vec2 target;
    double speed = 0.0;
    double pause = 0.0;  // dwell time after reaching `target`
};

struct MotionParams {
    Area area;
    MobilityModel model = MobilityModel::Static;
    double min_speed = 1.0;
    double max_speed = 1.0;
    double pause_time = 0.0;
    std::vector<ScriptedLeg> script;  // Scripted only
};

/// Node motion state. While moving, the position at time t is
/// `leg_origin + (t - leg_start) * velocity`, evaluated in closed form so that
/// straight-line prediction from any snapshot on the leg is exact.
struct NodeKinematics {
    double time = 0.0;
    Vec2 position;
    Vec2 velocity;
    Vec2 waypoint;
    double speed = 0.0;
    std::optional<double> pause_until;

    Vec2 leg_origin;
    double leg_start = 0.0;
    double leg_pause = 0.0;
    std::size_t next_script_leg = 0;
    bool halted = false;

    bool moving() const { return !halted && !pause_until; }
};

/// Node placed at `start` at t=0 with its first leg already drawn.
NodeKinematics place(Vec2 start, const MotionParams& params, Rng& rng);

/// Advances by `dt`, processing every waypoint arrival and pause expiry on the way.
/// dt == 0 is the identity. Throws std::domain_error on negative dt.
NodeKinematics advance(NodeKinematics node, double dt, const MotionParams& params, Rng& rng);

/// Position at t, valid for t between `node.time` and `next_change_time(node)`.
Vec2 position_at(const NodeKinematics& node, double t, const Area& area);

/// Time of the next waypoint arrival or pause expiry; +inf for halted nodes.
double next_change_time(const NodeKinematics& node);

KinematicSnapshot snapshot_at(const NodeKinematics& node, double t, const Area& area);

}  // namespace apu
