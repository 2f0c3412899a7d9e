#include "apu/mobility.hpp"

#include <limits>
#include <stdexcept>
#include <string>

namespace apu {

Vec2 predict_position(const KinematicSnapshot& snapshot, double now)
{
    if (now < snapshot.timestamp) {
        throw std::domain_error("prediction requested at t=" + std::to_string(now) +
                                " before snapshot time " + std::to_string(snapshot.timestamp));
    }
    const double elapsed = now - snapshot.timestamp;
    return {snapshot.position.x + elapsed * snapshot.velocity.x, snapshot.position.y + elapsed * snapshot.velocity.y};
}

namespace {

void start_leg(NodeKinematics& node, double t, const MotionParams& params, Rng& rng)
{
    node.pause_until.reset();
    node.velocity = {};
    node.leg_origin = node.position;
    node.leg_start = t;

    switch (params.model) {
    case MobilityModel::Static:
        node.halted = true;
        node.speed = 0.0;
        return;
    case MobilityModel::RandomWaypoint:
        node.waypoint = {uniform(rng, 0.0, params.area.width), uniform(rng, 0.0, params.area.height)};
        node.speed = uniform(rng, params.min_speed, params.max_speed);
        node.leg_pause = params.pause_time;
        break;
    case MobilityModel::Scripted:
        if (node.next_script_leg >= params.script.size()) {
            node.halted = true;
            node.speed = 0.0;
            return;
        }
        {
            const ScriptedLeg& leg = params.script[node.next_script_leg++];
            node.waypoint = leg.target;
            node.speed = leg.speed;
            node.leg_pause = leg.pause;
        }
        break;
    }

    const Vec2 delta = node.waypoint - node.position;
    const double length = delta.norm();
    if (length > 0.0 && node.speed > 0.0) node.velocity = delta * (node.speed / length);
}

void arrive(NodeKinematics& node, double t, const MotionParams& params, Rng& rng)
{
    node.position = node.waypoint;
    node.velocity = {};
    node.leg_origin = node.position;
    node.leg_start = t;
    if (node.leg_pause > 0.0) {
        node.pause_until = t + node.leg_pause;
        return;
    }
    start_leg(node, t, params, rng);
}

}  // namespace

NodeKinematics place(Vec2 start, const MotionParams& params, Rng& rng)
{
    NodeKinematics node;
    node.position = start;
    node.waypoint = start;
    start_leg(node, 0.0, params, rng);
    return node;
}

double next_change_time(const NodeKinematics& node)
{
    if (node.halted) return std::numeric_limits<double>::infinity();
    if (node.pause_until) return *node.pause_until;
    if (node.speed <= 0.0) return node.leg_start;
    return node.leg_start + distance(node.leg_origin, node.waypoint) / node.speed;
}

Vec2 position_at(const NodeKinematics& node, double t, const Area& area)
{
    if (!node.moving()) return node.position;
    return area.clamp(node.leg_origin + (t - node.leg_start) * node.velocity);
}

KinematicSnapshot snapshot_at(const NodeKinematics& node, double t, const Area& area)
{
    return {position_at(node, t, area), node.moving() ? node.velocity : Vec2{}, t};
}

NodeKinematics advance(NodeKinematics node, double dt, const MotionParams& params, Rng& rng)
{
    if (dt < 0.0) throw std::domain_error("advance: negative dt " + std::to_string(dt));
    const double target = node.time + dt;
    for (double change = next_change_time(node); change <= target; change = next_change_time(node)) {
        if (node.pause_until) {
            start_leg(node, change, params, rng);
        } else {
            arrive(node, change, params, rng);
        }
        node.time = change;
    }
    node.position = position_at(node, target, params.area);
    node.time = target;
    return node;
}

}  // namespace apu
