#pragma once

#include "apu/geometry.hpp"
#include "apu/mobility.hpp"
#include "apu/neighbor_table.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace apu {

struct DataPacket {
    std::uint64_t id = 0;
    std::uint32_t flow = 0;
    NodeId source = 0;
    NodeId destination = 0;
    Vec2 destination_position;  // location-service answer at creation time
    std::uint32_t size = 512;
    double created = 0.0;
    NodeId piggyback_sender = 0;
    KinematicSnapshot piggyback;  // refreshed by every transmitter
    std::vector<NodeId> trace;    // nodes that successfully handed the packet on

    std::size_t hop_count() const { return trace.size(); }
};

enum class ForwardOutcome { Forwarded, Delivered, DroppedVoid, DroppedRetries };

/// Greedy geographic choice: among neighbors whose predicted position is strictly
/// closer to `destination` than `self`, the closest one; ties go to the lower id.
/// nullopt means a local maximum (void).
std::optional<NodeId> select_next_hop(const NeighborTable& table, Vec2 self, Vec2 destination, double now);

}  // namespace apu
