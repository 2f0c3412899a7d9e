#include "apu/routing.hpp"

namespace apu {

std::optional<NodeId> select_next_hop(const NeighborTable& table, Vec2 self, Vec2 destination, double now)
{
    std::optional<NodeId> best;
    double best_distance = distance(self, destination);
    // Ascending id iteration plus strict '<' keeps the lowest id on ties.
    for (const auto& [id, entry] : table) {
        const double d = distance(predict_position(entry.snapshot, now), destination);
        if (d < best_distance) {
            best_distance = d;
            best = id;
        }
    }
    return best;
}

}  // namespace apu
