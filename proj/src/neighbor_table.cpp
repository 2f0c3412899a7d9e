#include "apu/neighbor_table.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace apu {

bool NeighborTable::upsert(NodeId sender, const KinematicSnapshot& snapshot, EntrySource source)
{
    if (sender == owner_) {
        throw std::invalid_argument("node " + std::to_string(owner_) + " cannot list itself as a neighbor");
    }
    auto [it, inserted] = entries_.try_emplace(sender, NeighborEntry{sender, snapshot, source});
    if (!inserted && snapshot.timestamp >= it->second.snapshot.timestamp) {
        it->second.snapshot = snapshot;
        it->second.source = source;
    }
    return inserted;
}

const NeighborEntry* NeighborTable::find(NodeId id) const
{
    auto it = entries_.find(id);
    return it == entries_.end() ? nullptr : &it->second;
}

Vec2 NeighborTable::predicted_position(NodeId id, double now) const
{
    const NeighborEntry* entry = find(id);
    if (entry == nullptr) {
        throw std::out_of_range("node " + std::to_string(owner_) + " has no entry for neighbor " + std::to_string(id));
    }
    return predict_position(entry->snapshot, now);
}

std::vector<NodeId> NeighborTable::purge_out_of_range(Vec2 self, double now, double range)
{
    std::vector<NodeId> removed;
    for (auto it = entries_.begin(); it != entries_.end();) {
        if (distance(predict_position(it->second.snapshot, now), self) > range) {
            removed.push_back(it->first);
            it = entries_.erase(it);
        } else {
            ++it;
        }
    }
    return removed;
}

std::vector<NodeId> NeighborTable::purge_stale(double now, double max_age)
{
    std::vector<NodeId> removed;
    for (auto it = entries_.begin(); it != entries_.end();) {
        if (now - it->second.snapshot.timestamp > max_age) {
            removed.push_back(it->first);
            it = entries_.erase(it);
        } else {
            ++it;
        }
    }
    return removed;
}

std::vector<NodeId> NeighborTable::ids() const
{
    std::vector<NodeId> out;
    out.reserve(entries_.size());
    for (const auto& [id, entry] : entries_) out.push_back(id);
    return out;
}

NeighborDiscrepancy compare_with_truth(const NeighborTable& table, std::span<const NodeId> truth)
{
    NeighborDiscrepancy result;
    result.truth = truth.size();
    auto listed = table.begin();
    auto actual = truth.begin();
    // Both sequences are ascending; walk them as a merge.
    while (listed != table.end() || actual != truth.end()) {
        if (actual == truth.end() || (listed != table.end() && listed->first < *actual)) {
            ++result.stale;
            ++listed;
        } else if (listed == table.end() || *actual < listed->first) {
            ++result.unknown;
            ++actual;
        } else {
            ++listed;
            ++actual;
        }
    }
    return result;
}

double unknown_neighbor_ratio(const NeighborTable& table, std::span<const NodeId> truth)
{
    const NeighborDiscrepancy d = compare_with_truth(table, truth);
    return d.truth == 0 ? 0.0 : static_cast<double>(d.unknown) / static_cast<double>(d.truth);
}

double false_neighbor_ratio(const NeighborTable& table, std::span<const NodeId> truth)
{
    const NeighborDiscrepancy d = compare_with_truth(table, truth);
    return d.truth == 0 ? 0.0 : std::min(1.0, static_cast<double>(d.stale) / static_cast<double>(d.truth));
}

}  // namespace apu
