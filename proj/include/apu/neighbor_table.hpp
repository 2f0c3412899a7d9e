#pragma once

#include "apu/geometry.hpp"
#include "apu/mobility.hpp"

#include <cstddef>
#include <map>
#include <span>
#include <vector>

namespace apu {

enum class EntrySource { Beacon, Piggyback };

struct NeighborEntry {
    NodeId id = 0;
    KinematicSnapshot snapshot;
    EntrySource source = EntrySource::Beacon;
};

/// One node's view of its one-hop neighborhood, keyed by neighbor id.
/// Iteration is in ascending id order.
class NeighborTable {
public:
    explicit NeighborTable(NodeId owner = 0) : owner_(owner) {}

    NodeId owner() const { return owner_; }

    /// Inserts or refreshes the entry for `sender`; returns true if it was previously
    /// unknown. A snapshot older than the stored one leaves the entry as is.
    /// Throws std::invalid_argument when `sender` is the owner.
    bool upsert(NodeId sender, const KinematicSnapshot& snapshot, EntrySource source);

    bool contains(NodeId id) const { return entries_.contains(id); }
    const NeighborEntry* find(NodeId id) const;
    bool erase(NodeId id) { return entries_.erase(id) > 0; }
    void clear() { entries_.clear(); }

    /// Throws std::out_of_range when there is no entry for `id`.
    Vec2 predicted_position(NodeId id, double now) const;

    /// Drops every entry whose predicted position lies farther than `range` from `self`.
    std::vector<NodeId> purge_out_of_range(Vec2 self, double now, double range);
    /// Drops every entry not refreshed within `max_age` seconds.
    std::vector<NodeId> purge_stale(double now, double max_age);

    std::vector<NodeId> ids() const;
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    auto begin() const { return entries_.begin(); }
    auto end() const { return entries_.end(); }

private:
    NodeId owner_;
    std::map<NodeId, NeighborEntry> entries_;
};

struct NeighborDiscrepancy {
    std::size_t unknown = 0;  // in range but missing from the table
    std::size_t stale = 0;    // listed but out of range
    std::size_t truth = 0;    // true neighbor count
};

/// `truth` must be sorted ascending.
NeighborDiscrepancy compare_with_truth(const NeighborTable& table, std::span<const NodeId> truth);

/// |truth \ table| / |truth|, 0 when truth is empty.
double unknown_neighbor_ratio(const NeighborTable& table, std::span<const NodeId> truth);

/// |table \ truth| / |truth|, 0 when truth is empty, clamped to 1.
double false_neighbor_ratio(const NeighborTable& table, std::span<const NodeId> truth);

}  // namespace apu
