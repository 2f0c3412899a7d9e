#pragma once

#include "apu/geometry.hpp"
#include "apu/random.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace apu {

enum class RadioKind { UnitDisk, LossyDisk };

struct RadioModel {
    RadioKind kind = RadioKind::UnitDisk;
    double range = 250.0;
    double loss_probability = 0.0;  // LossyDisk only
};

/// Geometric reachability: closed ball of radius `model.range`.
bool in_range(Vec2 p, Vec2 q, const RadioModel& model);

enum class EnergyOp : std::uint8_t {
    P2PSend,
    BroadcastSend,
    P2PRecv,
    BroadcastRecv,
    PromiscuousRecv,
    PromiscuousDiscard,
};

inline constexpr std::size_t kEnergyOpCount = 6;
inline constexpr std::array<EnergyOp, kEnergyOpCount> kAllEnergyOps = {
    EnergyOp::P2PSend,         EnergyOp::BroadcastSend,  EnergyOp::P2PRecv,
    EnergyOp::BroadcastRecv,   EnergyOp::PromiscuousRecv, EnergyOp::PromiscuousDiscard,
};

std::string_view to_string(EnergyOp op);
/// Inverse of to_string; throws std::invalid_argument for unknown names.
EnergyOp energy_op_from_string(std::string_view name);

/// Per-operation cost in uW*s: slope * size_bytes + fixed.
///
///   p2p send            0.48 * size + 431
///   broadcast send      2.1  * size + 272
///   p2p recv            0.12 * size + 316
///   broadcast recv      0.26 * size + 50
///   promiscuous recv    0.12 * size + 83
///   promiscuous discard 0.11 * size + 54
double energy_cost(EnergyOp op, std::size_t size_bytes);

/// Per-node, per-class energy accumulators plus event counts.
class EnergyLedger {
public:
    EnergyLedger() = default;
    explicit EnergyLedger(std::size_t node_count);

    void charge(NodeId node, EnergyOp op, std::size_t size_bytes);

    double energy(NodeId node, EnergyOp op) const { return at(node).energy[index(op)]; }
    std::uint64_t events(NodeId node, EnergyOp op) const { return at(node).events[index(op)]; }
    double node_total(NodeId node) const;
    double class_total(EnergyOp op) const;
    std::uint64_t class_events(EnergyOp op) const;
    double total() const;
    std::size_t node_count() const { return nodes_.size(); }

private:
    struct Accounts {
        std::array<double, kEnergyOpCount> energy{};
        std::array<std::uint64_t, kEnergyOpCount> events{};
    };

    static std::size_t index(EnergyOp op) { return static_cast<std::size_t>(op); }
    const Accounts& at(NodeId node) const;

    std::vector<Accounts> nodes_;
};

struct LocalizationErrorModel {
    double sigma = 0.0;  // per-axis standard deviation, meters
};

/// True position plus independent zero-mean Gaussian noise on each axis.
Vec2 observed_position(Vec2 true_position, const LocalizationErrorModel& model, Rng& rng);

enum class UnicastOutcome { Delivered, FailedAfterRetries };

struct UnicastResult {
    UnicastOutcome outcome = UnicastOutcome::FailedAfterRetries;
    int attempts = 0;
    /// Every in-range node other than sender and addressee, with the number of
    /// attempts it actually received (>= 1).
    std::vector<std::pair<NodeId, int>> overheard;
};

/// Reachability and energy bookkeeping over a frozen set of node positions.
/// Loss draws are made in ascending node id order.
class Radio {
public:
    Radio(RadioModel model, Rng& loss_rng, EnergyLedger& ledger);

    const RadioModel& model() const { return model_; }

    /// Receivers of a broadcast from `sender`. Charges one broadcast send and one
    /// broadcast receive per receiver.
    std::vector<NodeId> deliver_broadcast(NodeId sender, std::span<const Vec2> positions, std::size_t size_bytes);

    /// Up to `retry_limit` attempts, each charged as a p2p send. The addressee is
    /// charged a p2p receive on success. Overhearers are reported but not charged:
    /// whether they process or discard is the caller's decision.
    UnicastResult send_unicast(NodeId sender, NodeId receiver, std::span<const Vec2> positions,
                               std::size_t size_bytes, int retry_limit);

private:
    bool receives(Vec2 from, Vec2 to);

    RadioModel model_;
    Rng* loss_rng_;
    EnergyLedger* ledger_;
};

}  // namespace apu
