#include "apu/radio.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace apu {

bool in_range(Vec2 p, Vec2 q, const RadioModel& model)
{
    return distance(p, q) <= model.range;
}

std::string_view to_string(EnergyOp op)
{
    switch (op) {
    case EnergyOp::P2PSend: return "p2p_send";
    case EnergyOp::BroadcastSend: return "broadcast_send";
    case EnergyOp::P2PRecv: return "p2p_recv";
    case EnergyOp::BroadcastRecv: return "broadcast_recv";
    case EnergyOp::PromiscuousRecv: return "promiscuous_recv";
    case EnergyOp::PromiscuousDiscard: return "promiscuous_discard";
    }
    return "unknown";
}

EnergyOp energy_op_from_string(std::string_view name)
{
    for (EnergyOp op : kAllEnergyOps) {
        if (to_string(op) == name) return op;
    }
    throw std::invalid_argument("unknown energy operation class '" + std::string(name) + "'");
}

double energy_cost(EnergyOp op, std::size_t size_bytes)
{
    const double size = static_cast<double>(size_bytes);
    switch (op) {
    case EnergyOp::P2PSend: return 0.48 * size + 431.0;
    case EnergyOp::BroadcastSend: return 2.1 * size + 272.0;
    case EnergyOp::P2PRecv: return 0.12 * size + 316.0;
    case EnergyOp::BroadcastRecv: return 0.26 * size + 50.0;
    case EnergyOp::PromiscuousRecv: return 0.12 * size + 83.0;
    case EnergyOp::PromiscuousDiscard: return 0.11 * size + 54.0;
    }
    throw std::invalid_argument("unknown energy operation class " + std::to_string(static_cast<int>(op)));
}

EnergyLedger::EnergyLedger(std::size_t node_count) : nodes_(node_count) {}

const EnergyLedger::Accounts& EnergyLedger::at(NodeId node) const
{
    if (node >= nodes_.size()) throw std::out_of_range("energy ledger: unknown node " + std::to_string(node));
    return nodes_[node];
}

void EnergyLedger::charge(NodeId node, EnergyOp op, std::size_t size_bytes)
{
    if (node >= nodes_.size()) throw std::out_of_range("energy ledger: unknown node " + std::to_string(node));
    Accounts& accounts = nodes_[node];
    accounts.energy[index(op)] += energy_cost(op, size_bytes);
    accounts.events[index(op)] += 1;
}

double EnergyLedger::node_total(NodeId node) const
{
    const Accounts& accounts = at(node);
    return std::accumulate(accounts.energy.begin(), accounts.energy.end(), 0.0);
}

double EnergyLedger::class_total(EnergyOp op) const
{
    double sum = 0.0;
    for (const Accounts& accounts : nodes_) sum += accounts.energy[index(op)];
    return sum;
}

std::uint64_t EnergyLedger::class_events(EnergyOp op) const
{
    std::uint64_t sum = 0;
    for (const Accounts& accounts : nodes_) sum += accounts.events[index(op)];
    return sum;
}

double EnergyLedger::total() const
{
    double sum = 0.0;
    for (NodeId node = 0; node < nodes_.size(); ++node) sum += node_total(node);
    return sum;
}

Vec2 observed_position(Vec2 true_position, const LocalizationErrorModel& model, Rng& rng)
{
    if (model.sigma <= 0.0) return true_position;
    std::normal_distribution<double> noise(0.0, model.sigma);
    const double dx = noise(rng);
    const double dy = noise(rng);
    return {true_position.x + dx, true_position.y + dy};
}

Radio::Radio(RadioModel model, Rng& loss_rng, EnergyLedger& ledger)
    : model_(model), loss_rng_(&loss_rng), ledger_(&ledger)
{
}

bool Radio::receives(Vec2 from, Vec2 to)
{
    if (!in_range(from, to, model_)) return false;
    if (model_.kind == RadioKind::UnitDisk) return true;
    return !bernoulli(*loss_rng_, model_.loss_probability);
}

std::vector<NodeId> Radio::deliver_broadcast(NodeId sender, std::span<const Vec2> positions, std::size_t size_bytes)
{
    ledger_->charge(sender, EnergyOp::BroadcastSend, size_bytes);
    std::vector<NodeId> receivers;
    for (NodeId node = 0; node < positions.size(); ++node) {
        if (node == sender) continue;
        if (receives(positions[sender], positions[node])) {
            ledger_->charge(node, EnergyOp::BroadcastRecv, size_bytes);
            receivers.push_back(node);
        }
    }
    return receivers;
}

UnicastResult Radio::send_unicast(NodeId sender, NodeId receiver, std::span<const Vec2> positions,
                                  std::size_t size_bytes, int retry_limit)
{
    UnicastResult result;
    std::vector<int> heard(positions.size(), 0);
    for (int attempt = 1; attempt <= retry_limit; ++attempt) {
        ledger_->charge(sender, EnergyOp::P2PSend, size_bytes);
        result.attempts = attempt;
        bool delivered = false;
        for (NodeId node = 0; node < positions.size(); ++node) {
            if (node == sender) continue;
            if (!receives(positions[sender], positions[node])) continue;
            if (node == receiver) {
                delivered = true;
            } else {
                ++heard[node];
            }
        }
        if (delivered) {
            ledger_->charge(receiver, EnergyOp::P2PRecv, size_bytes);
            result.outcome = UnicastOutcome::Delivered;
            break;
        }
    }
    for (NodeId node = 0; node < heard.size(); ++node) {
        if (heard[node] > 0) result.overheard.emplace_back(node, heard[node]);
    }
    return result;
}

}  // namespace apu
