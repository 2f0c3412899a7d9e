#pragma once

#include <cstdint>
#include <queue>
#include <stdexcept>
#include <unordered_set>
#include <vector>

namespace apu {

enum class EventKind : std::uint8_t {
    NodeTick,
    BeaconEmit,
    PacketArrival,
    PacketGeneration,
    MetricsSample,
    WaypointChange,
    RetransmitTimeout,
};

const char* to_string(EventKind kind);

struct Event {
    double fire_time = 0.0;
    std::uint64_t sequence = 0;
    EventKind kind = EventKind::NodeTick;
    std::uint32_t node = 0;
    // Index into whatever side table the kind refers to (flow, transmission, ...).
    std::uint64_t ref = 0;
};

/// Raised when an event is scheduled before the current clock. Always an engine bug.
class ScheduleError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class EventHandle {
public:
    EventHandle() = default;
    explicit EventHandle(std::uint64_t sequence) : sequence_(sequence), valid_(true) {}

    bool valid() const { return valid_; }
    std::uint64_t sequence() const { return sequence_; }

private:
    std::uint64_t sequence_ = 0;
    bool valid_ = false;
};

/// Min-heap on (fire_time, sequence) with a monotone virtual clock and lazy cancellation.
class EventQueue {
public:
    double now() const { return now_; }

    /// `fire_time`, `kind`, `node` and `ref` are taken from `event`; the sequence is assigned here.
    EventHandle schedule(Event event);
    EventHandle schedule(double fire_time, EventKind kind, std::uint32_t node = 0, std::uint64_t ref = 0);

    /// Returns false if the event already fired or was cancelled.
    bool cancel(EventHandle handle);

    bool empty();
    /// Time of the next live event; +inf when empty.
    double next_time();
    /// Removes the next live event and advances the clock to its fire time.
    Event pop();

    std::size_t pending() const { return heap_.size() - cancelled_.size(); }

private:
    struct Later {
        bool operator()(const Event& a, const Event& b) const
        {
            if (a.fire_time != b.fire_time) return a.fire_time > b.fire_time;
            return a.sequence > b.sequence;
        }
    };

    void drop_cancelled();

    std::priority_queue<Event, std::vector<Event>, Later> heap_;
    std::unordered_set<std::uint64_t> cancelled_;
    std::unordered_set<std::uint64_t> live_;
    std::uint64_t next_sequence_ = 0;
    double now_ = 0.0;
};

}  // namespace apu
