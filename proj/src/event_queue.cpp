#include "apu/event_queue.hpp"

#include <limits>
#include <string>

namespace apu {

const char* to_string(EventKind kind)
{
    switch (kind) {
    case EventKind::NodeTick: return "node-tick";
    case EventKind::BeaconEmit: return "beacon-emit";
    case EventKind::PacketArrival: return "packet-arrival";
    case EventKind::PacketGeneration: return "packet-generation";
    case EventKind::MetricsSample: return "metrics-sample";
    case EventKind::WaypointChange: return "waypoint-change";
    case EventKind::RetransmitTimeout: return "retransmit-timeout";
    }
    return "unknown";
}

EventHandle EventQueue::schedule(Event event)
{
    if (!(event.fire_time >= now_)) {
        throw ScheduleError("event '" + std::string(to_string(event.kind)) + "' scheduled at t=" +
                            std::to_string(event.fire_time) + " before clock t=" + std::to_string(now_));
    }
    event.sequence = next_sequence_++;
    live_.insert(event.sequence);
    heap_.push(event);
    return EventHandle(event.sequence);
}

EventHandle EventQueue::schedule(double fire_time, EventKind kind, std::uint32_t node, std::uint64_t ref)
{
    return schedule(Event{fire_time, 0, kind, node, ref});
}

bool EventQueue::cancel(EventHandle handle)
{
    if (!handle.valid() || live_.erase(handle.sequence()) == 0) return false;
    cancelled_.insert(handle.sequence());
    return true;
}

void EventQueue::drop_cancelled()
{
    while (!heap_.empty()) {
        auto it = cancelled_.find(heap_.top().sequence);
        if (it == cancelled_.end()) return;
        cancelled_.erase(it);
        heap_.pop();
    }
}

bool EventQueue::empty()
{
    drop_cancelled();
    return heap_.empty();
}

double EventQueue::next_time()
{
    drop_cancelled();
    return heap_.empty() ? std::numeric_limits<double>::infinity() : heap_.top().fire_time;
}

Event EventQueue::pop()
{
    drop_cancelled();
    if (heap_.empty()) throw std::logic_error("pop from empty event queue");
    Event event = heap_.top();
    heap_.pop();
    live_.erase(event.sequence);
    now_ = event.fire_time;
    return event;
}

}  // namespace apu
