#include "redsim/event_queue.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace redsim {

void EventQueue::schedule_at(SimTime fire_at, Action action) {
    if (fire_at < now_) {
        throw std::logic_error("EventQueue: scheduling in the past (fire_at=" +
                               std::to_string(fire_at) + ", now=" + std::to_string(now_) + ")");
    }
    heap_.push_back(Entry{fire_at, next_sequence_++, std::move(action)});
    std::push_heap(heap_.begin(), heap_.end(), later);
}

EventQueue::Entry EventQueue::pop_next() {
    std::pop_heap(heap_.begin(), heap_.end(), later);
    Entry e = std::move(heap_.back());
    heap_.pop_back();
    return e;
}

std::uint64_t EventQueue::run_until(SimTime t_end) {
    std::uint64_t dispatched = 0;
    while (!heap_.empty() && heap_.front().fire_at <= t_end) {
        Entry e = pop_next();
        now_ = e.fire_at;
        e.action();
        ++dispatched;
    }
    now_ = t_end;
    return dispatched;
}

std::uint64_t EventQueue::run_all(SimTime hard_cap) {
    std::uint64_t dispatched = 0;
    while (!heap_.empty() && heap_.front().fire_at <= hard_cap) {
        Entry e = pop_next();
        now_ = e.fire_at;
        e.action();
        ++dispatched;
    }
    if (!heap_.empty()) now_ = hard_cap;
    return dispatched;
}

} // namespace redsim
