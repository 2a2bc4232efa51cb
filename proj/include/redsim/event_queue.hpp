// Deterministic discrete-event engine: simulated clock plus an ordered
// event queue. Events fire in (time, insertion sequence) order, so runs
// are reproducible regardless of how callbacks interleave their scheduling.
#ifndef REDSIM_EVENT_QUEUE_HPP
#define REDSIM_EVENT_QUEUE_HPP

#include <cstdint>
#include <functional>
#include <vector>

namespace redsim {

// Simulated time in seconds.
using SimTime = double;

class EventQueue {
  public:
    using Action = std::function<void()>;

    SimTime now() const { return now_; }
    bool empty() const { return heap_.empty(); }
    std::size_t pending() const { return heap_.size(); }

    // Scheduling in the past is a programming error and throws.
    void schedule_at(SimTime fire_at, Action action);
    void schedule_in(SimTime delay, Action action) { schedule_at(now_ + delay, std::move(action)); }

    // Dispatches every event with fire_at <= t_end (boundary inclusive),
    // then advances the clock to t_end. Returns the dispatch count.
    std::uint64_t run_until(SimTime t_end);

    // Dispatches until the queue is empty or the clock would pass hard_cap.
    // Returns the dispatch count; the clock is left at the last fire time
    // (or hard_cap if events remain beyond it).
    std::uint64_t run_all(SimTime hard_cap);

  private:
    struct Entry {
        SimTime fire_at;
        std::uint64_t sequence;
        Action action;
    };
    // Min-heap on (fire_at, sequence): ties dispatch in insertion order.
    static bool later(const Entry& a, const Entry& b) {
        if (a.fire_at != b.fire_at) return a.fire_at > b.fire_at;
        return a.sequence > b.sequence;
    }
    Entry pop_next();

    std::vector<Entry> heap_;
    SimTime now_ = 0.0;
    std::uint64_t next_sequence_ = 0;
};

} // namespace redsim

#endif
