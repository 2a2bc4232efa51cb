// Topology assembly and packet forwarding: per-flow access links into router
// R1, the RED-managed R1->R2 bottleneck, receivers behind R2, and a lossless
// delay-only reverse path for acks.
//
// A run is a pure function of (scenario, seed): all randomness comes from
// named substreams of the scenario seed (one per flow for start stagger and
// access jitter, one for the AQM draws), so reruns are byte-identical.
#ifndef REDSIM_NETWORK_HPP
#define REDSIM_NETWORK_HPP

#include <cstdint>
#include <deque>
#include <memory>
#include <vector>

#include "redsim/event_queue.hpp"
#include "redsim/metrics.hpp"
#include "redsim/random.hpp"
#include "redsim/red.hpp"
#include "redsim/scenario.hpp"
#include "redsim/tcp.hpp"

namespace redsim {

// Point-to-point FIFO link: serialization at `rate` plus fixed propagation.
struct Link {
    double rate = 0.0;       // bits/s
    double prop_delay = 0.0; // s
    SimTime busy_until = 0.0;

    double serialization(double wire_bytes) const { return wire_bytes * 8.0 / rate; }

    // Time the packet finishes arriving at the far end if offered at `now`.
    SimTime offer(SimTime now, double wire_bytes) {
        const SimTime start = std::max(now, busy_until);
        busy_until = start + serialization(wire_bytes);
        return busy_until + prop_delay;
    }
};

struct RunResult {
    Scenario scenario; // resolved copy
    std::vector<FlowLedger> flows;
    std::vector<GroupStats> groups; // scenario group order
    std::vector<QueueTraceSample> queue_trace;
    std::uint64_t events_dispatched = 0;
    SimTime drained_at = 0.0;
};

// One simulation instance; single-threaded, no state shared across instances.
class Simulation {
  public:
    explicit Simulation(const Scenario& scenario);

    // Runs sources until duration, drains in-flight traffic, audits packet
    // conservation, and computes the per-group window statistics.
    RunResult run();

    // Drain safety net: a run whose retransmissions cannot settle within
    // this many extra seconds fails loudly instead of looping.
    static constexpr double kDrainCap = 600.0;
    static constexpr double kStartStagger = 1.0; // flows start in [0, 1) s

  private:
    struct Flow {
        FlowId id = 0;
        int group_id = 0;
        double mtu = 0.0;
        SimTime start_at = 0.0;
        Link access; // sender-side dedicated link, jitter as propagation
        std::unique_ptr<TcpSender> sender;
        std::unique_ptr<TcpReceiver> receiver;
        FlowLedger ledger;
    };

    void transmit_from_sender(Flow& flow, const Segment& seg);
    void bottleneck_enqueue(const Segment& seg);
    void start_service();
    void complete_service();
    void deliver_data(const Segment& seg);
    void sample_queue_trace();
    bool in_window() const {
        return engine_.now() >= scenario_.warmup && engine_.now() <= scenario_.duration;
    }

    Scenario scenario_;
    EventQueue engine_;
    RandomStream aqm_stream_;
    RedAqm red_;

    std::vector<Flow> flows_;
    std::deque<Segment> fifo_; // waiting + in-service packets at the bottleneck
    double bytes_queued_ = 0.0;
    bool serving_ = false;
    SimTime idle_since_ = 0.0;        // when the bottleneck queue last went empty
    double typical_tx_time_ = 0.0;    // M * 8 / rate, scales the idle-gap decay
    double reverse_delay_base_ = 0.0; // bottleneck propagation; plus per-flow jitter

    std::vector<QueueTraceSample> trace_;
};

} // namespace redsim

#endif
