#include "redsim/network.hpp"

#include <stdexcept>
#include <string>

namespace redsim {

Simulation::Simulation(const Scenario& scenario)
    : scenario_(scenario),
      aqm_stream_(RandomStream(scenario.seed).substream("aqm")),
      red_(scenario.variant, scenario.red) {
    scenario_.validate();

    RandomStream master(scenario_.seed);
    reverse_delay_base_ = scenario_.bottleneck_delay;

    FlowId next_id = 0;
    for (std::size_t g = 0; g < scenario_.groups.size(); ++g) {
        const GroupSpec& spec = scenario_.groups[g];
        for (int k = 0; k < spec.flow_count; ++k) {
            Flow flow;
            flow.id = next_id++;
            flow.group_id = static_cast<int>(g);
            flow.mtu = spec.mtu;

            RandomStream fs = master.substream("flow/" + std::to_string(flow.id));
            flow.start_at = fs.next_uniform() * kStartStagger;
            flow.access.rate = scenario_.access_rate;
            flow.access.prop_delay = fs.next_uniform() * scenario_.access_delay_jitter;

            flow.ledger.flow_id = flow.id;
            flow.ledger.group_id = flow.group_id;
            flows_.push_back(std::move(flow));
        }
    }
    // Senders and receivers wired after flows_ stops reallocating.
    for (Flow& flow : flows_) {
        Flow* fp = &flow;
        TcpSender::Hooks hooks;
        hooks.engine = &engine_;
        hooks.transmit = [this, fp](const Segment& seg) { transmit_from_sender(*fp, seg); };
        const double mss = flow.mtu - kTcpIpHeaderBytes;
        flow.sender = std::make_unique<TcpSender>(flow.id, mss, std::move(hooks));
        flow.receiver = std::make_unique<TcpReceiver>(flow.id);
    }
}

void Simulation::transmit_from_sender(Flow& flow, const Segment& seg) {
    // Dedicated access link: serialization plus the flow's jitter, FIFO.
    const SimTime at_router = flow.access.offer(engine_.now(), seg.wire_len);
    engine_.schedule_at(at_router, [this, seg] { bottleneck_enqueue(seg); });
}

void Simulation::bottleneck_enqueue(const Segment& seg) {
    Flow& flow = flows_[seg.flow_id];
    const bool windowed = in_window();
    flow.ledger.pkts_sent += 1;
    if (windowed) flow.ledger.win_arrivals += 1;

    const double u = aqm_stream_.next_uniform();
    const DropDecision decision = red_.on_arrival(seg.wire_len, bytes_queued_, u);
    if (decision.dropped()) {
        flow.ledger.pkts_dropped += 1;
        const bool forced = decision.outcome == DropOutcome::ForcedDrop;
        if (forced) flow.ledger.pkts_dropped_forced += 1;
        if (windowed) {
            flow.ledger.win_drops += 1;
            if (forced) flow.ledger.win_drops_forced += 1;
        }
        return;
    }
    fifo_.push_back(seg);
    bytes_queued_ += seg.wire_len;
    if (!serving_) start_service();
}

void Simulation::start_service() {
    serving_ = true;
    const double service = fifo_.front().wire_len * 8.0 / scenario_.bottleneck_rate;
    engine_.schedule_in(service, [this] { complete_service(); });
}

void Simulation::complete_service() {
    Segment seg = fifo_.front();
    fifo_.pop_front();
    bytes_queued_ -= seg.wire_len;
    engine_.schedule_in(scenario_.bottleneck_delay, [this, seg] { deliver_data(seg); });
    if (!fifo_.empty()) {
        start_service();
    } else {
        serving_ = false;
    }
}

void Simulation::deliver_data(const Segment& seg) {
    if (seg.flow_id >= flows_.size()) {
        throw std::logic_error("deliver: unknown flow id " + std::to_string(seg.flow_id));
    }
    Flow& flow = flows_[seg.flow_id];
    flow.ledger.pkts_delivered += 1;
    const AckPacket ack = flow.receiver->on_segment(seg);
    const double reverse = reverse_delay_base_ + flow.access.prop_delay;
    engine_.schedule_in(reverse, [this, ack] { flows_[ack.flow_id].sender->on_ack(ack); });
}

void Simulation::sample_queue_trace() {
    trace_.push_back({engine_.now(), bytes_queued_, red_.avg()});
    if (engine_.now() + 0.1 <= scenario_.duration) {
        engine_.schedule_in(0.1, [this] { sample_queue_trace(); });
    }
}

RunResult Simulation::run() {
    std::uint64_t dispatched = 0;

    for (Flow& flow : flows_) {
        TcpSender* sender = flow.sender.get();
        engine_.schedule_at(flow.start_at, [sender] { sender->start(); });
    }
    engine_.schedule_at(scenario_.warmup, [this] {
        for (Flow& flow : flows_)
            flow.ledger.acked_at_window_start = flow.sender->cum_acked();
    });
    engine_.schedule_at(scenario_.duration, [this] {
        for (Flow& flow : flows_) {
            flow.ledger.acked_at_window_end = flow.sender->cum_acked();
            flow.sender->stop_new_data();
        }
    });
    if (scenario_.queue_trace) {
        engine_.schedule_at(0.0, [this] { sample_queue_trace(); });
    }

    dispatched += engine_.run_until(scenario_.duration);
    // Drain: outstanding data keeps being retransmitted until acked; the
    // queue is empty exactly when every flow has gone quiet.
    dispatched += engine_.run_all(scenario_.duration + kDrainCap);
    if (!engine_.empty()) {
        std::string detail;
        for (const Flow& f : flows_) {
            if (!f.sender->all_acked()) {
                detail += " flow" + std::to_string(f.id) + "(una=" +
                          std::to_string(f.sender->highest_sent() - f.sender->cum_acked()) +
                          ",rto=" + std::to_string(f.sender->current_rto()) +
                          ",to=" + std::to_string(f.sender->timeouts()) + ")";
            }
        }
        throw std::runtime_error("drain did not settle within " + std::to_string(kDrainCap) +
                                 " s past duration; pending=" + std::to_string(engine_.pending()) +
                                 detail);
    }

    RunResult result;
    result.scenario = scenario_;
    result.events_dispatched = dispatched;
    result.drained_at = engine_.now();
    result.flows.reserve(flows_.size());
    for (const Flow& flow : flows_) result.flows.push_back(flow.ledger);

    audit_conservation(result.flows);

    const double window = scenario_.duration - scenario_.warmup;
    std::size_t cursor = 0;
    for (std::size_t g = 0; g < scenario_.groups.size(); ++g) {
        const std::size_t n = static_cast<std::size_t>(scenario_.groups[g].flow_count);
        std::span<const FlowLedger> ledgers(result.flows.data() + cursor, n);
        result.groups.push_back(
            make_group_stats(static_cast<int>(g), scenario_.groups[g].mtu, ledgers, window));
        cursor += n;
    }
    result.queue_trace = std::move(trace_);
    return result;
}

} // namespace redsim
