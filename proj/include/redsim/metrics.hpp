// Per-flow and per-MTU-group accounting of the bottleneck observables:
// packet loss ratio and goodput over a measurement window, plus the
// conservation audit and report rendering.
#ifndef REDSIM_METRICS_HPP
#define REDSIM_METRICS_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "redsim/event_queue.hpp"
#include "redsim/tcp.hpp"

namespace redsim {

// Counts bottleneck data packets only; acks ride the lossless reverse path.
struct FlowLedger {
    FlowId flow_id = 0;
    int group_id = 0;

    // Whole-run totals, used by the conservation audit.
    std::uint64_t pkts_sent = 0; // arrivals at the bottleneck queue
    std::uint64_t pkts_dropped = 0;
    std::uint64_t pkts_dropped_forced = 0;
    std::uint64_t pkts_delivered = 0;

    // Counters restricted to the [warmup, duration] window.
    std::uint64_t win_arrivals = 0;
    std::uint64_t win_drops = 0;
    std::uint64_t win_drops_forced = 0;

    // Unique bytes cumulatively acked, sampled at the window edges.
    SeqByte acked_at_window_start = 0;
    SeqByte acked_at_window_end = 0;

    std::uint64_t in_flight() const { return pkts_sent - pkts_dropped - pkts_delivered; }
};

struct GroupStats {
    int group_id = 0;
    double mtu = 0.0;
    double plr = 0.0;        // window drops / window arrivals
    double plr_forced = 0.0; // forced-drop share of window arrivals
    double goodput_bps = 0.0;
    std::uint64_t pkts_sent = 0; // window arrivals
    std::uint64_t pkts_dropped = 0;
};

struct QueueTraceSample {
    SimTime t = 0.0;
    double q_bytes = 0.0;
    double avg_bytes = 0.0;
};

// Window PLR for one group of flows. Zero arrivals is an error.
double window_plr(std::span<const FlowLedger> group);
double window_forced_plr(std::span<const FlowLedger> group);

// Unique payload bits per second over the window; a retransmitted byte is
// counted at most once because the cumulative ack point is monotone.
double window_goodput_bps(std::span<const FlowLedger> group, double window_seconds);

GroupStats make_group_stats(int group_id, double mtu, std::span<const FlowLedger> group,
                            double window_seconds);

// Throws std::runtime_error naming the first flow whose ledger violates
// sent == dropped + delivered (i.e. packets still in flight).
void audit_conservation(std::span<const FlowLedger> flows);

// Stable CSV schema:
// scenario_id,seed,variant,delay_profile,group_mtu,plr,plr_forced,goodput_bps,pkts_sent,pkts_dropped
void write_metrics_csv_header(std::ostream& os);
void write_metrics_csv_rows(std::ostream& os, const std::string& scenario_id, std::uint64_t seed,
                            const std::string& variant, const std::string& delay_profile,
                            std::span<const GroupStats> groups);

void write_queue_trace_csv(std::ostream& os, std::span<const QueueTraceSample> samples);

// One column per variant, one row per MTU group, PLR block then goodput
// block with a Sum row; a section per delay profile.
struct SummarySection {
    std::string delay_label;
    std::vector<std::string> variant_labels;         // columns
    std::vector<double> mtus;                        // rows, ascending
    std::vector<std::vector<GroupStats>> cells;      // [column][row]
};

std::string render_summary_text(std::span<const SummarySection> sections);
std::string render_summary_csv(std::span<const SummarySection> sections);

} // namespace redsim

#endif
