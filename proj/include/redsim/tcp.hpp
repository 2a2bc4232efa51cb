// Simplified bulk-transfer TCP: slow start, congestion avoidance, fast
// retransmit / fast recovery on three duplicate acks, SACK-guided hole
// retransmission (at most one hole per incoming ack), and a coarse
// retransmission timer quantized to 200 ms (RFC 2001/5681 mechanics with
// the RFC 6298 estimator).
//
// Senders are greedy: an infinite backlog of full-MSS segments until
// stop_new_data(). The receiver acks every segment (no delayed acks) and
// reports up to three SACK blocks. Flow control never binds; congestion
// control alone limits the flight.
#ifndef REDSIM_TCP_HPP
#define REDSIM_TCP_HPP

#include <cstdint>
#include <functional>
#include <map>

#include "redsim/event_queue.hpp"

namespace redsim {

using FlowId = std::uint32_t;
using SeqByte = std::uint64_t;

inline constexpr double kTcpIpHeaderBytes = 40.0; // 20 B IP + 20 B TCP, no options
inline constexpr double kAckWireBytes = 40.0;
inline constexpr double kRtoGranularity = 0.2; // seconds
inline constexpr double kRtoMax = 60.0;
inline constexpr double kRtoInitial = 1.0; // before the first RTT sample

struct Segment {
    FlowId flow_id = 0;
    SeqByte seq_start = 0;
    SeqByte seq_end = 0; // exclusive
    double wire_len = 0; // payload + 40 B header
    bool is_retransmit = false;

    double payload_bytes() const { return static_cast<double>(seq_end - seq_start); }
};

struct SackBlock {
    SeqByte start = 0;
    SeqByte end = 0; // exclusive
};

struct AckPacket {
    FlowId flow_id = 0;
    SeqByte cum_ack = 0;
    SackBlock blocks[3];
    int n_blocks = 0;
    double wire_len = kAckWireBytes;
};

class TcpReceiver {
  public:
    explicit TcpReceiver(FlowId id) : id_(id) {}

    // One ack per received segment; cumulative point advanced over
    // contiguous data, out-of-order ranges reported as SACK blocks
    // (most recent range first).
    AckPacket on_segment(const Segment& seg);

    SeqByte rcv_next() const { return rcv_next_; }

  private:
    FlowId id_;
    SeqByte rcv_next_ = 0;
    std::map<SeqByte, SeqByte> out_of_order_; // start -> end, disjoint, above rcv_next_
    SeqByte recent_start_ = 0;                // range holding the latest out-of-order arrival
    bool have_recent_ = false;
};

class TcpSender {
  public:
    struct Hooks {
        EventQueue* engine = nullptr;
        std::function<void(const Segment&)> transmit;
    };

    TcpSender(FlowId id, double mss, Hooks hooks);

    // Opens with cwnd = 1 MSS, ssthresh = 64 MSS, and fills the window.
    void start();

    // Stops generating new data; outstanding data is still retransmitted
    // until acknowledged.
    void stop_new_data();

    void on_ack(const AckPacket& ack);

    // rto = ceil(srtt + 4*rttvar) up to the 200 ms grid, never below it.
    static double quantized_rto(double srtt, double rttvar);

    FlowId id() const { return id_; }
    double mss() const { return mss_; }
    double cwnd() const { return cwnd_; }
    double ssthresh() const { return ssthresh_; }
    SeqByte cum_acked() const { return cum_acked_; }
    SeqByte highest_sent() const { return highest_sent_; }
    bool in_fast_recovery() const { return in_fast_recovery_; }
    bool all_acked() const { return cum_acked_ == highest_sent_; }
    double current_rto() const { return rto_; }
    double smoothed_rtt() const { return srtt_; }

    std::uint64_t segments_sent() const { return segments_sent_; }
    std::uint64_t retransmits_sent() const { return retransmits_sent_; }
    std::uint64_t timeouts() const { return timeouts_; }
    std::uint64_t fast_recoveries() const { return fast_recoveries_; }

  private:
    void fill_window();
    void send_segment(SeqByte start, SeqByte end, bool retransmit);
    void enter_fast_retransmit();
    // Retransmits the leftmost hole not yet covered this recovery episode
    // (clipped to one MSS). Returns false when no hole is identified.
    bool retransmit_one_hole();
    void on_timeout(std::uint64_t generation);
    void arm_timer();
    void cancel_timer();
    void take_rtt_sample(double rtt);
    void merge_sacks(const AckPacket& ack);
    double flight_size() const { return static_cast<double>(highest_sent_ - cum_acked_); }
    SimTime now() const { return hooks_.engine->now(); }

    FlowId id_;
    double mss_;
    Hooks hooks_;

    double cwnd_ = 0.0;
    double ssthresh_ = 0.0;
    double max_window_; // receiver window stand-in, effectively unbounded

    SeqByte highest_sent_ = 0;
    SeqByte cum_acked_ = 0;
    std::map<SeqByte, SeqByte> scoreboard_; // SACKed ranges above cum_acked_

    int dup_acks_ = 0;
    bool in_fast_recovery_ = false;
    SeqByte recover_ = 0;  // highest_sent_ at recovery entry
    SeqByte rtx_high_ = 0; // end of the last hole retransmitted this episode

    bool started_ = false;
    bool new_data_stopped_ = false;

    // Jacobson estimator; one segment timed at a time, timing dropped on any
    // retransmission (Karn's rule).
    double srtt_ = 0.0;
    double rttvar_ = 0.0;
    bool has_rtt_sample_ = false;
    bool timing_ = false;
    SeqByte timed_end_ = 0;
    SimTime timed_at_ = 0.0;

    double rto_ = kRtoInitial;
    std::uint64_t timer_generation_ = 0;
    bool timer_armed_ = false;

    std::uint64_t segments_sent_ = 0;
    std::uint64_t retransmits_sent_ = 0;
    std::uint64_t timeouts_ = 0;
    std::uint64_t fast_recoveries_ = 0;
};

} // namespace redsim

#endif
