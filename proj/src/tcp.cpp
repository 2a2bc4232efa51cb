#include "redsim/tcp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace redsim {

// ---------------------------------------------------------------- receiver

AckPacket TcpReceiver::on_segment(const Segment& seg) {
    if (seg.seq_start <= rcv_next_) {
        if (seg.seq_end > rcv_next_) rcv_next_ = seg.seq_end;
        // Absorb stored ranges that became contiguous.
        auto it = out_of_order_.begin();
        while (it != out_of_order_.end() && it->first <= rcv_next_) {
            rcv_next_ = std::max(rcv_next_, it->second);
            it = out_of_order_.erase(it);
        }
        have_recent_ = false; // in-order arrival: no fresh out-of-order block
    } else {
        // Insert [start, end) and merge neighbours.
        SeqByte start = seg.seq_start, end = seg.seq_end;
        auto it = out_of_order_.lower_bound(start);
        if (it != out_of_order_.begin()) {
            auto prev = std::prev(it);
            if (prev->second >= start) {
                start = prev->first;
                end = std::max(end, prev->second);
                it = out_of_order_.erase(prev);
            }
        }
        while (it != out_of_order_.end() && it->first <= end) {
            end = std::max(end, it->second);
            it = out_of_order_.erase(it);
        }
        out_of_order_[start] = end;
        recent_start_ = start;
        have_recent_ = true;
    }

    AckPacket ack;
    ack.flow_id = id_;
    ack.cum_ack = rcv_next_;
    ack.wire_len = kAckWireBytes;
    if (have_recent_) {
        auto it = out_of_order_.find(recent_start_);
        if (it != out_of_order_.end()) {
            ack.blocks[ack.n_blocks++] = {it->first, it->second};
        }
    }
    for (const auto& [s, e] : out_of_order_) {
        if (ack.n_blocks >= 3) break;
        if (have_recent_ && s == recent_start_) continue;
        ack.blocks[ack.n_blocks++] = {s, e};
    }
    return ack;
}

// ------------------------------------------------------------------ sender

TcpSender::TcpSender(FlowId id, double mss, Hooks hooks)
    : id_(id), mss_(mss), hooks_(std::move(hooks)), max_window_(65536.0 * mss) {
    if (mss_ <= 0.0) throw std::invalid_argument("tcp: mss must be positive");
    cwnd_ = mss_;
    ssthresh_ = 64.0 * mss_;
}

void TcpSender::start() {
    started_ = true;
    cwnd_ = mss_;
    ssthresh_ = 64.0 * mss_;
    fill_window();
}

void TcpSender::stop_new_data() { new_data_stopped_ = true; }

double TcpSender::quantized_rto(double srtt, double rttvar) {
    const double raw = srtt + 4.0 * rttvar;
    const double ticks = std::ceil(raw / kRtoGranularity - 1e-9);
    return std::max(1.0, ticks) * kRtoGranularity;
}

void TcpSender::take_rtt_sample(double rtt) {
    if (!has_rtt_sample_) {
        srtt_ = rtt;
        rttvar_ = rtt / 2.0;
        has_rtt_sample_ = true;
    } else {
        rttvar_ = 0.75 * rttvar_ + 0.25 * std::fabs(srtt_ - rtt);
        srtt_ = 0.875 * srtt_ + 0.125 * rtt;
    }
    rto_ = std::min(quantized_rto(srtt_, rttvar_), kRtoMax);
}

void TcpSender::merge_sacks(const AckPacket& ack) {
    for (int i = 0; i < ack.n_blocks; ++i) {
        SeqByte start = std::max(ack.blocks[i].start, ack.cum_ack);
        SeqByte end = ack.blocks[i].end;
        if (start >= end) continue;
        auto it = scoreboard_.lower_bound(start);
        if (it != scoreboard_.begin()) {
            auto prev = std::prev(it);
            if (prev->second >= start) {
                start = prev->first;
                end = std::max(end, prev->second);
                scoreboard_.erase(prev);
            }
        }
        it = scoreboard_.lower_bound(start);
        while (it != scoreboard_.end() && it->first <= end) {
            end = std::max(end, it->second);
            it = scoreboard_.erase(it);
        }
        scoreboard_[start] = end;
    }
}

void TcpSender::send_segment(SeqByte start, SeqByte end, bool retransmit) {
    if (end <= start) {
        throw std::logic_error("tcp: backwards segment [" + std::to_string(start) + ", " +
                               std::to_string(end) + ") on flow " + std::to_string(id_));
    }
    Segment seg;
    seg.flow_id = id_;
    seg.seq_start = start;
    seg.seq_end = end;
    seg.wire_len = static_cast<double>(end - start) + kTcpIpHeaderBytes;
    seg.is_retransmit = retransmit;

    if (retransmit) {
        ++retransmits_sent_;
        timing_ = false; // Karn: never time a retransmitted range
    } else {
        highest_sent_ = end;
        if (!timing_) {
            timing_ = true;
            timed_end_ = end;
            timed_at_ = now();
        }
    }
    ++segments_sent_;
    hooks_.transmit(seg);
    if (!timer_armed_) arm_timer();
}

void TcpSender::fill_window() {
    if (!started_ || new_data_stopped_) return;
    // Conservative recovery: while a hole is outstanding only the
    // one-hole-per-ack retransmissions flow. Injecting new data here lets
    // every extra dup ack release another segment that produces another dup
    // ack, so the unacked range can grow without bound while the
    // retransmission itself is lost.
    if (in_fast_recovery_) return;
    const double window = std::min(cwnd_, max_window_);
    while (flight_size() + mss_ <= window + 1e-9) {
        send_segment(highest_sent_, highest_sent_ + static_cast<SeqByte>(mss_), false);
    }
}

void TcpSender::arm_timer() {
    const std::uint64_t gen = ++timer_generation_;
    timer_armed_ = true;
    hooks_.engine->schedule_in(rto_, [this, gen] { on_timeout(gen); });
}

void TcpSender::cancel_timer() {
    ++timer_generation_;
    timer_armed_ = false;
}

bool TcpSender::retransmit_one_hole() {
    const SeqByte from = std::max(cum_acked_, rtx_high_);
    SeqByte hole_start = from;
    SeqByte hole_cap = 0;

    auto it = scoreboard_.upper_bound(hole_start);
    if (it != scoreboard_.begin()) {
        auto prev = std::prev(it);
        if (prev->second > hole_start) {
            hole_start = prev->second; // inside a sacked range: hole begins after it
            it = scoreboard_.upper_bound(hole_start);
        }
    }
    if (it != scoreboard_.end()) {
        hole_cap = it->first; // hole ends where the next sacked range begins
    } else if (hole_start == cum_acked_ && hole_start < highest_sent_) {
        // No SACK information above: plain fast-retransmit of the first segment.
        hole_cap = highest_sent_;
    } else {
        return false; // nothing identified to retransmit
    }

    if (hole_start >= highest_sent_ || hole_start >= hole_cap) return false;
    const SeqByte end = std::min({hole_start + static_cast<SeqByte>(mss_), hole_cap, highest_sent_});
    send_segment(hole_start, end, true);
    rtx_high_ = end;
    return true;
}

void TcpSender::enter_fast_retransmit() {
    ssthresh_ = std::max(flight_size() / 2.0, 2.0 * mss_);
    in_fast_recovery_ = true;
    ++fast_recoveries_;
    recover_ = highest_sent_;
    rtx_high_ = cum_acked_;
    retransmit_one_hole();
    cwnd_ = ssthresh_ + 3.0 * mss_;
    arm_timer();
}

void TcpSender::on_ack(const AckPacket& ack) {
    if (ack.cum_ack > highest_sent_) {
        throw std::logic_error("tcp: ack for unsent data on flow " + std::to_string(id_));
    }
    merge_sacks(ack);

    if (ack.cum_ack > cum_acked_) {
        const double newly = static_cast<double>(ack.cum_ack - cum_acked_);
        cum_acked_ = ack.cum_ack;
        while (!scoreboard_.empty() && scoreboard_.begin()->second <= cum_acked_)
            scoreboard_.erase(scoreboard_.begin());

        if (timing_ && cum_acked_ >= timed_end_) {
            take_rtt_sample(now() - timed_at_);
            timing_ = false;
        }

        if (in_fast_recovery_) {
            if (cum_acked_ >= recover_) {
                in_fast_recovery_ = false;
                cwnd_ = ssthresh_; // deflate on recovery exit
                dup_acks_ = 0;
            } else {
                retransmit_one_hole(); // partial ack: next hole, one per ack
            }
        } else {
            dup_acks_ = 0;
            if (cwnd_ < ssthresh_) {
                cwnd_ += std::min(newly, mss_); // slow start
            } else {
                cwnd_ += mss_ * mss_ / cwnd_; // congestion avoidance
            }
            cwnd_ = std::min(cwnd_, max_window_);
        }

        if (cum_acked_ < highest_sent_) {
            arm_timer(); // restart on new data acked
        } else {
            cancel_timer();
            timing_ = false;
        }
        fill_window();
        return;
    }

    // Duplicate cumulative ack.
    if (cum_acked_ >= highest_sent_) return; // nothing outstanding
    ++dup_acks_;
    if (!in_fast_recovery_) {
        if (dup_acks_ == 3) {
            enter_fast_retransmit();
            fill_window();
        }
    } else {
        cwnd_ = std::min(cwnd_ + mss_, max_window_); // inflate per extra dup ack
        retransmit_one_hole();
        fill_window();
    }
}

void TcpSender::on_timeout(std::uint64_t generation) {
    if (generation != timer_generation_ || !timer_armed_) return;
    timer_armed_ = false;
    if (cum_acked_ >= highest_sent_) return;

    ++timeouts_;
    ssthresh_ = std::max(flight_size() / 2.0, 2.0 * mss_);
    cwnd_ = mss_;
    in_fast_recovery_ = false;
    dup_acks_ = 0;
    rto_ = std::min(rto_ * 2.0, kRtoMax); // exponential backoff
    timing_ = false;

    // Retransmit the first unacked chunk, clipped to the first SACKed range.
    SeqByte end = std::min(cum_acked_ + static_cast<SeqByte>(mss_), highest_sent_);
    if (!scoreboard_.empty()) end = std::min(end, scoreboard_.begin()->first);
    send_segment(cum_acked_, end, true);
    rtx_high_ = end;
    arm_timer();
}

} // namespace redsim
