#include <doctest.h>

#include <cmath>
#include <deque>
#include <stdexcept>
#include <vector>

#include "redsim/event_queue.hpp"
#include "redsim/tcp.hpp"

using namespace redsim;

namespace {

// Sender wired to a capture buffer; tests play network and receiver by hand.
struct Harness {
    EventQueue engine;
    std::deque<Segment> wire;
    TcpReceiver receiver{0};
    TcpSender sender;

    explicit Harness(double mss = 1000.0)
        : sender(0, mss, {&engine, [this](const Segment& s) { wire.push_back(s); }}) {}

    // Advances the clock, then passes the oldest in-flight segment through
    // the receiver (optionally dropping it) and acks the sender.
    void step(double dt, bool drop = false) {
        engine.run_until(engine.now() + dt);
        if (wire.empty()) return;
        Segment seg = wire.front();
        wire.pop_front();
        if (drop) return;
        sender.on_ack(receiver.on_segment(seg));
    }
};

} // namespace

TEST_CASE("fresh flow opens with one MSS-sized segment") {
    Harness h(1460.0);
    h.sender.start();
    REQUIRE(h.wire.size() == 1);
    CHECK(h.wire[0].seq_start == 0);
    CHECK(h.wire[0].seq_end == 1460);
    CHECK(h.wire[0].wire_len == 1500.0); // mss + 40 B header
    CHECK_FALSE(h.wire[0].is_retransmit);
    CHECK(h.sender.cwnd() == 1460.0);
    CHECK(h.sender.ssthresh() == 64.0 * 1460.0);
}

TEST_CASE("slow start grows one MSS per full-MSS ack") {
    Harness h;
    h.sender.start();
    h.step(0.01);
    CHECK(h.sender.cwnd() == doctest::Approx(2000.0)); // 2 segments now allowed
    CHECK(h.wire.size() == 2);
    h.step(0.01);
    CHECK(h.sender.cwnd() == doctest::Approx(3000.0));
}

TEST_CASE("congestion avoidance adds mss^2/cwnd per new ack") {
    Harness h;
    h.sender.start();
    // Knock the flow into a small ssthresh via a timeout, then grow into CA.
    h.engine.run_until(2.0); // initial RTO 1.0 s, doubling afterwards
    CHECK(h.sender.timeouts() >= 1);
    CHECK(h.sender.cwnd() == 1000.0);
    CHECK(h.sender.ssthresh() == 2000.0);

    // Ack everything outstanding, then verify the CA increment ack by ack,
    // including the crossing of cwnd = 10 * mss.
    int guard = 0;
    while (h.sender.cwnd() < 12000.0 && ++guard < 500) {
        const double before = h.sender.cwnd();
        const SeqByte acked_before = h.sender.cum_acked();
        h.step(0.001);
        if (h.sender.cum_acked() == acked_before) continue;
        if (before >= h.sender.ssthresh()) {
            CHECK(h.sender.cwnd() ==
                  doctest::Approx(before + 1000.0 * 1000.0 / before).epsilon(1e-12));
        }
    }
    CHECK(h.sender.cwnd() >= 12000.0); // reached via ~0.1 mss steps around 10 mss
}

TEST_CASE("third duplicate ack triggers exactly one retransmission") {
    Harness h;
    h.sender.start();
    // Grow the window so several segments are in flight.
    for (int i = 0; i < 4; ++i) h.step(0.01);
    REQUIRE(h.wire.size() >= 5);

    const double flight_before = static_cast<double>(h.sender.highest_sent() - h.sender.cum_acked());
    h.step(0.01, /*drop=*/true); // lose the head segment
    std::uint64_t rtx_before = h.sender.retransmits_sent();
    h.step(0.001);               // dup ack 1 (sack for the gap)
    h.step(0.001);               // dup ack 2
    CHECK(h.sender.retransmits_sent() == rtx_before);
    CHECK_FALSE(h.sender.in_fast_recovery());
    h.step(0.001); // dup ack 3 -> fast retransmit
    CHECK(h.sender.retransmits_sent() == rtx_before + 1);
    CHECK(h.sender.in_fast_recovery());
    CHECK(h.sender.ssthresh() == doctest::Approx(std::max(flight_before / 2.0, 2000.0)));
    CHECK(h.sender.cwnd() == doctest::Approx(h.sender.ssthresh() + 3000.0));

    // The retransmission fills the hole; recovery exits with cwnd deflated.
    int guard = 0;
    while (h.sender.in_fast_recovery() && ++guard < 100) h.step(0.001);
    CHECK(h.sender.cwnd() == doctest::Approx(h.sender.ssthresh()));
}

TEST_CASE("timeout collapses the window and doubles the timer") {
    Harness h;
    h.sender.start();
    for (int i = 0; i < 3; ++i) h.step(0.01); // establish an RTT sample
    const double rto1 = h.sender.current_rto();
    CHECK(rto1 == doctest::Approx(0.2)); // tiny RTT floors at the granularity

    // Stop acking; first timeout.
    h.engine.run_until(h.engine.now() + rto1 + 0.001);
    CHECK(h.sender.timeouts() == 1);
    CHECK(h.sender.cwnd() == 1000.0);
    CHECK(h.sender.current_rto() == doctest::Approx(0.4));

    // Second consecutive timeout doubles again.
    h.engine.run_until(h.engine.now() + 0.4 + 0.001);
    CHECK(h.sender.timeouts() == 2);
    CHECK(h.sender.current_rto() == doctest::Approx(0.8));
}

TEST_CASE("retransmission timers stay on the 200 ms grid") {
    CHECK(TcpSender::quantized_rto(0.05, 0.01) == doctest::Approx(0.2));
    CHECK(TcpSender::quantized_rto(0.5, 0.05) == doctest::Approx(0.8));
    CHECK(TcpSender::quantized_rto(0.0, 0.0) == doctest::Approx(0.2));
    for (double s : {0.013, 0.19, 0.21, 0.33, 1.7}) {
        const double rto = TcpSender::quantized_rto(s, s / 3.0);
        const double ticks = rto / kRtoGranularity;
        CHECK(std::fabs(ticks - std::round(ticks)) < 1e-9);
    }

    Harness h;
    h.sender.start();
    CHECK(h.sender.current_rto() == kRtoInitial); // 1.0 s before any sample
}

TEST_CASE("receiver acks and SACK blocks") {
    TcpReceiver rcv(9);

    Segment a{9, 0, 1000, 1040, false};
    AckPacket ack = rcv.on_segment(a);
    CHECK(ack.cum_ack == 1000);
    CHECK(ack.n_blocks == 0); // in-order: no gaps
    CHECK(ack.wire_len == 40.0);

    Segment c{9, 2000, 3000, 1040, false}; // gap at [1000, 2000)
    ack = rcv.on_segment(c);
    CHECK(ack.cum_ack == 1000);
    REQUIRE(ack.n_blocks == 1);
    CHECK(ack.blocks[0].start == 2000);
    CHECK(ack.blocks[0].end == 3000);

    ack = rcv.on_segment(a); // duplicate segment: cumulative ack re-emitted
    CHECK(ack.cum_ack == 1000);
    CHECK(ack.n_blocks == 1);

    Segment b{9, 1000, 2000, 1040, false}; // fills the hole
    ack = rcv.on_segment(b);
    CHECK(ack.cum_ack == 3000);
    CHECK(ack.n_blocks == 0);
}

TEST_CASE("ack for unsent data fails loudly") {
    Harness h;
    h.sender.start();
    AckPacket bogus;
    bogus.flow_id = 0;
    bogus.cum_ack = 999999;
    CHECK_THROWS_AS(h.sender.on_ack(bogus), std::logic_error);
}

// Scripted periodic loss: cwnd must trace a sawtooth, increasing between
// loss events and dropping multiplicatively at each recovery.
TEST_CASE("cwnd sawtooth under periodic loss") {
    Harness h;
    h.sender.start();
    int data_seen = 0;
    std::vector<double> cwnd_at_exit;
    double peak_since_exit = 0.0;
    bool was_in_recovery = false;

    for (int step = 0; step < 4000; ++step) {
        h.engine.run_until(h.engine.now() + 0.001);
        if (h.wire.empty()) continue;
        Segment seg = h.wire.front();
        h.wire.pop_front();
        const bool drop = !seg.is_retransmit && (++data_seen % 50 == 0);
        if (drop) continue;
        const double cwnd_before = h.sender.cwnd();
        const bool rec_before = h.sender.in_fast_recovery();
        h.sender.on_ack(h.receiver.on_segment(seg));
        if (!rec_before && !h.sender.in_fast_recovery()) {
            // Outside recovery the window never shrinks.
            CHECK(h.sender.cwnd() >= cwnd_before - 1e-9);
            peak_since_exit = std::max(peak_since_exit, h.sender.cwnd());
        }
        if (was_in_recovery && !h.sender.in_fast_recovery()) {
            cwnd_at_exit.push_back(h.sender.cwnd());
            // Multiplicative decrease: exit near half the pre-loss peak.
            CHECK(h.sender.cwnd() < peak_since_exit);
            peak_since_exit = h.sender.cwnd();
        }
        was_in_recovery = h.sender.in_fast_recovery();
    }
    CHECK(h.sender.fast_recoveries() >= 3);
    CHECK(cwnd_at_exit.size() >= 3);
    CHECK(h.sender.timeouts() <= 2); // losses recovered without collapsing
}

TEST_CASE("sack recovery retransmits at most one hole per ack") {
    Harness h;
    h.sender.start();
    for (int i = 0; i < 6; ++i) h.step(0.01); // open the window
    REQUIRE(h.wire.size() >= 6);

    // Drop two separate segments, deliver the rest: each later delivery is
    // one ack, and each ack may carry at most one retransmission.
    std::uint64_t rtx_seen = h.sender.retransmits_sent();
    h.step(0.005, true);
    h.step(0.005);
    h.step(0.005, true);
    for (int i = 0; i < 12 && !h.wire.empty(); ++i) {
        h.step(0.002);
        CHECK(h.sender.retransmits_sent() <= rtx_seen + 1);
        rtx_seen = h.sender.retransmits_sent();
    }
}
