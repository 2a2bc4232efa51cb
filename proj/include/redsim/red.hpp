// RED drop-decision state machines for five drop-probability variants,
// operating on a byte-measured queue.
//
// Per arriving packet of size L (avg in the probabilistic region):
//   p_b = max_p * (avg - min_th) / (max_th - min_th)
//   red1: p_a = p_b / (1 - count * p_b)
//   red2: p_b' = p_b * L/M,        p_a = p_b' / (1 - count * p_b')
//   red3: p_a = (L/M)   * p_b / (1 - count * p_b)
//   red4: p_a = (L/M)   * p_b / (1 - count * p_b)
//   red5: p_a = (L/M)^2 * p_b / (1 - count * p_b)
// count accumulates per accepted packet: +1 for red1-red3, +L/M for red4,
// +(L/M)^2 for red5. It resets to 0 on every drop and whenever avg < min_th.
//
// The p_a computed for an arriving packet always uses the weight accumulated
// by the packets accepted before it (count origin as in Floyd/Jacobson's
// gateway, where count starts at -1). That origin is what makes the
// inter-drop count uniformly distributed for red1 and gives red4/red5 their
// product-form inter-drop laws; see drop_law.hpp for the closed forms.
#ifndef REDSIM_RED_HPP
#define REDSIM_RED_HPP

#include <string>
#include <string_view>

namespace redsim {

enum class RedVariant { Red1, Red2, Red3, Red4, Red5 };

const char* to_string(RedVariant v);
RedVariant red_variant_from_string(std::string_view name); // throws on unknown name

struct RedParams {
    double weight = 0.002;       // w_q, EWMA gain in (0, 1]
    double min_th = 120000.0;    // bytes
    double max_th = 360000.0;    // bytes
    double max_p = 0.1;          // p_b at avg == max_th
    double max_pkt = 1500.0;     // M, largest admissible packet, bytes
    double capacity = 720000.0;  // hard buffer limit, bytes

    // Requires 0 < min_th <= max_th <= capacity, weight/max_p in (0,1],
    // max_pkt > 0. min_th == max_th degenerates to a drop-tail queue.
    void validate() const; // throws std::invalid_argument
};

enum class DropOutcome { Accept, RandomDrop, ForcedDrop };

struct DropDecision {
    DropOutcome outcome = DropOutcome::Accept;
    double p_used = 0.0; // p_a compared against u; 0 below min_th, 1 for forced drops
    bool dropped() const { return outcome != DropOutcome::Accept; }
};

// Phase at which a variant charges the count accumulator: red1-red3 at the
// top of the estimation pipeline, red4/red5 after the accept decision.
enum class CountPhase { BeforeDecision, AfterAccept };

CountPhase count_phase(RedVariant v);

class RedAqm {
  public:
    RedAqm(RedVariant variant, const RedParams& params);

    RedVariant variant() const { return variant_; }
    const RedParams& params() const { return params_; }
    double avg() const { return avg_; }
    double count() const { return count_; }

    // avg <- (1 - w_q) * avg + w_q * q. Returns the new avg.
    double update_average(double queue_bytes);

    // Linear ramp between the thresholds, clamped to [0, max_p].
    double temp_drop_prob() const;

    // red2's size weighting of the temporary probability (identity for L == M).
    static double size_weight_temp(double p_b, double pkt_len, double max_pkt);

    // Variant's final probability from the current count; clamped to 1, and 1
    // outright once 1 - count * p_b <= 0. For red2 pass the size-weighted p_b.
    double final_drop_prob(double p_b, double pkt_len) const;

    // Charges the variant's weight for one packet. Throws std::logic_error if
    // phase does not match the variant.
    void update_count(double pkt_len, CountPhase phase);

    void reset_count() { count_ = 0.0; }

    // Warm-start hook for tests and traces; avg normally starts at 0.
    void seed_average(double avg_bytes) { avg_ = avg_bytes; }

    // Full decision pipeline for one arriving packet. q_bytes is the queue
    // size before enqueue; u is a uniform draw from the AQM substream.
    // The average is updated on every arrival, dropped packets included.
    //
    // idle_updates compensates for an empty-queue gap before this arrival:
    // the caller passes the gap divided by a typical transmission time and
    // avg first decays by (1 - w_q)^idle_updates, as in the reference RED
    // gateway. Without it a stale high average can sit above the thresholds
    // for ever once traffic has collapsed to sparse retransmissions.
    DropDecision on_arrival(double pkt_len, double q_bytes, double u, double idle_updates = 0.0);

  private:
    RedVariant variant_;
    RedParams params_;
    double avg_ = 0.0;
    double count_ = 0.0;
};

} // namespace redsim

#endif
