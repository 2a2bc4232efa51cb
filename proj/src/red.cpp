#include "redsim/red.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace redsim {

const char* to_string(RedVariant v) {
    switch (v) {
        case RedVariant::Red1: return "red1";
        case RedVariant::Red2: return "red2";
        case RedVariant::Red3: return "red3";
        case RedVariant::Red4: return "red4";
        case RedVariant::Red5: return "red5";
    }
    return "?";
}

RedVariant red_variant_from_string(std::string_view name) {
    if (name == "red1" || name == "RED1") return RedVariant::Red1;
    if (name == "red2" || name == "RED2") return RedVariant::Red2;
    if (name == "red3" || name == "RED3") return RedVariant::Red3;
    if (name == "red4" || name == "RED4") return RedVariant::Red4;
    if (name == "red5" || name == "RED5") return RedVariant::Red5;
    throw std::invalid_argument("unknown RED variant '" + std::string(name) +
                                "' (expected red1..red5)");
}

CountPhase count_phase(RedVariant v) {
    switch (v) {
        case RedVariant::Red1:
        case RedVariant::Red2:
        case RedVariant::Red3: return CountPhase::BeforeDecision;
        case RedVariant::Red4:
        case RedVariant::Red5: return CountPhase::AfterAccept;
    }
    return CountPhase::BeforeDecision;
}

void RedParams::validate() const {
    if (!(weight > 0.0 && weight <= 1.0))
        throw std::invalid_argument("red: w_q must be in (0, 1]");
    if (!(max_p > 0.0 && max_p <= 1.0))
        throw std::invalid_argument("red: max_p must be in (0, 1]");
    if (!(min_th > 0.0))
        throw std::invalid_argument("red: min_th must be positive");
    if (!(min_th <= max_th))
        throw std::invalid_argument("red: min_th must not exceed max_th");
    if (!(max_th <= capacity))
        throw std::invalid_argument("red: max_th must not exceed capacity");
    if (!(max_pkt > 0.0))
        throw std::invalid_argument("red: M (max packet size) must be positive");
}

RedAqm::RedAqm(RedVariant variant, const RedParams& params)
    : variant_(variant), params_(params) {
    params_.validate();
}

double RedAqm::update_average(double queue_bytes) {
    assert(queue_bytes >= 0.0);
    avg_ = (1.0 - params_.weight) * avg_ + params_.weight * queue_bytes;
    return avg_;
}

double RedAqm::temp_drop_prob() const {
    if (avg_ <= params_.min_th) return 0.0;
    if (avg_ >= params_.max_th) return params_.max_p;
    return params_.max_p * (avg_ - params_.min_th) / (params_.max_th - params_.min_th);
}

double RedAqm::size_weight_temp(double p_b, double pkt_len, double max_pkt) {
    return p_b * pkt_len / max_pkt;
}

double RedAqm::final_drop_prob(double p_b, double pkt_len) const {
    const double ratio = pkt_len / params_.max_pkt;
    double numer = p_b;
    switch (variant_) {
        case RedVariant::Red1:
        case RedVariant::Red2: break; // red2's weighting already folded into p_b
        case RedVariant::Red3:
        case RedVariant::Red4: numer *= ratio; break;
        case RedVariant::Red5: numer *= ratio * ratio; break;
    }
    const double denom = 1.0 - count_ * p_b;
    if (denom <= 0.0) return 1.0;
    return std::min(numer / denom, 1.0);
}

void RedAqm::update_count(double pkt_len, CountPhase phase) {
    if (phase != count_phase(variant_)) {
        throw std::logic_error(std::string("red: count update for ") + to_string(variant_) +
                               " called in the wrong phase");
    }
    const double ratio = pkt_len / params_.max_pkt;
    switch (variant_) {
        case RedVariant::Red1:
        case RedVariant::Red2:
        case RedVariant::Red3: count_ += 1.0; break;
        case RedVariant::Red4: count_ += ratio; break;
        case RedVariant::Red5: count_ += ratio * ratio; break;
    }
}

DropDecision RedAqm::on_arrival(double pkt_len, double q_bytes, double u, double idle_updates) {
    assert(pkt_len > 0.0 && pkt_len <= params_.max_pkt);
    if (idle_updates > 0.0) avg_ *= std::pow(1.0 - params_.weight, idle_updates);
    update_average(q_bytes);

    // Hard buffer limit first: an accept must always fit.
    if (q_bytes + pkt_len > params_.capacity) {
        count_ = 0.0;
        return {DropOutcome::ForcedDrop, 1.0};
    }
    if (avg_ < params_.min_th) {
        count_ = 0.0;
        return {DropOutcome::Accept, 0.0};
    }
    if (avg_ >= params_.max_th) {
        count_ = 0.0;
        return {DropOutcome::ForcedDrop, 1.0};
    }

    double p_b = temp_drop_prob();
    if (variant_ == RedVariant::Red2) p_b = size_weight_temp(p_b, pkt_len, params_.max_pkt);
    const double p_a = final_drop_prob(p_b, pkt_len);

    if (u < p_a) {
        count_ = 0.0;
        return {DropOutcome::RandomDrop, p_a};
    }
    // Accepted packets charge the accumulator; a dropped packet's charge
    // would be erased by the reset anyway, so the charge is applied here for
    // every variant and the next arrival sees its predecessors' weight.
    update_count(pkt_len, count_phase(variant_));
    return {DropOutcome::Accept, p_a};
}

} // namespace redsim
