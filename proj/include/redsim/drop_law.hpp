// Inter-drop distributions of the count-based RED drop process, computed
// three independent ways, plus the TCP goodput bound and the packet-size
// fairness condition derived from it.
//
// N counts the incoming packets from one drop to the next, inclusive of the
// dropped packet, with the temporary probability p_b frozen. With packet
// weights w_i (1 for red1, L_i/M for red4, (L_i/M)^2 for red5) the law is
//
//   P[N = n] = p_b * w_n   while  sum_{i<=n} w_i <= 1/p_b,  0 beyond,
//
// with the leftover probability landing on the first index that violates the
// cumulative condition. red1's case is the uniform law: mass p_b on
// n = 1..floor(1/p_b). exhaustive_interdrop() recomputes the same laws by
// walking the decision process and multiplying survival probabilities; it is
// the brute-force oracle the closed forms are tested against.
#ifndef REDSIM_DROP_LAW_HPP
#define REDSIM_DROP_LAW_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "redsim/random.hpp"
#include "redsim/red.hpp"

namespace redsim {

// Probability mass function on positive integers, ascending support.
struct Pmf {
    std::vector<std::pair<std::uint64_t, double>> mass;

    void add(std::uint64_t n, double m) { mass.emplace_back(n, m); }
    double at(std::uint64_t n) const;
    double total() const;
    std::uint64_t max_n() const { return mass.empty() ? 0 : mass.back().first; }
};

// Largest pointwise |a - b| over the union support.
double max_abs_diff(const Pmf& a, const Pmf& b);

// Total-variation distance: 0.5 * sum |a - b| over the union support.
double total_variation(const Pmf& a, const Pmf& b);

struct DropLawInput {
    double p_b = 0.1;            // frozen temporary drop probability, in (0, 1)
    std::vector<double> sizes;   // packet sizes, cycled periodically
    double max_pkt = 1500.0;     // M

    void validate() const; // throws std::invalid_argument
};

// Closed forms.
Pmf red1_interdrop_pmf(double p_b);
Pmf red4_interdrop_pmf(const DropLawInput& input);
Pmf red5_interdrop_pmf(const DropLawInput& input);

// Exact pmf by walking the count process with frozen p_b: survival/drop
// probabilities multiplied arrival by arrival. horizon == 0 runs until the
// survival probability hits zero (the support of these laws is finite).
Pmf exhaustive_interdrop(RedVariant variant, double p_b, std::span<const double> sizes,
                         double max_pkt, std::uint64_t horizon = 0);

// Empirical pmf from n_samples simulated inter-drop intervals.
Pmf sample_interdrop(RedVariant variant, double p_b, std::span<const double> sizes,
                     double max_pkt, RandomStream& stream, std::uint64_t n_samples);

struct GoodputModel {
    double constant = 1.0; // C
    double mss = 1460.0;   // bytes
    double rtt = 0.1;      // seconds
    double p = 0.01;       // drop probability
};

// MSS * C / (RTT * sqrt(p)), in bytes/second. p must be positive.
double goodput_bound(const GoodputModel& model);

// Drop probability the second connection needs for equal goodput at equal
// RTT: p_b = p_a * (mss_b / mss_a)^2.
double fairness_required_p(double mss_a, double mss_b, double p_a);

// CSV with columns n,closed_form_mass,oracle_mass,empirical_mass over the
// union support (0 for masses absent from a pmf).
void write_law_csv(std::ostream& os, const Pmf& closed_form, const Pmf& oracle,
                   const Pmf& empirical);

} // namespace redsim

#endif
