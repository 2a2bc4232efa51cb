#include "redsim/drop_law.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace redsim {

double Pmf::at(std::uint64_t n) const {
    auto it = std::lower_bound(mass.begin(), mass.end(), n,
                               [](const auto& e, std::uint64_t key) { return e.first < key; });
    return (it != mass.end() && it->first == n) ? it->second : 0.0;
}

double Pmf::total() const {
    double t = 0.0;
    for (const auto& [n, m] : mass) t += m;
    return t;
}

namespace {

// f accumulates |a - b| pointwise over the union support.
template <typename F>
void scan_union(const Pmf& a, const Pmf& b, F&& f) {
    std::size_t i = 0, j = 0;
    while (i < a.mass.size() || j < b.mass.size()) {
        const std::uint64_t na = i < a.mass.size() ? a.mass[i].first : UINT64_MAX;
        const std::uint64_t nb = j < b.mass.size() ? b.mass[j].first : UINT64_MAX;
        if (na < nb) {
            f(a.mass[i].second, 0.0);
            ++i;
        } else if (nb < na) {
            f(0.0, b.mass[j].second);
            ++j;
        } else {
            f(a.mass[i].second, b.mass[j].second);
            ++i;
            ++j;
        }
    }
}

// Closed form shared by the three laws: mass p_b * w_n while the cumulative
// weight stays within 1/p_b, leftover mass on the first violating index.
// Weights must be accumulated in arrival order so the boundary test matches
// the oracle's arithmetic exactly.
Pmf weighted_interdrop_pmf(double p_b, std::span<const double> weights) {
    Pmf out;
    double cum = 0.0;
    for (std::uint64_t n = 1;; ++n) {
        const double w = weights[(n - 1) % weights.size()];
        const double cum_next = cum + w;
        if (cum_next * p_b <= 1.0) {
            out.add(n, p_b * w);
            cum = cum_next;
            if (cum * p_b == 1.0) break; // survival exhausted exactly
        } else {
            const double residual = 1.0 - cum * p_b;
            if (residual > 0.0) out.add(n, residual);
            break;
        }
    }
    return out;
}

// Final drop probability for one arrival of the frozen-p_b process.
double step_drop_prob(RedVariant variant, double p_b, double ratio, double count) {
    double numer = p_b;
    double denom_pb = p_b;
    switch (variant) {
        case RedVariant::Red1: break;
        case RedVariant::Red2:
            numer = p_b * ratio;
            denom_pb = numer;
            break;
        case RedVariant::Red3:
        case RedVariant::Red4: numer = p_b * ratio; break;
        case RedVariant::Red5: numer = p_b * ratio * ratio; break;
    }
    const double denom = 1.0 - count * denom_pb;
    if (denom <= 0.0) return 1.0;
    return std::min(numer / denom, 1.0);
}

double step_count_weight(RedVariant variant, double ratio) {
    switch (variant) {
        case RedVariant::Red1:
        case RedVariant::Red2:
        case RedVariant::Red3: return 1.0;
        case RedVariant::Red4: return ratio;
        case RedVariant::Red5: return ratio * ratio;
    }
    return 1.0;
}

} // namespace

double max_abs_diff(const Pmf& a, const Pmf& b) {
    double worst = 0.0;
    scan_union(a, b, [&](double ma, double mb) { worst = std::max(worst, std::fabs(ma - mb)); });
    return worst;
}

double total_variation(const Pmf& a, const Pmf& b) {
    double sum = 0.0;
    scan_union(a, b, [&](double ma, double mb) { sum += std::fabs(ma - mb); });
    return 0.5 * sum;
}

void DropLawInput::validate() const {
    if (!(p_b > 0.0 && p_b < 1.0))
        throw std::invalid_argument("drop law: p_b must be in (0, 1)");
    if (sizes.empty()) throw std::invalid_argument("drop law: size sequence must be non-empty");
    if (!(max_pkt > 0.0)) throw std::invalid_argument("drop law: M must be positive");
    for (double s : sizes) {
        if (!(s > 0.0 && s <= max_pkt))
            throw std::invalid_argument("drop law: every size must be in (0, M]");
    }
}

Pmf red1_interdrop_pmf(double p_b) {
    if (!(p_b > 0.0 && p_b < 1.0))
        throw std::invalid_argument("red1_interdrop_pmf: p_b must be in (0, 1)");
    const double unit = 1.0;
    return weighted_interdrop_pmf(p_b, std::span<const double>(&unit, 1));
}

Pmf red4_interdrop_pmf(const DropLawInput& input) {
    input.validate();
    std::vector<double> w(input.sizes.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = input.sizes[i] / input.max_pkt;
    return weighted_interdrop_pmf(input.p_b, w);
}

Pmf red5_interdrop_pmf(const DropLawInput& input) {
    input.validate();
    std::vector<double> w(input.sizes.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double r = input.sizes[i] / input.max_pkt;
        w[i] = r * r;
    }
    return weighted_interdrop_pmf(input.p_b, w);
}

Pmf exhaustive_interdrop(RedVariant variant, double p_b, std::span<const double> sizes,
                         double max_pkt, std::uint64_t horizon) {
    DropLawInput check{p_b, {sizes.begin(), sizes.end()}, max_pkt};
    check.validate();

    Pmf out;
    double survival = 1.0;
    double count = 0.0;
    // Hard cap against degenerate inputs; the laws' supports are tiny next to it.
    const std::uint64_t cap = horizon != 0 ? horizon : 100'000'000;
    for (std::uint64_t n = 1; n <= cap; ++n) {
        const double ratio = sizes[(n - 1) % sizes.size()] / max_pkt;
        const double p_a = step_drop_prob(variant, p_b, ratio, count);
        const double mass = survival * p_a;
        if (mass > 0.0) out.add(n, mass);
        survival *= 1.0 - p_a;
        if (survival <= 0.0) break;
        count += step_count_weight(variant, ratio); // accepted packet's charge
    }
    return out;
}

Pmf sample_interdrop(RedVariant variant, double p_b, std::span<const double> sizes,
                     double max_pkt, RandomStream& stream, std::uint64_t n_samples) {
    DropLawInput check{p_b, {sizes.begin(), sizes.end()}, max_pkt};
    check.validate();
    if (n_samples == 0) throw std::invalid_argument("sample_interdrop: n_samples must be >= 1");

    std::vector<std::uint64_t> tally;
    for (std::uint64_t s = 0; s < n_samples; ++s) {
        double count = 0.0;
        for (std::uint64_t n = 1;; ++n) {
            const double ratio = sizes[(n - 1) % sizes.size()] / max_pkt;
            const double p_a = step_drop_prob(variant, p_b, ratio, count);
            if (stream.next_uniform() < p_a) {
                if (tally.size() < n) tally.resize(n, 0);
                ++tally[n - 1];
                break;
            }
            count += step_count_weight(variant, ratio);
        }
    }
    Pmf out;
    for (std::size_t i = 0; i < tally.size(); ++i) {
        if (tally[i] != 0)
            out.add(i + 1, static_cast<double>(tally[i]) / static_cast<double>(n_samples));
    }
    return out;
}

double goodput_bound(const GoodputModel& model) {
    if (!(model.constant > 0.0)) throw std::invalid_argument("goodput bound: C must be positive");
    if (!(model.mss > 0.0)) throw std::invalid_argument("goodput bound: MSS must be positive");
    if (!(model.rtt > 0.0)) throw std::invalid_argument("goodput bound: RTT must be positive");
    if (!(model.p > 0.0))
        throw std::invalid_argument("goodput bound: p must be positive (bound is unbounded at 0)");
    return model.mss * model.constant / (model.rtt * std::sqrt(model.p));
}

double fairness_required_p(double mss_a, double mss_b, double p_a) {
    if (!(mss_a > 0.0 && mss_b > 0.0 && p_a > 0.0))
        throw std::invalid_argument("fairness: all arguments must be positive");
    const double r = mss_b / mss_a;
    return p_a * r * r;
}

void write_law_csv(std::ostream& os, const Pmf& closed_form, const Pmf& oracle,
                   const Pmf& empirical) {
    os << "n,closed_form_mass,oracle_mass,empirical_mass\n";
    std::uint64_t last = std::max({closed_form.max_n(), oracle.max_n(), empirical.max_n()});
    char line[160];
    for (std::uint64_t n = 1; n <= last; ++n) {
        const double c = closed_form.at(n), o = oracle.at(n), e = empirical.at(n);
        if (c == 0.0 && o == 0.0 && e == 0.0) continue;
        std::snprintf(line, sizeof line, "%llu,%.12e,%.12e,%.12e\n",
                      static_cast<unsigned long long>(n), c, o, e);
        os << line;
    }
}

} // namespace redsim
