#include "redsim/metrics.hpp"

#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace redsim {

namespace {

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

} // namespace

double window_plr(std::span<const FlowLedger> group) {
    std::uint64_t arrivals = 0, drops = 0;
    for (const auto& f : group) {
        arrivals += f.win_arrivals;
        drops += f.win_drops;
    }
    if (arrivals == 0) throw std::runtime_error("plr: no packet arrivals in the window");
    return static_cast<double>(drops) / static_cast<double>(arrivals);
}

double window_forced_plr(std::span<const FlowLedger> group) {
    std::uint64_t arrivals = 0, forced = 0;
    for (const auto& f : group) {
        arrivals += f.win_arrivals;
        forced += f.win_drops_forced;
    }
    if (arrivals == 0) throw std::runtime_error("plr: no packet arrivals in the window");
    return static_cast<double>(forced) / static_cast<double>(arrivals);
}

double window_goodput_bps(std::span<const FlowLedger> group, double window_seconds) {
    if (!(window_seconds > 0.0)) throw std::invalid_argument("goodput: window must be positive");
    double bytes = 0.0;
    for (const auto& f : group)
        bytes += static_cast<double>(f.acked_at_window_end - f.acked_at_window_start);
    return bytes * 8.0 / window_seconds;
}

GroupStats make_group_stats(int group_id, double mtu, std::span<const FlowLedger> group,
                            double window_seconds) {
    GroupStats g;
    g.group_id = group_id;
    g.mtu = mtu;
    g.plr = window_plr(group);
    g.plr_forced = window_forced_plr(group);
    g.goodput_bps = window_goodput_bps(group, window_seconds);
    for (const auto& f : group) {
        g.pkts_sent += f.win_arrivals;
        g.pkts_dropped += f.win_drops;
    }
    return g;
}

void audit_conservation(std::span<const FlowLedger> flows) {
    for (const auto& f : flows) {
        if (f.pkts_sent != f.pkts_dropped + f.pkts_delivered) {
            throw std::runtime_error(
                "conservation violated on flow " + std::to_string(f.flow_id) + ": sent=" +
                std::to_string(f.pkts_sent) + " dropped=" + std::to_string(f.pkts_dropped) +
                " delivered=" + std::to_string(f.pkts_delivered));
        }
    }
}

void write_metrics_csv_header(std::ostream& os) {
    os << "scenario_id,seed,variant,delay_profile,group_mtu,plr,plr_forced,goodput_bps,"
          "pkts_sent,pkts_dropped\n";
}

void write_metrics_csv_rows(std::ostream& os, const std::string& scenario_id, std::uint64_t seed,
                            const std::string& variant, const std::string& delay_profile,
                            std::span<const GroupStats> groups) {
    char buf[256];
    for (const auto& g : groups) {
        std::snprintf(buf, sizeof buf, "%s,%llu,%s,%s,%.0f,%.6f,%.6f,%.3f,%llu,%llu\n",
                      scenario_id.c_str(), static_cast<unsigned long long>(seed), variant.c_str(),
                      delay_profile.c_str(), g.mtu, g.plr, g.plr_forced, g.goodput_bps,
                      static_cast<unsigned long long>(g.pkts_sent),
                      static_cast<unsigned long long>(g.pkts_dropped));
        os << buf;
    }
}

void write_queue_trace_csv(std::ostream& os, std::span<const QueueTraceSample> samples) {
    os << "time,q_bytes,avg_bytes\n";
    char buf[128];
    for (const auto& s : samples) {
        std::snprintf(buf, sizeof buf, "%.4f,%.1f,%.3f\n", s.t, s.q_bytes, s.avg_bytes);
        os << buf;
    }
}

std::string render_summary_text(std::span<const SummarySection> sections) {
    std::ostringstream os;
    for (const auto& sec : sections) {
        os << "== " << sec.delay_label << " ==\n";
        os << "            ";
        for (const auto& v : sec.variant_labels) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%10s", v.c_str());
            os << buf;
        }
        os << "\nPLR (%)\n";
        for (std::size_t r = 0; r < sec.mtus.size(); ++r) {
            char head[32];
            std::snprintf(head, sizeof head, "  mtu %-6.0f", sec.mtus[r]);
            os << head;
            for (std::size_t c = 0; c < sec.cells.size(); ++c)
                os << fmt("%10.2f", 100.0 * sec.cells[c][r].plr);
            os << "\n";
        }
        os << "Goodput (Mbit/s)\n";
        std::vector<double> sums(sec.cells.size(), 0.0);
        for (std::size_t r = 0; r < sec.mtus.size(); ++r) {
            char head[32];
            std::snprintf(head, sizeof head, "  mtu %-6.0f", sec.mtus[r]);
            os << head;
            for (std::size_t c = 0; c < sec.cells.size(); ++c) {
                const double mbps = sec.cells[c][r].goodput_bps / 1e6;
                sums[c] += mbps;
                os << fmt("%10.2f", mbps);
            }
            os << "\n";
        }
        os << "  sum       ";
        for (double s : sums) os << fmt("%10.2f", s);
        os << "\n\n";
    }
    return os.str();
}

std::string render_summary_csv(std::span<const SummarySection> sections) {
    std::ostringstream os;
    os << "delay_profile,block,row,";
    if (!sections.empty()) {
        for (std::size_t c = 0; c < sections[0].variant_labels.size(); ++c) {
            os << sections[0].variant_labels[c];
            os << (c + 1 < sections[0].variant_labels.size() ? ',' : '\n');
        }
    } else {
        os << "\n";
    }
    for (const auto& sec : sections) {
        for (std::size_t r = 0; r < sec.mtus.size(); ++r) {
            os << sec.delay_label << ",plr,mtu_" << fmt("%.0f", sec.mtus[r]) << ",";
            for (std::size_t c = 0; c < sec.cells.size(); ++c)
                os << fmt("%.6f", sec.cells[c][r].plr) << (c + 1 < sec.cells.size() ? "," : "\n");
        }
        std::vector<double> sums(sec.cells.size(), 0.0);
        for (std::size_t r = 0; r < sec.mtus.size(); ++r) {
            os << sec.delay_label << ",goodput_bps,mtu_" << fmt("%.0f", sec.mtus[r]) << ",";
            for (std::size_t c = 0; c < sec.cells.size(); ++c) {
                sums[c] += sec.cells[c][r].goodput_bps;
                os << fmt("%.3f", sec.cells[c][r].goodput_bps)
                   << (c + 1 < sec.cells.size() ? "," : "\n");
            }
        }
        os << sec.delay_label << ",goodput_bps,sum,";
        for (std::size_t c = 0; c < sums.size(); ++c)
            os << fmt("%.3f", sums[c]) << (c + 1 < sums.size() ? "," : "\n");
    }
    return os.str();
}

} // namespace redsim
