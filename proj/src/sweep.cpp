#include "redsim/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace redsim {

std::string delay_label(double delay_seconds) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "d%gms", delay_seconds * 1000.0);
    return buf;
}

std::vector<SweepCell> make_sweep_grid(const Scenario& base, std::span<const RedVariant> variants,
                                       std::span<const double> delays) {
    if (variants.empty()) throw std::invalid_argument("sweep: variant list is empty");
    if (delays.empty()) throw std::invalid_argument("sweep: delay list is empty");

    std::vector<SweepCell> cells;
    for (double d : delays) {
        for (RedVariant v : variants) {
            SweepCell cell;
            cell.delay_label = delay_label(d);
            cell.label = std::string(to_string(v)) + "_" + cell.delay_label;
            cell.scenario = base;
            cell.scenario.name = cell.label;
            cell.scenario.variant = v;
            cell.scenario.bottleneck_delay = d;
            cell.scenario.seed = base.seed + fnv1a64(cell.label);
            cell.scenario.validate();
            cells.push_back(std::move(cell));
        }
    }
    return cells;
}

SweepResult run_sweep(const Scenario& base, std::span<const RedVariant> variants,
                      std::span<const double> delays, int jobs) {
    SweepResult result;
    result.cells = make_sweep_grid(base, variants, delays);
    result.runs.resize(result.cells.size());

    std::vector<std::string> errors(result.cells.size());
    auto run_cell = [&](std::size_t i) {
        try {
            Simulation sim(result.cells[i].scenario);
            result.runs[i] = sim.run();
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    };

    if (jobs <= 1) {
        for (std::size_t i = 0; i < result.cells.size(); ++i) run_cell(i);
    } else {
        std::atomic<std::size_t> next{0};
        const int workers = std::min<int>(jobs, static_cast<int>(result.cells.size()));
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= result.cells.size()) return;
                    run_cell(i);
                }
            });
        }
        for (auto& t : pool) t.join();
    }

    for (std::size_t i = 0; i < result.cells.size(); ++i) {
        if (!errors[i].empty()) {
            throw std::runtime_error("sweep cell '" + result.cells[i].label +
                                     "' failed: " + errors[i]);
        }
    }

    // Combined report, grid order: one section per delay, one column per variant.
    std::vector<SummarySection> sections;
    std::size_t idx = 0;
    for (double d : delays) {
        SummarySection sec;
        sec.delay_label = delay_label(d);
        // Rows ascending by MTU.
        std::vector<std::pair<double, std::size_t>> order;
        for (std::size_t g = 0; g < base.groups.size(); ++g)
            order.emplace_back(base.groups[g].mtu, g);
        std::sort(order.begin(), order.end());
        for (const auto& [mtu, g] : order) sec.mtus.push_back(mtu);

        for (std::size_t v = 0; v < variants.size(); ++v, ++idx) {
            sec.variant_labels.emplace_back(to_string(variants[v]));
            std::vector<GroupStats> column;
            for (const auto& [mtu, g] : order) column.push_back(result.runs[idx].groups[g]);
            sec.cells.push_back(std::move(column));
        }
        sections.push_back(std::move(sec));
    }
    result.combined_text = render_summary_text(sections);
    result.combined_csv = render_summary_csv(sections);

    std::ostringstream metrics;
    write_metrics_csv_header(metrics);
    for (std::size_t i = 0; i < result.cells.size(); ++i) {
        const SweepCell& cell = result.cells[i];
        write_metrics_csv_rows(metrics, cell.label, cell.scenario.seed,
                               to_string(cell.scenario.variant), cell.delay_label,
                               result.runs[i].groups);
    }
    result.metrics_csv = metrics.str();
    return result;
}

} // namespace redsim
