// Variant x delay-profile grid runner. Every cell derives its seed from the
// base seed plus a stable hash of the cell label, so adding cells never
// changes existing cells' results. Cells may run on worker threads (one
// simulation instance per worker); the combined report is assembled in grid
// order, identical for serial and parallel execution.
#ifndef REDSIM_SWEEP_HPP
#define REDSIM_SWEEP_HPP

#include <span>
#include <string>
#include <vector>

#include "redsim/network.hpp"
#include "redsim/scenario.hpp"

namespace redsim {

struct SweepCell {
    std::string label;       // "<variant>_<delay label>"
    std::string delay_label; // e.g. "d15ms"
    Scenario scenario;       // resolved: variant, delay, and seed applied
};

struct SweepResult {
    std::vector<SweepCell> cells;
    std::vector<RunResult> runs; // aligned with cells
    std::string combined_text;   // per-MTU loss/goodput table, one section per delay
    std::string combined_csv;    // same numbers, machine readable
    std::string metrics_csv;     // stacked per-cell metrics rows
};

std::string delay_label(double delay_seconds);

std::vector<SweepCell> make_sweep_grid(const Scenario& base, std::span<const RedVariant> variants,
                                       std::span<const double> delays);

// jobs <= 1 runs serially. Any cell failure propagates as an exception
// naming the cell.
SweepResult run_sweep(const Scenario& base, std::span<const RedVariant> variants,
                      std::span<const double> delays, int jobs);

} // namespace redsim

#endif
