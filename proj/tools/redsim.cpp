// Command-line front end: run one scenario, sweep the variant x delay grid,
// check the inter-drop laws, or evaluate the goodput/fairness model.
#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "redsim/drop_law.hpp"
#include "redsim/metrics.hpp"
#include "redsim/network.hpp"
#include "redsim/scenario.hpp"
#include "redsim/sweep.hpp"
#include "redsim/version.hpp"

namespace {

using namespace redsim;

std::string resolve_out_dir(const std::string& cli_out, const std::string& scenario_out) {
    if (!cli_out.empty()) return cli_out;
    if (const char* env = std::getenv("REDSIM_OUT"); env && *env) return env;
    return scenario_out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

std::vector<RedVariant> parse_variant_list(const std::string& csv) {
    std::vector<RedVariant> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(red_variant_from_string(item));
    }
    if (out.empty()) throw std::invalid_argument("empty variant list");
    return out;
}

std::vector<double> parse_double_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stod(item));
    }
    if (out.empty()) throw std::invalid_argument("empty list");
    return out;
}

std::string manifest_text(const Scenario& sc, const std::vector<std::string>& artifacts) {
    std::ostringstream os;
    os << "# redsim " << kVersion << " run manifest; re-run with: redsim run <this file>\n";
    os << "# artifacts:";
    for (const auto& a : artifacts) os << " " << a;
    os << "\n\n";
    os << render_scenario_file(sc);
    return os.str();
}

SummarySection single_run_section(const Scenario& sc, const RunResult& res) {
    SummarySection sec;
    sec.delay_label = delay_label(sc.bottleneck_delay);
    sec.variant_labels = {to_string(sc.variant)};
    std::vector<std::pair<double, std::size_t>> order;
    for (std::size_t g = 0; g < sc.groups.size(); ++g) order.emplace_back(sc.groups[g].mtu, g);
    std::sort(order.begin(), order.end());
    std::vector<GroupStats> column;
    for (const auto& [mtu, g] : order) {
        sec.mtus.push_back(mtu);
        column.push_back(res.groups[g]);
    }
    sec.cells.push_back(std::move(column));
    return sec;
}

int cmd_run(const std::string& path, const std::string& out_override, std::int64_t seed_override,
            const std::string& variant_override, bool trace_override) {
    Scenario sc = parse_scenario_file(path);
    if (seed_override >= 0) sc.seed = static_cast<std::uint64_t>(seed_override);
    if (!variant_override.empty()) sc.variant = red_variant_from_string(variant_override);
    if (trace_override) sc.queue_trace = true;
    sc.output_dir = resolve_out_dir(out_override, sc.output_dir);
    sc.validate();

    Simulation sim(sc);
    const RunResult res = sim.run();

    std::ostringstream metrics;
    write_metrics_csv_header(metrics);
    write_metrics_csv_rows(metrics, sc.name, sc.seed, to_string(sc.variant),
                           delay_label(sc.bottleneck_delay), res.groups);

    const SummarySection sec = single_run_section(sc, res);
    const std::string summary_text = render_summary_text({&sec, 1});
    const std::string summary_csv = render_summary_csv({&sec, 1});

    std::vector<std::string> artifacts = {sc.name + "_metrics.csv", sc.name + "_summary.txt",
                                          sc.name + "_summary.csv", sc.name + "_manifest.scn"};
    std::ostringstream trace_csv;
    if (sc.queue_trace) {
        write_queue_trace_csv(trace_csv, res.queue_trace);
        artifacts.push_back(sc.name + "_queue_trace.csv");
    }

    const std::filesystem::path dir(sc.output_dir);
    write_file(dir / (sc.name + "_metrics.csv"), metrics.str());
    write_file(dir / (sc.name + "_summary.txt"), summary_text);
    write_file(dir / (sc.name + "_summary.csv"), summary_csv);
    write_file(dir / (sc.name + "_manifest.scn"), manifest_text(sc, artifacts));
    if (sc.queue_trace) write_file(dir / (sc.name + "_queue_trace.csv"), trace_csv.str());

    std::cout << summary_text;
    std::cout << "wrote " << (dir / (sc.name + "_*")).string() << " (" << res.events_dispatched
              << " events, drained at t=" << format_double(res.drained_at) << ")\n";
    return 0;
}

int cmd_sweep(const std::string& path, const std::string& out_override,
              std::int64_t seed_override, const std::string& variants_csv,
              const std::string& delays_csv, int jobs) {
    Scenario base = parse_scenario_file(path);
    if (seed_override >= 0) base.seed = static_cast<std::uint64_t>(seed_override);
    base.output_dir = resolve_out_dir(out_override, base.output_dir);

    const std::vector<RedVariant> variants = parse_variant_list(variants_csv);
    const std::vector<double> delays = parse_double_list(delays_csv);

    SweepResult sw;
    try {
        sw = run_sweep(base, variants, delays, jobs);
    } catch (const std::exception& e) {
        std::cerr << "sweep aborted, partial results discarded: " << e.what() << "\n";
        return 1;
    }

    const std::filesystem::path dir(base.output_dir);
    write_file(dir / "combined_summary.txt", sw.combined_text);
    write_file(dir / "combined_summary.csv", sw.combined_csv);
    write_file(dir / "combined_metrics.csv", sw.metrics_csv);
    for (std::size_t i = 0; i < sw.cells.size(); ++i) {
        const SweepCell& cell = sw.cells[i];
        std::ostringstream metrics;
        write_metrics_csv_header(metrics);
        write_metrics_csv_rows(metrics, cell.label, cell.scenario.seed,
                               to_string(cell.scenario.variant), cell.delay_label,
                               sw.runs[i].groups);
        write_file(dir / "cells" / (cell.label + "_metrics.csv"), metrics.str());
        write_file(dir / "cells" / (cell.label + "_manifest.scn"),
                   manifest_text(cell.scenario, {cell.label + "_metrics.csv"}));
    }

    std::cout << sw.combined_text;
    std::cout << "wrote " << (dir / "combined_*").string() << " and " << sw.cells.size()
              << " cell files\n";
    return 0;
}

struct OracleStage {
    std::string label;
    double exact_dev = 0.0; // closed form vs exhaustive oracle
    double mc_tv = -1.0;    // monte-carlo total variation, -1 when skipped
};

int cmd_oracle(const std::string& variant_name, double pb, const std::string& sizes_csv,
               std::uint64_t samples, std::uint64_t seed, const std::string& csv_path,
               double tol_exact, double tol_tv) {
    RandomStream stream = RandomStream(seed).substream("oracle");
    std::vector<OracleStage> stages;

    auto check = [&](RedVariant v, double p_b, const std::vector<double>& sizes, double max_pkt,
                     bool monte_carlo) {
        Pmf closed;
        switch (v) {
            case RedVariant::Red1: closed = red1_interdrop_pmf(p_b); break;
            case RedVariant::Red4: closed = red4_interdrop_pmf({p_b, sizes, max_pkt}); break;
            case RedVariant::Red5: closed = red5_interdrop_pmf({p_b, sizes, max_pkt}); break;
            default:
                throw std::invalid_argument(
                    "oracle: no closed form for this variant (use red1, red4 or red5)");
        }
        const Pmf oracle = exhaustive_interdrop(v, p_b, sizes, max_pkt);
        OracleStage st;
        char label[128];
        std::snprintf(label, sizeof label, "%s pb=%-7.4g k=%zu", to_string(v), p_b, sizes.size());
        st.label = label;
        st.exact_dev = max_abs_diff(closed, oracle);
        Pmf empirical;
        if (monte_carlo && samples > 0) {
            empirical = sample_interdrop(v, p_b, sizes, max_pkt, stream, samples);
            st.mc_tv = total_variation(empirical, closed);
        }
        stages.push_back(st);
        return std::make_tuple(closed, oracle, empirical);
    };

    if (!variant_name.empty()) {
        const RedVariant v = red_variant_from_string(variant_name);
        std::vector<double> sizes =
            sizes_csv.empty() ? std::vector<double>{1500.0} : parse_double_list(sizes_csv);
        auto [closed, oracle, empirical] = check(v, pb, sizes, 1500.0, true);
        if (!csv_path.empty()) {
            std::ostringstream os;
            write_law_csv(os, closed, oracle, empirical);
            write_file(csv_path, os.str());
        }
    } else {
        if (!csv_path.empty())
            throw std::invalid_argument("oracle: --csv needs an explicit --variant check");
        // Default battery: uniformity of red1, the mixed-size pattern, then
        // randomized red4/red5 instances against the exhaustive oracle.
        for (double p : {0.5, 0.3, 0.1, 0.02}) check(RedVariant::Red1, p, {1500.0}, 1500.0, true);
        const std::vector<double> mixed{1500.0, 750.0, 375.0};
        check(RedVariant::Red4, 0.1, mixed, 1500.0, true);
        check(RedVariant::Red5, 0.1, mixed, 1500.0, true);
        RandomStream inst = RandomStream(seed).substream("oracle/instances");
        const double palette[] = {375.0, 750.0, 1500.0};
        for (int trial = 0; trial < 100; ++trial) {
            const double p_b = inst.uniform(0.01, 0.5);
            std::vector<double> sizes;
            const int len = 1 + static_cast<int>(inst.uniform(0.0, 8.0));
            for (int i = 0; i < len; ++i)
                sizes.push_back(palette[static_cast<int>(inst.uniform(0.0, 3.0))]);
            check(RedVariant::Red4, p_b, sizes, 1500.0, false);
            check(RedVariant::Red5, p_b, sizes, 1500.0, false);
        }
    }

    double worst_exact = 0.0, worst_tv = 0.0;
    bool any_mc = false;
    for (const auto& st : stages) {
        worst_exact = std::max(worst_exact, st.exact_dev);
        std::printf("%-24s exact_dev=%.3e", st.label.c_str(), st.exact_dev);
        if (st.mc_tv >= 0.0) {
            any_mc = true;
            worst_tv = std::max(worst_tv, st.mc_tv);
            std::printf("  mc_tv=%.4f (n=%llu)", st.mc_tv,
                        static_cast<unsigned long long>(samples));
        }
        std::printf("\n");
    }
    std::printf("max exact deviation: %.3e (tolerance %.1e)\n", worst_exact, tol_exact);
    if (any_mc) std::printf("max monte-carlo TV:  %.4f (tolerance %.3f)\n", worst_tv, tol_tv);

    const bool ok = worst_exact < tol_exact && (!any_mc || worst_tv < tol_tv);
    if (!ok) std::printf("TOLERANCE VIOLATED\n");
    return ok ? 0 : 1;
}

int cmd_goodput_model(double mss, double rtt, double p, double c, const std::string& fair,
                      double p1) {
    if (!fair.empty()) {
        const std::size_t colon = fair.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("--fair expects mss_a:mss_b, e.g. 1500:750");
        const double mss_a = std::stod(fair.substr(0, colon));
        const double mss_b = std::stod(fair.substr(colon + 1));
        if (!(p1 > 0.0)) throw std::invalid_argument("--p1 must be positive");
        const double p2 = fairness_required_p(mss_a, mss_b, p1);
        std::printf("required_p2 %.9g\n", p2);
        return 0;
    }
    const double bound = goodput_bound({c, mss, rtt, p});
    std::printf("goodput_bound_bytes_per_s %.3f\n", bound);
    std::printf("goodput_bound_mbit_per_s %.6f\n", bound * 8.0 / 1e6);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"redsim: packet-level simulator for five RED drop-probability "
                 "variants under mixed packet sizes"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run one scenario file");
    std::string run_path, run_out, run_variant;
    std::int64_t run_seed = -1;
    bool run_trace = false;
    run->add_option("scenario", run_path, "scenario file")->required();
    run->add_option("--out", run_out, "output directory (overrides scenario and REDSIM_OUT)");
    run->add_option("--seed", run_seed, "replace the scenario seed");
    run->add_option("--variant", run_variant, "replace the RED variant (red1..red5)");
    run->add_flag("--trace", run_trace, "record the queue-occupancy trace");

    auto* sweep = app.add_subcommand("sweep", "run the variant x delay grid");
    std::string sweep_path, sweep_out;
    std::string sweep_variants = "red1,red2,red3,red4,red5";
    std::string sweep_delays = "0.015,0.08";
    std::int64_t sweep_seed = -1;
    int sweep_jobs = 1;
    sweep->add_option("scenario", sweep_path, "base scenario file")->required();
    sweep->add_option("--variants", sweep_variants, "comma list of variants");
    sweep->add_option("--delays", sweep_delays, "comma list of bottleneck delays, seconds");
    sweep->add_option("--jobs", sweep_jobs, "worker threads (cells are independent)");
    sweep->add_option("--seed", sweep_seed, "replace the base seed");
    sweep->add_option("--out", sweep_out, "output directory");

    auto* oracle = app.add_subcommand("oracle", "closed form vs exhaustive vs monte-carlo checks");
    std::string oracle_variant, oracle_sizes, oracle_csv;
    double oracle_pb = 0.1;
    std::uint64_t oracle_samples = 1'000'000;
    std::uint64_t oracle_seed = 1;
    double oracle_tol = 1e-12, oracle_tv = 0.005;
    oracle->add_option("--variant", oracle_variant, "single check: red1, red4 or red5");
    oracle->add_option("--pb", oracle_pb, "frozen temporary drop probability");
    oracle->add_option("--sizes", oracle_sizes, "comma list of packet sizes, cycled");
    oracle->add_option("--samples", oracle_samples, "monte-carlo samples (0 skips that stage)");
    oracle->add_option("--seed", oracle_seed, "monte-carlo seed");
    oracle->add_option("--csv", oracle_csv, "write n,closed,oracle,empirical CSV (single check)");
    oracle->add_option("--tolerance", oracle_tol, "max allowed closed-vs-oracle deviation");
    oracle->add_option("--tv-tolerance", oracle_tv, "max allowed monte-carlo TV distance");

    auto* model = app.add_subcommand("goodput-model", "goodput bound and fairness condition");
    double m_mss = 1460.0, m_rtt = 0.1, m_p = 0.01, m_c = 1.0, m_p1 = 0.0;
    std::string m_fair;
    model->add_option("--mss", m_mss, "segment size, bytes");
    model->add_option("--rtt", m_rtt, "round-trip time, seconds");
    model->add_option("--p", m_p, "drop probability");
    model->add_option("--C", m_c, "model constant");
    model->add_option("--fair", m_fair, "mss_a:mss_b pair for the fairness condition");
    model->add_option("--p1", m_p1, "drop probability of the first connection");

    auto* version = app.add_subcommand("version", "print the tool version");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(run_path, run_out, run_seed, run_variant, run_trace);
        if (sweep->parsed())
            return cmd_sweep(sweep_path, sweep_out, sweep_seed, sweep_variants, sweep_delays,
                             sweep_jobs);
        if (oracle->parsed())
            return cmd_oracle(oracle_variant, oracle_pb, oracle_sizes, oracle_samples, oracle_seed,
                              oracle_csv, oracle_tol, oracle_tv);
        if (model->parsed()) return cmd_goodput_model(m_mss, m_rtt, m_p, m_c, m_fair, m_p1);
        if (version->parsed()) {
            std::printf("redsim %s\n", redsim::kVersion);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
