#include <doctest.h>

#include <sstream>
#include <stdexcept>

#include "redsim/metrics.hpp"
#include "redsim/network.hpp"

using namespace redsim;

namespace {

Scenario small_scenario() {
    Scenario sc;
    sc.name = "small";
    sc.groups = {{4, 1500.0}, {4, 750.0}, {4, 375.0}};
    sc.bottleneck_rate = 10e6;
    sc.bottleneck_delay = 0.01;
    sc.red.weight = 0.002;
    sc.red.min_th = 20000;
    sc.red.max_th = 60000;
    sc.red.max_p = 0.1;
    sc.red.capacity = 120000;
    sc.duration = 20.0;
    sc.warmup = 4.0;
    sc.seed = 11;
    return sc;
}

std::string stats_fingerprint(const RunResult& res) {
    std::ostringstream os;
    write_metrics_csv_header(os);
    write_metrics_csv_rows(os, res.scenario.name, res.scenario.seed,
                           to_string(res.scenario.variant), "x", res.groups);
    return os.str();
}

} // namespace

TEST_CASE("link serialization and FIFO spacing") {
    Link link{30e6, 0.005};
    // 1500 B at 30 Mbit/s serializes in 0.4 ms.
    CHECK(link.serialization(1500.0) == doctest::Approx(0.0004).epsilon(1e-12));
    const SimTime first = link.offer(1.0, 1500.0);
    CHECK(first == doctest::Approx(1.0 + 0.0004 + 0.005));
    // A second packet offered immediately waits for the first.
    const SimTime second = link.offer(1.0, 1500.0);
    CHECK(second - first == doctest::Approx(0.0004));
}

TEST_CASE("topology instantiates one flow per group slot") {
    Scenario sc = small_scenario();
    sc.groups = {{20, 1500.0}, {20, 750.0}, {20, 375.0}};
    sc.duration = 2.0;
    sc.warmup = 0.5;
    Simulation sim(sc);
    const RunResult res = sim.run();
    CHECK(res.flows.size() == 60);
    CHECK(res.groups.size() == 3);
}

TEST_CASE("degenerate single-flow topology runs to completion") {
    Scenario sc = small_scenario();
    sc.groups = {{1, 1500.0}};
    sc.duration = 5.0;
    sc.warmup = 1.0;
    Simulation sim(sc);
    const RunResult res = sim.run();
    CHECK(res.flows.size() == 1);
    CHECK(res.groups[0].goodput_bps > 0.0);
}

TEST_CASE("zero flows are rejected") {
    Scenario sc = small_scenario();
    sc.groups.clear();
    CHECK_THROWS_AS(Simulation{sc}, std::invalid_argument);
    sc.groups = {{0, 1500.0}};
    CHECK_THROWS_AS(Simulation{sc}, std::invalid_argument);
}

// With RED degenerated to drop-tail and ample buffer, a single flow sees no
// loss and fills the link: goodput within 5% of the payload-share bound.
TEST_CASE("lossless single flow saturates the bottleneck") {
    Scenario sc = small_scenario();
    sc.groups = {{1, 1500.0}};
    sc.bottleneck_rate = 30e6;
    sc.red.min_th = sc.red.max_th = sc.red.capacity = 10e6; // drop-tail, never binds
    sc.duration = 12.0;
    sc.warmup = 2.0;
    Simulation sim(sc);
    const RunResult res = sim.run();
    CHECK(res.groups[0].plr == 0.0);
    const double payload_bound = 30e6 * (1460.0 / 1500.0);
    CHECK(res.groups[0].goodput_bps > 0.95 * payload_bound);
    CHECK(res.groups[0].goodput_bps < 1.01 * payload_bound);
}

TEST_CASE("tiny buffer forces drops and the audit still balances") {
    Scenario sc = small_scenario();
    sc.red.min_th = 5000;
    sc.red.max_th = 15000;
    sc.red.capacity = 20000;
    Simulation sim(sc);
    const RunResult res = sim.run(); // run() audits conservation internally
    double forced = 0.0;
    for (const auto& g : res.groups) forced += g.plr_forced;
    CHECK(forced > 0.0);
    std::uint64_t sent = 0, dropped = 0, delivered = 0;
    for (const auto& f : res.flows) {
        sent += f.pkts_sent;
        dropped += f.pkts_dropped;
        delivered += f.pkts_delivered;
    }
    CHECK(sent == dropped + delivered);
    CHECK(dropped > 0);
}

TEST_CASE("runs are a pure function of scenario and seed") {
    Scenario sc = small_scenario();
    Simulation a(sc), b(sc);
    const std::string fa = stats_fingerprint(a.run());
    const std::string fb = stats_fingerprint(b.run());
    CHECK(fa == fb);

    Scenario other = sc;
    other.seed = 12;
    Simulation c(other);
    CHECK(stats_fingerprint(c.run()) != fa);
}

TEST_CASE("queue trace samples strictly increase in time") {
    Scenario sc = small_scenario();
    sc.duration = 6.0;
    sc.warmup = 1.0;
    sc.queue_trace = true;
    Simulation sim(sc);
    const RunResult res = sim.run();
    REQUIRE(res.queue_trace.size() > 10);
    for (std::size_t i = 1; i < res.queue_trace.size(); ++i)
        CHECK(res.queue_trace[i].t > res.queue_trace[i - 1].t);
}

TEST_CASE("mtu above the red maximum packet size is rejected") {
    Scenario sc = small_scenario();
    sc.groups = {{2, 3000.0}};
    CHECK_THROWS_AS(sc.validate(), std::invalid_argument);
}
