// Scenario description and its plain-text key=value file format.
//
// Sections and keys (missing keys fall back to the defaults below, unknown
// keys are rejected with the offending line number):
//
//   [topology] groups = 20@1500, 20@750, 20@375   # flow_count@mtu list
//              bottleneck_rate = 30e6              # bits/s
//              bottleneck_delay = 0.015            # s, one-way
//              access_rate = 100e6                 # bits/s, per-flow link
//              access_delay_jitter = 0.001         # s, per-flow max jitter
//   [red]      variant = red1                      # red1..red5
//              w_q = 0.002
//              min_th = 90000                      # bytes
//              max_th = 270000                     # bytes
//              max_p = 0.02
//              capacity = 540000                   # bytes
//              M = 1500                            # max packet size, bytes
//   [run]      id = name                           # defaults to the file stem
//              duration = 200                      # s
//              warmup = 20                         # s, excluded from metrics
//              seed = 1
//   [output]   directory = out
//              queue_trace = false
//
// '#' starts a comment. Flow start times are staggered uniformly over the
// first second; each flow draws its access jitter once.
#ifndef REDSIM_SCENARIO_HPP
#define REDSIM_SCENARIO_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "redsim/red.hpp"
#include "redsim/tcp.hpp"

namespace redsim {

struct GroupSpec {
    int flow_count = 0;
    double mtu = 0.0; // bytes on the wire per data packet
};

struct Scenario {
    std::string name = "scenario";

    std::vector<GroupSpec> groups{{20, 1500.0}, {20, 750.0}, {20, 375.0}};
    double bottleneck_rate = 30e6;
    double bottleneck_delay = 0.015;
    double access_rate = 100e6;
    double access_delay_jitter = 0.001;

    RedVariant variant = RedVariant::Red1;
    RedParams red; // defaults from red.hpp

    double duration = 200.0;
    double warmup = 20.0;
    std::uint64_t seed = 1;

    std::string output_dir = "out";
    bool queue_trace = false;

    int total_flows() const;
    void validate() const; // throws std::invalid_argument with a field name
};

// Parse errors carry "<name>:<line>: message".
struct ScenarioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Scenario parse_scenario_text(std::string_view text, std::string_view name);
Scenario parse_scenario_file(const std::string& path);

// Fully resolved scenario file body; parsing it back yields the same
// scenario. Used as the reproducible run manifest.
std::string render_scenario_file(const Scenario& sc);

// Exact-round-trip decimal rendering of a double (shortest of %.15g/16g/17g).
std::string format_double(double v);

} // namespace redsim

#endif
