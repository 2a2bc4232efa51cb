#include "redsim/scenario.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace redsim {

int Scenario::total_flows() const {
    int n = 0;
    for (const auto& g : groups) n += g.flow_count;
    return n;
}

void Scenario::validate() const {
    if (groups.empty()) throw std::invalid_argument("topology.groups: at least one group required");
    for (std::size_t i = 0; i < groups.size(); ++i) {
        if (groups[i].flow_count <= 0)
            throw std::invalid_argument("topology.groups[" + std::to_string(i) +
                                        "]: flow count must be positive");
        if (!(groups[i].mtu > kTcpIpHeaderBytes))
            throw std::invalid_argument("topology.groups[" + std::to_string(i) +
                                        "]: mtu must exceed the 40 B header");
        if (groups[i].mtu > red.max_pkt)
            throw std::invalid_argument("topology.groups[" + std::to_string(i) +
                                        "]: mtu exceeds red.M (max packet size)");
    }
    if (!(bottleneck_rate > 0)) throw std::invalid_argument("topology.bottleneck_rate: must be positive");
    if (!(bottleneck_delay > 0)) throw std::invalid_argument("topology.bottleneck_delay: must be positive");
    if (!(access_rate > 0)) throw std::invalid_argument("topology.access_rate: must be positive");
    if (access_delay_jitter < 0)
        throw std::invalid_argument("topology.access_delay_jitter: must be non-negative");
    red.validate();
    if (!(duration > 0)) throw std::invalid_argument("run.duration: must be positive");
    if (!(warmup >= 0 && warmup < duration))
        throw std::invalid_argument("run.warmup: must satisfy 0 <= warmup < duration");
}

std::string format_double(double v) {
    char buf[40];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) return buf;
    }
    return buf;
}

namespace {

struct Cursor {
    std::string_view name;
    int line = 0;
    [[noreturn]] void fail(const std::string& msg) const {
        throw ScenarioError(std::string(name) + ":" + std::to_string(line) + ": " + msg);
    }
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

double parse_number(std::string_view v, const Cursor& at) {
    std::string tmp(v);
    char* end = nullptr;
    const double x = std::strtod(tmp.c_str(), &end);
    if (end == tmp.c_str() || *end != '\0') at.fail("expected a number, got '" + tmp + "'");
    return x;
}

std::uint64_t parse_seed(std::string_view v, const Cursor& at) {
    std::string tmp(v);
    char* end = nullptr;
    const unsigned long long x = std::strtoull(tmp.c_str(), &end, 10);
    if (end == tmp.c_str() || *end != '\0') at.fail("expected an integer seed, got '" + tmp + "'");
    return x;
}

bool parse_bool(std::string_view v, const Cursor& at) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    at.fail("expected a boolean, got '" + std::string(v) + "'");
}

std::vector<GroupSpec> parse_groups(std::string_view v, const Cursor& at) {
    std::vector<GroupSpec> out;
    std::size_t pos = 0;
    while (pos <= v.size()) {
        std::size_t comma = v.find(',', pos);
        if (comma == std::string_view::npos) comma = v.size();
        const std::string_view item = trim(v.substr(pos, comma - pos));
        if (!item.empty()) {
            const std::size_t atpos = item.find('@');
            if (atpos == std::string_view::npos)
                at.fail("group entry '" + std::string(item) + "' is not count@mtu");
            GroupSpec g;
            g.flow_count = static_cast<int>(parse_number(trim(item.substr(0, atpos)), at));
            g.mtu = parse_number(trim(item.substr(atpos + 1)), at);
            out.push_back(g);
        }
        pos = comma + 1;
    }
    if (out.empty()) at.fail("groups list is empty");
    return out;
}

} // namespace

Scenario parse_scenario_text(std::string_view text, std::string_view name) {
    Scenario sc;
    sc.name = std::string(name);

    Cursor at{name, 0};
    std::string section;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view raw = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++at.line;

        const std::size_t hash = raw.find('#');
        if (hash != std::string_view::npos) raw = raw.substr(0, hash);
        const std::string_view line = trim(raw);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') at.fail("unterminated section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (section != "topology" && section != "red" && section != "run" &&
                section != "output")
                at.fail("unknown section [" + section + "]");
            continue;
        }

        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) at.fail("expected key = value");
        const std::string key{trim(line.substr(0, eq))};
        const std::string_view value = trim(line.substr(eq + 1));
        if (section.empty()) at.fail("key '" + key + "' outside any section");

        if (section == "topology") {
            if (key == "groups") sc.groups = parse_groups(value, at);
            else if (key == "bottleneck_rate") sc.bottleneck_rate = parse_number(value, at);
            else if (key == "bottleneck_delay") sc.bottleneck_delay = parse_number(value, at);
            else if (key == "access_rate") sc.access_rate = parse_number(value, at);
            else if (key == "access_delay_jitter") sc.access_delay_jitter = parse_number(value, at);
            else at.fail("unknown key '" + key + "' in [topology]");
        } else if (section == "red") {
            if (key == "variant") {
                try {
                    sc.variant = red_variant_from_string(value);
                } catch (const std::invalid_argument& e) {
                    at.fail(e.what());
                }
            } else if (key == "w_q") sc.red.weight = parse_number(value, at);
            else if (key == "min_th") sc.red.min_th = parse_number(value, at);
            else if (key == "max_th") sc.red.max_th = parse_number(value, at);
            else if (key == "max_p") sc.red.max_p = parse_number(value, at);
            else if (key == "capacity") sc.red.capacity = parse_number(value, at);
            else if (key == "M") sc.red.max_pkt = parse_number(value, at);
            else at.fail("unknown key '" + key + "' in [red]");
        } else if (section == "run") {
            if (key == "duration") sc.duration = parse_number(value, at);
            else if (key == "warmup") sc.warmup = parse_number(value, at);
            else if (key == "seed") sc.seed = parse_seed(value, at);
            else if (key == "id") sc.name = std::string(value);
            else at.fail("unknown key '" + key + "' in [run]");
        } else { // output
            if (key == "directory") sc.output_dir = std::string(value);
            else if (key == "queue_trace") sc.queue_trace = parse_bool(value, at);
            else at.fail("unknown key '" + key + "' in [output]");
        }
    }

    try {
        sc.validate();
    } catch (const std::invalid_argument& e) {
        throw ScenarioError(std::string(name) + ": " + e.what());
    }
    return sc;
}

Scenario parse_scenario_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ScenarioError(path + ": cannot open scenario file");
    std::ostringstream buf;
    buf << in.rdbuf();

    std::string name = path;
    const std::size_t slash = name.find_last_of("/\\");
    if (slash != std::string::npos) name = name.substr(slash + 1);
    const std::size_t dot = name.find_last_of('.');
    if (dot != std::string::npos && dot > 0) name = name.substr(0, dot);
    return parse_scenario_text(buf.str(), name);
}

std::string render_scenario_file(const Scenario& sc) {
    std::ostringstream os;
    os << "[topology]\n";
    os << "groups = ";
    for (std::size_t i = 0; i < sc.groups.size(); ++i) {
        os << sc.groups[i].flow_count << "@" << format_double(sc.groups[i].mtu);
        if (i + 1 < sc.groups.size()) os << ", ";
    }
    os << "\n";
    os << "bottleneck_rate = " << format_double(sc.bottleneck_rate) << "\n";
    os << "bottleneck_delay = " << format_double(sc.bottleneck_delay) << "\n";
    os << "access_rate = " << format_double(sc.access_rate) << "\n";
    os << "access_delay_jitter = " << format_double(sc.access_delay_jitter) << "\n";
    os << "\n[red]\n";
    os << "variant = " << to_string(sc.variant) << "\n";
    os << "w_q = " << format_double(sc.red.weight) << "\n";
    os << "min_th = " << format_double(sc.red.min_th) << "\n";
    os << "max_th = " << format_double(sc.red.max_th) << "\n";
    os << "max_p = " << format_double(sc.red.max_p) << "\n";
    os << "capacity = " << format_double(sc.red.capacity) << "\n";
    os << "M = " << format_double(sc.red.max_pkt) << "\n";
    os << "\n[run]\n";
    os << "id = " << sc.name << "\n";
    os << "duration = " << format_double(sc.duration) << "\n";
    os << "warmup = " << format_double(sc.warmup) << "\n";
    os << "seed = " << sc.seed << "\n";
    os << "\n[output]\n";
    os << "directory = " << sc.output_dir << "\n";
    os << "queue_trace = " << (sc.queue_trace ? "true" : "false") << "\n";
    return os.str();
}

} // namespace redsim
