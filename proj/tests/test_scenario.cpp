#include <doctest.h>

#include <string>

#include "redsim/scenario.hpp"

using namespace redsim;

TEST_CASE("empty text yields the documented defaults") {
    const Scenario sc = parse_scenario_text("", "defaults");
    CHECK(sc.name == "defaults");
    REQUIRE(sc.groups.size() == 3);
    CHECK(sc.groups[0].flow_count == 20);
    CHECK(sc.groups[0].mtu == 1500.0);
    CHECK(sc.groups[2].mtu == 375.0);
    CHECK(sc.bottleneck_rate == 30e6);
    CHECK(sc.bottleneck_delay == 0.015);
    CHECK(sc.duration == 200.0);
    CHECK(sc.warmup == 20.0);
    CHECK(sc.variant == RedVariant::Red1);
}

TEST_CASE("keys override defaults") {
    const char* text =
        "[topology]\n"
        "groups = 5@1500, 3@375\n"
        "bottleneck_delay = 0.08\n"
        "[red]\n"
        "variant = red5\n"
        "max_p = 0.05\n"
        "[run]\n"
        "duration = 50\n"
        "warmup = 5\n"
        "seed = 99\n"
        "[output]\n"
        "queue_trace = true\n";
    const Scenario sc = parse_scenario_text(text, "t");
    REQUIRE(sc.groups.size() == 2);
    CHECK(sc.groups[1].flow_count == 3);
    CHECK(sc.groups[1].mtu == 375.0);
    CHECK(sc.bottleneck_delay == 0.08);
    CHECK(sc.variant == RedVariant::Red5);
    CHECK(sc.red.max_p == 0.05);
    CHECK(sc.seed == 99);
    CHECK(sc.queue_trace);
}

TEST_CASE("unknown keys are rejected with the line number") {
    const char* text = "[red]\nvariant = red1\nbogus_key = 3\n";
    try {
        parse_scenario_text(text, "bad.scn");
        FAIL("expected ScenarioError");
    } catch (const ScenarioError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("bad.scn:3") != std::string::npos);
        CHECK(msg.find("bogus_key") != std::string::npos);
    }
}

TEST_CASE("malformed input is rejected") {
    CHECK_THROWS_AS(parse_scenario_text("[red\n", "x"), ScenarioError);
    CHECK_THROWS_AS(parse_scenario_text("[red]\nvariant red1\n", "x"), ScenarioError);
    CHECK_THROWS_AS(parse_scenario_text("[red]\nvariant = red9\n", "x"), ScenarioError);
    CHECK_THROWS_AS(parse_scenario_text("[nope]\nk = 1\n", "x"), ScenarioError);
    CHECK_THROWS_AS(parse_scenario_text("k = 1\n", "x"), ScenarioError);
    CHECK_THROWS_AS(parse_scenario_text("[topology]\ngroups = 20-1500\n", "x"), ScenarioError);
    CHECK_THROWS_AS(parse_scenario_text("[run]\nduration = abc\n", "x"), ScenarioError);
}

TEST_CASE("validation failures carry the field name") {
    Scenario sc;
    sc.groups.clear();
    CHECK_THROWS_WITH_AS(sc.validate(), doctest::Contains("groups"), std::invalid_argument);

    sc = Scenario{};
    sc.warmup = sc.duration;
    CHECK_THROWS_WITH_AS(sc.validate(), doctest::Contains("warmup"), std::invalid_argument);

    sc = Scenario{};
    sc.groups[0].mtu = sc.red.max_pkt + 1;
    CHECK_THROWS_WITH_AS(sc.validate(), doctest::Contains("mtu"), std::invalid_argument);
}

TEST_CASE("comments and blank lines are ignored") {
    const char* text =
        "# leading comment\n"
        "\n"
        "[run]   # section\n"
        "seed = 7   # trailing\n";
    CHECK(parse_scenario_text(text, "c").seed == 7);
}

TEST_CASE("render and parse round-trip exactly") {
    Scenario sc;
    sc.name = "roundtrip";
    sc.groups = {{7, 1500.0}, {3, 375.0}};
    sc.bottleneck_rate = 30e6;
    sc.bottleneck_delay = 0.015;
    sc.access_delay_jitter = 0.00025;
    sc.variant = RedVariant::Red4;
    sc.red.weight = 0.002;
    sc.red.max_p = 0.1;
    sc.duration = 123.5;
    sc.warmup = 12.25;
    sc.seed = 424242;
    sc.queue_trace = true;

    const std::string text = render_scenario_file(sc);
    const Scenario back = parse_scenario_text(text, "ignored-by-id-key");
    CHECK(back.name == "roundtrip"); // id key survives the round trip
    CHECK(render_scenario_file(back) == text);
    CHECK(back.groups.size() == sc.groups.size());
    CHECK(back.bottleneck_delay == sc.bottleneck_delay);
    CHECK(back.access_delay_jitter == sc.access_delay_jitter);
    CHECK(back.variant == sc.variant);
    CHECK(back.seed == sc.seed);
    CHECK(back.queue_trace == sc.queue_trace);
}

TEST_CASE("format_double round-trips awkward values") {
    for (double v : {0.015, 0.002, 30e6, 0.1, 1.0 / 3.0, 123456789.25}) {
        CHECK(std::stod(format_double(v)) == v);
    }
}
