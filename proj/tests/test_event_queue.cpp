#include <doctest.h>

#include <algorithm>
#include <utility>
#include <vector>

#include "redsim/event_queue.hpp"
#include "redsim/random.hpp"

using namespace redsim;

TEST_CASE("empty queue run advances the clock") {
    EventQueue q;
    CHECK(q.run_until(10.0) == 0);
    CHECK(q.now() == 10.0);
}

TEST_CASE("zero-delay event dispatches before later events") {
    EventQueue q;
    std::vector<int> order;
    q.schedule_at(1.0, [&] { order.push_back(1); });
    q.schedule_at(0.0, [&] { order.push_back(0); });
    q.run_until(2.0);
    CHECK(order == std::vector<int>{0, 1});
}

TEST_CASE("equal fire times dispatch in scheduling order") {
    EventQueue q;
    std::vector<int> order;
    for (int i = 0; i < 8; ++i) q.schedule_at(5.0, [&, i] { order.push_back(i); });
    q.run_until(5.0);
    CHECK(order == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7});
}

TEST_CASE("scheduling in the past throws") {
    EventQueue q;
    q.schedule_at(1.0, [] {});
    q.run_until(1.0);
    CHECK_THROWS_AS(q.schedule_at(0.5, [] {}), std::logic_error);
}

TEST_CASE("run_until boundary is inclusive") {
    EventQueue q;
    int fired = 0;
    q.schedule_at(1.0, [&] { ++fired; });
    q.schedule_at(2.0, [&] { ++fired; });
    q.schedule_at(3.0, [&] { ++fired; });
    CHECK(q.run_until(2.0) == 2);
    CHECK(fired == 2);
    CHECK(q.now() == 2.0);
}

// Randomized stress: events scheduled up-front and from inside callbacks must
// come out in exactly the (time, sequence) order a reference sort produces.
TEST_CASE("interleaved scheduling preserves global time order") {
    EventQueue q;
    RandomStream rng(42);
    std::vector<std::pair<double, int>> dispatched;
    int next_id = 0;

    std::function<void(double, int)> fire = [&](double t, int depth) {
        dispatched.emplace_back(t, next_id);
        if (depth < 3) {
            for (int k = 0; k < 2; ++k) {
                const double dt = rng.uniform(0.0, 5.0);
                const int id = ++next_id;
                q.schedule_at(t + dt, [&fire, t, dt, depth, id] { (void)id; fire(t + dt, depth + 1); });
            }
        }
    };
    for (int i = 0; i < 50; ++i) {
        const double t = rng.uniform(0.0, 10.0);
        q.schedule_at(t, [&fire, t] { fire(t, 0); });
    }
    q.run_until(1e9);

    std::vector<double> times;
    times.reserve(dispatched.size());
    for (auto& [t, id] : dispatched) times.push_back(t);
    CHECK(std::is_sorted(times.begin(), times.end()));
    CHECK(dispatched.size() > 50);
    CHECK(q.empty());
}

TEST_CASE("run_all stops at the hard cap with events pending") {
    EventQueue q;
    int fired = 0;
    q.schedule_at(1.0, [&] { ++fired; });
    q.schedule_at(100.0, [&] { ++fired; });
    q.run_all(10.0);
    CHECK(fired == 1);
    CHECK_FALSE(q.empty());
    CHECK(q.now() == 10.0);
}
