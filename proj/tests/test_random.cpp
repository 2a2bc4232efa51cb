#include <doctest.h>

#include <vector>

#include "redsim/random.hpp"

using namespace redsim;

TEST_CASE("same seed reproduces the sequence") {
    RandomStream a(123456789), b(123456789);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("uniform outputs stay in [0,1)") {
    RandomStream r(7);
    for (int i = 0; i < 100000; ++i) {
        const double u = r.next_uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("empirical mean of 1e6 draws is near 1/2") {
    RandomStream r(99);
    double sum = 0.0;
    const int n = 1'000'000;
    for (int i = 0; i < n; ++i) sum += r.next_uniform();
    const double mean = sum / n;
    CHECK(mean > 0.499);
    CHECK(mean < 0.501);
}

TEST_CASE("substreams are independent of parent draws") {
    RandomStream parent(2024);
    RandomStream child_before = parent.substream("flow/3");
    for (int i = 0; i < 57; ++i) parent.next_u64(); // consume parent entropy
    RandomStream child_after = parent.substream("flow/3");
    for (int i = 0; i < 100; ++i) CHECK(child_before.next_u64() == child_after.next_u64());
}

TEST_CASE("distinct labels give distinct streams") {
    RandomStream parent(2024);
    RandomStream a = parent.substream("flow/1");
    RandomStream b = parent.substream("flow/2");
    int equal = 0;
    for (int i = 0; i < 64; ++i) equal += a.next_u64() == b.next_u64();
    CHECK(equal == 0);
}
