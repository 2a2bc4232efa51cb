// Seeded pseudo-random stream with splittable substreams.
//
// Generator: xoshiro256++ (Blackman/Vigna), state seeded through SplitMix64.
// Both algorithms are fixed here in plain integer arithmetic, so a given
// seed yields the same sequence on every platform. Substreams are derived
// from the parent's seed and a label, never from its current state: drawing
// more numbers from one component cannot perturb another component's stream.
#ifndef REDSIM_RANDOM_HPP
#define REDSIM_RANDOM_HPP

#include <array>
#include <cstdint>
#include <string_view>

namespace redsim {

// 64-bit FNV-1a; used to fold substream labels into seeds.
std::uint64_t fnv1a64(std::string_view text);

class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t next_u64();

    // Uniform in [0, 1), 53-bit resolution.
    double next_uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_uniform(); }

    // Independent child stream identified by label.
    RandomStream substream(std::string_view label) const;

  private:
    std::uint64_t seed_;
    std::array<std::uint64_t, 4> state_;
};

} // namespace redsim

#endif
