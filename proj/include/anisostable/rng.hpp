#ifndef ANISOSTABLE_RNG_HPP
#define ANISOSTABLE_RNG_HPP

#include <cmath>
#include <cstdint>

namespace astab {

// Counter-based generator: the output stream is mix(key + n * GOLDEN) for
// n = 1, 2, ...  (SplitMix64 finalizer).  Streams for distinct replicas are
// keyed independently, so replica r of a run is reproducible in isolation
// and parallel runs merge order-independently.
class CounterRng {
  public:
    CounterRng(std::uint64_t seed, std::uint64_t replica = 0)
        : key_(mix(seed ^ mix(replica * 0xD1B54A32D192ED03ULL + 0x9E3779B97F4A7C15ULL))),
          counter_(0) {}

    std::uint64_t next_u64() {
        counter_ += 0x9E3779B97F4A7C15ULL;
        return mix(key_ + counter_);
    }

    // uniform in [0, 1)
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform in (0, 1)
    double next_open() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double next_exponential() { return -std::log(next_open()); }

    // uniform in (-pi/2, pi/2)
    double next_half_angle() { return M_PI * (next_open() - 0.5); }

    // uniform in [0, 2*pi)
    double next_full_angle() { return 2.0 * M_PI * next_double(); }

    std::uint64_t next_below(std::uint64_t bound) { return next_u64() % bound; }

  private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::uint64_t counter_;
};

} // namespace astab

#endif
