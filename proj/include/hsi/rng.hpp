#pragma once

#include <cstdint>
#include <span>
#include <utility>

namespace hsi {

/// Deterministic random generator: xoshiro256** seeded through splitmix64.
///
/// The integer stream is a pure function of the seed and is identical across
/// platforms and runs. `uniform()` maps the top 53 bits to [0,1), `normal()`
/// uses the polar Box-Muller transform on top of `uniform()`. Derived streams
/// (`derived`) mix the stream ids into the seed with splitmix64 so that
/// per-scene / per-epoch generators are independent of evaluation order.
class Rng {
public:
    explicit Rng(uint64_t seed);

    /// Independent stream for (seed, stream, substream), for order-free parallelism.
    static Rng derived(uint64_t seed, uint64_t stream, uint64_t substream = 0);

    uint64_t next_u64();

    /// Uniform in [0,1) with 53-bit resolution.
    double uniform();
    double uniform(double lo, double hi);

    /// Unbiased integer in [0, n), n > 0. Rejection sampling on the top bits.
    uint64_t below(uint64_t n);

    /// Standard normal draw (polar method; second value cached).
    double normal();

    bool bernoulli(double p);

    template <typename T>
    void shuffle(std::span<T> values) {
        for (size_t i = values.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(below(i));
            std::swap(values[i - 1], values[j]);
        }
    }

private:
    uint64_t state_[4];
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

/// One splitmix64 step; exposed because derived seeding is part of the
/// documented generator contract.
uint64_t splitmix64(uint64_t& state);

}  // namespace hsi
