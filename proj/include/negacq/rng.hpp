#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace negacq {

/// Seeded random source with portable transforms.
///
/// The standard distribution classes are implementation-defined, so every draw
/// here is derived from the raw 64-bit engine output. Identical seeds give
/// identical streams on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform in [0, 1) with 53 bits of resolution.
    double uniform01();
    double uniform(double lo, double hi);
    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n);
    /// Uniform integer in [lo, hi] inclusive.
    std::int64_t between(std::int64_t lo, std::int64_t hi);
    bool bernoulli(double p);
    /// Index drawn proportionally to non-negative weights (at least one positive).
    std::size_t weighted_index(std::span<const double> weights);

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    /// Derives an independent seed from a base seed and a list of stream ids.
    static std::uint64_t derive(std::uint64_t seed, std::initializer_list<std::uint64_t> ids);

private:
    std::mt19937_64 engine_;
};

}  // namespace negacq
