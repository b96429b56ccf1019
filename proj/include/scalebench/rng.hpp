#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace scalebench {

/// SplitMix64 finalizer. Used to decorrelate derived seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// FNV-1a, stable across platforms and runs (unlike std::hash).
constexpr std::uint64_t stable_hash(std::string_view text) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Seed for one (dataset, fold, model) cell of the experiment grid.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::string_view dataset, int fold,
                                    std::string_view model) noexcept {
    std::uint64_t s = splitmix64(master);
    s = splitmix64(s ^ stable_hash(dataset));
    s = splitmix64(s ^ static_cast<std::uint64_t>(fold));
    s = splitmix64(s ^ stable_hash(model));
    return s;
}

/// Seed for the index-th member of an ensemble trained with `seed`.
constexpr std::uint64_t member_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    return splitmix64(seed ^ index);
}

/// Deterministic random source. The engine is fully specified by the
/// standard; the sampling helpers avoid std distributions, whose output is
/// implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t uniform_index(std::uint64_t n) {
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % n;
        std::uint64_t v = engine_();
        while (v >= limit) v = engine_();
        return v % n;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    template <typename T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(uniform_index(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace scalebench
