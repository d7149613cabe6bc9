#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace leakaudit {

// splitmix64 finalizer. Fixed constants, bit-identical on every platform.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// FNV-1a over bytes, used to fold strings into seed material.
constexpr std::uint64_t fnv1a64(std::string_view s,
                                std::uint64_t basis = 0xcbf29ce484222325ULL) {
    std::uint64_t h = basis;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Deterministic PRNG (splitmix64 stream). We avoid std::shuffle and the
// std distributions: their outputs are implementation-defined, and cohort
// membership has to be reproducible byte-for-byte across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform integer in [0, bound) by rejection; bound > 0.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        std::uint64_t v = next();
        while (v >= limit) v = next();
        return v % bound;
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return uniform() < p; }

    // Fisher-Yates, descending index order.
    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::uint64_t state_;
};

// All randomness in a run flows from one global seed through this
// derivation, so partial reruns of a pairing match the full run.
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view module,
                                 std::string_view a = {}, std::string_view b = {}) {
    std::uint64_t h = mix64(seed);
    h = mix64(h ^ fnv1a64(module));
    if (!a.empty()) h = mix64(h ^ fnv1a64(a));
    if (!b.empty()) h = mix64(h ^ fnv1a64(b));
    return h;
}

}  // namespace leakaudit
