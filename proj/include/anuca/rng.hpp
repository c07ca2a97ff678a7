#pragma once

#include <cstdint>
#include <span>

#include "anuca/geometry.hpp"

namespace anuca {

// splitmix64. Standard-library distributions are not pinned across
// implementations, so all sampling that feeds reports goes through this.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in [0, n) by rejection
    std::uint64_t below(std::uint64_t n) {
        std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do {
            v = next();
        } while (v >= limit);
        return v % n;
    }

    Coord range(Coord lo, Coord hi) {  // inclusive
        return lo + static_cast<Coord>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

private:
    std::uint64_t state_;
};

// Stable seed derivation so per-item sampling is independent of loop order.
std::uint64_t derive_seed(std::uint64_t base, std::span<const std::uint64_t> words);
std::uint64_t derive_seed(std::uint64_t base, const Cell& cell, std::uint64_t extra);

// FNV-1a over bytes; used for config hashes and certificate digests.
std::uint64_t fnv1a(std::span<const std::uint8_t> bytes, std::uint64_t h = 0xcbf29ce484222325ull);
std::uint64_t fnv1a_str(const std::string& s);

}  // namespace anuca
