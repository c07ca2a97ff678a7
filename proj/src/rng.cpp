#include "anuca/rng.hpp"

namespace anuca {

std::uint64_t derive_seed(std::uint64_t base, std::span<const std::uint64_t> words) {
    std::uint64_t h = 0xcbf29ce484222325ull ^ base;
    for (std::uint64_t w : words) {
        for (int i = 0; i < 8; ++i) {
            h ^= (w >> (8 * i)) & 0xff;
            h *= 0x100000001b3ull;
        }
    }
    return h;
}

std::uint64_t derive_seed(std::uint64_t base, const Cell& cell, std::uint64_t extra) {
    std::vector<std::uint64_t> words;
    words.reserve(cell.size() + 1);
    for (Coord c : cell) words.push_back(static_cast<std::uint64_t>(c));
    words.push_back(extra);
    return derive_seed(base, words);
}

std::uint64_t fnv1a(std::span<const std::uint8_t> bytes, std::uint64_t h) {
    for (std::uint8_t b : bytes) {
        h ^= b;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::uint64_t fnv1a_str(const std::string& s) {
    return fnv1a(std::span<const std::uint8_t>(
        reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
}

}  // namespace anuca
