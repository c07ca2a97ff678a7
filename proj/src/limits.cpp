#include "anuca/limits.hpp"

#include <cstdlib>

namespace anuca {

std::uint64_t default_pattern_cap() {
    if (const char* env = std::getenv("ANUCA_CAP")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v > 0) return v;
        throw Error("ANUCA_CAP must be a positive integer, got '" + std::string(env) + "'");
    }
    return 1ull << 24;
}

Limits::Limits() : pattern_cap(default_pattern_cap()), table_cap(1ull << 24) {}

}  // namespace anuca
