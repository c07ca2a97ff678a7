#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "anuca/geometry.hpp"

namespace anuca {

struct CapExceeded : Error {
    CapExceeded(const std::string& op, std::uint64_t required, std::uint64_t cap)
        : Error(op + ": requires " + std::to_string(required) +
                " entries, cap is " + std::to_string(cap)),
          required(required),
          cap(cap) {}
    std::uint64_t required;
    std::uint64_t cap;
};

// Resource limits threaded through search and materialization calls.
// pattern_cap bounds patterns enumerated per call, table_cap bounds
// materialized rule/periodization tables. ANUCA_CAP overrides the
// enumeration cap.
struct Limits {
    std::uint64_t pattern_cap;
    std::uint64_t table_cap;
    int threads = 1;

    Limits();

    void check_patterns(const std::string& op, std::uint64_t required) const {
        if (required > pattern_cap) throw CapExceeded(op, required, pattern_cap);
    }
    void check_table(const std::string& op, std::uint64_t required) const {
        if (required > table_cap) throw CapExceeded(op, required, table_cap);
    }
};

std::uint64_t default_pattern_cap();

}  // namespace anuca
