#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "anuca/geometry.hpp"

namespace anuca {

using Symbol = std::uint8_t;

// Finite symbol assignment over a cell set. symbols[i] belongs to support[i]
// in the canonical order of the support.
struct Pattern {
    CellSet support;
    std::vector<Symbol> symbols;

    Symbol at(const Cell& c) const;
    bool operator==(const Pattern& other) const = default;
};

// q^n with an overflow check; pattern/table indices must fit in 64 bits.
std::uint64_t pow_checked(std::uint64_t q, std::uint64_t n);
bool pow_fits(std::uint64_t q, std::uint64_t n, std::uint64_t limit);

// Base-q codes over a fixed-length digit vector; digit i is the symbol of
// the i-th cell (or memory offset) and contributes digit * q^i.
std::uint64_t encode_symbols(std::span<const Symbol> symbols, int q);
void decode_symbols(std::uint64_t code, int q, std::span<Symbol> out);

// Advance a digit vector to the next base-q code; returns false on wrap.
bool next_symbols(std::span<Symbol> symbols, int q);

// Tuple-lexicographic enumeration (first cell most significant): search
// loops use this order, so reported witnesses are the lexicographically
// first. Storage codes keep the least-significant-first convention above.
void decode_symbols_lex(std::uint64_t rank, int q, std::span<Symbol> out);
bool next_symbols_lex(std::span<Symbol> symbols, int q);

// Packed text form: one digit character per cell in canonical order.
std::string packed_string(std::span<const Symbol> symbols);
std::vector<Symbol> parse_packed(const std::string& text, int q);

Pattern make_pattern(CellSet support, std::vector<Symbol> symbols, int q);

// Restriction to a subset of the support.
Pattern restrict_pattern(const Pattern& p, const CellSet& sub);

// Pattern over `support` taking p's symbols where defined and `background`
// elsewhere.
Pattern extend_pattern(const Pattern& p, const CellSet& support, Symbol background);

Pattern translate_pattern(const Pattern& p, const Cell& g);

}  // namespace anuca
