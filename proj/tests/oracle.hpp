#pragma once

// Naive reference evaluator used as an independent oracle in tests. It
// works on sparse cell->symbol maps and recomputes every table index from
// scratch; it shares no evaluation code with the engine.

#include <map>

#include "anuca/rules.hpp"

namespace anuca::testing {

using Sparse = std::map<Cell, Symbol>;

inline Symbol oracle_cell(const RuleConfig& s, const Sparse& x, const Cell& g) {
    std::uint64_t code = 0;
    std::uint64_t place = 1;
    for (const Cell& m : s.memory) {
        auto it = x.find(add_cells(g, m));
        if (it == x.end()) throw Error("oracle: input missing " + format_cell(add_cells(g, m)));
        code += place * it->second;
        place *= static_cast<std::uint64_t>(s.alphabet);
    }
    return s.rule_at(g).table[code];
}

inline Sparse oracle_window(const RuleConfig& s, const CellSet& window, const Sparse& x) {
    Sparse out;
    for (const Cell& g : window) out[g] = oracle_cell(s, x, g);
    return out;
}

inline Sparse sparse_of(const Pattern& p) {
    Sparse m;
    for (std::size_t i = 0; i < p.support.size(); ++i) m[p.support[i]] = p.symbols[i];
    return m;
}

inline Pattern pattern_of(const CellSet& support, const Sparse& m) {
    std::vector<Symbol> symbols;
    for (const Cell& c : support) symbols.push_back(m.at(c));
    return Pattern{support, std::move(symbols)};
}

}  // namespace anuca::testing
