#include "anuca/engine.hpp"

#include <algorithm>

#include "anuca/parallel.hpp"

namespace anuca {

namespace {

// Position of c in the canonical cell list of the box.
std::uint64_t box_index(const Box& k, const Cell& c) {
    std::uint64_t idx = 0;
    for (int j = 0; j < k.dim(); ++j) {
        idx = idx * static_cast<std::uint64_t>(k.side(j)) +
              static_cast<std::uint64_t>(c[j] - k.lo()[j]);
    }
    return idx;
}

Symbol eval_cell(std::span<const Symbol> in, const Symbol* table,
                 const std::uint32_t* neighbor, std::size_t mem_size, int q) {
    std::uint64_t code = 0;
    for (std::size_t j = mem_size; j-- > 0;) {
        code = code * static_cast<std::uint64_t>(q) + in[neighbor[j]];
    }
    return table[code];
}

}  // namespace

WindowEvaluator::WindowEvaluator(const RuleConfig& s, CellSet window)
    : window_(std::move(window)),
      domain_(minkowski(window_, s.memory)),
      alphabet_(s.alphabet),
      mem_size_(s.memory.size()) {
    tables_.reserve(window_.size());
    neighbor_.reserve(window_.size() * mem_size_);
    for (const Cell& g : window_) {
        tables_.push_back(s.rule_at(g).table.data());
        for (const Cell& m : s.memory) {
            auto idx = domain_.index_of(add_cells(g, m));
            neighbor_.push_back(static_cast<std::uint32_t>(*idx));
        }
    }
}

void WindowEvaluator::apply(std::span<const Symbol> in, std::span<Symbol> out) const {
    for (std::size_t i = 0; i < tables_.size(); ++i) {
        out[i] = eval_cell(in, tables_[i], neighbor_.data() + i * mem_size_, mem_size_,
                           alphabet_);
    }
}

Pattern apply_window(const RuleConfig& s, const CellSet& window, const Pattern& x) {
    WindowEvaluator ev(s, window);
    if (!(x.support == ev.domain())) {
        throw Error("apply_window: input support must be exactly the window's memory "
                    "domain (" + std::to_string(ev.domain().size()) + " cells, got " +
                    std::to_string(x.support.size()) + ")");
    }
    Pattern out{ev.window(), std::vector<Symbol>(ev.window().size())};
    ev.apply(x.symbols, out.symbols);
    return out;
}

Pattern apply_window_bg(const RuleConfig& s, const CellSet& window, const Pattern& x,
                        Symbol background) {
    WindowEvaluator ev(s, window);
    Pattern in = extend_pattern(x, ev.domain(), background);
    Pattern out{ev.window(), std::vector<Symbol>(ev.window().size())};
    ev.apply(in.symbols, out.symbols);
    return out;
}

Symbol lift_eval(const Pattern& x, const Box& k, const Cell& g) {
    if (x.symbols.size() != k.cell_count()) {
        throw Error("lift_eval: pattern does not cover the box");
    }
    return x.symbols[box_index(k, k.reduce(g))];
}

PeriodicEvaluator::PeriodicEvaluator(const RuleConfig& s, const Box& k)
    : box_(k), cells_(k.cell_set()), alphabet_(s.alphabet), mem_size_(s.memory.size()) {
    tables_.reserve(cells_.size());
    neighbor_.reserve(cells_.size() * mem_size_);
    for (const Cell& g : cells_) {
        tables_.push_back(s.rule_at(g).table.data());
        for (const Cell& m : s.memory) {
            neighbor_.push_back(
                static_cast<std::uint32_t>(box_index(box_, box_.reduce(add_cells(g, m)))));
        }
    }
}

void PeriodicEvaluator::apply(std::span<const Symbol> in, std::span<Symbol> out) const {
    for (std::size_t i = 0; i < tables_.size(); ++i) {
        out[i] = eval_cell(in, tables_[i], neighbor_.data() + i * mem_size_, mem_size_,
                           alphabet_);
    }
}

Pattern apply_periodized(const RuleConfig& s, const Box& k, const Pattern& x) {
    PeriodicEvaluator ev(s, k);
    if (!(x.support == ev.cells())) {
        throw Error("apply_periodized: pattern support must be the box cells");
    }
    Pattern out{ev.cells(), std::vector<Symbol>(ev.cells().size())};
    ev.apply(x.symbols, out.symbols);
    return out;
}

PeriodizedMap materialize_periodized(const RuleConfig& s, const Box& k,
                                     const Limits& limits) {
    std::uint64_t cells = k.cell_count();
    if (!pow_fits(static_cast<std::uint64_t>(s.alphabet), cells, limits.table_cap)) {
        throw CapExceeded("materialize_periodized",
                          pow_fits(s.alphabet, cells, UINT64_MAX / 2)
                              ? pow_checked(s.alphabet, cells)
                              : UINT64_MAX,
                          limits.table_cap);
    }
    PeriodizedMap map{k, s.alphabet,
                      pow_checked(static_cast<std::uint64_t>(s.alphabet), cells),
                      {}};
    map.forward.resize(map.size);
    PeriodicEvaluator ev(s, k);
    parallel_slices(map.size, limits.threads, [&](std::size_t, std::uint64_t begin,
                                                  std::uint64_t end) {
        std::vector<Symbol> in(static_cast<std::size_t>(cells));
        std::vector<Symbol> out(static_cast<std::size_t>(cells));
        decode_symbols(begin, s.alphabet, in);
        for (std::uint64_t code = begin; code < end; ++code) {
            ev.apply(in, out);
            map.forward[code] = encode_symbols(out, s.alphabet);
            next_symbols(in, s.alphabet);
        }
    });
    return map;
}

namespace {

// q(g) = s(g) applied to the per-offset images of t, as a table over the
// composite memory.
LocalRule composite_table(const RuleConfig& s, const RuleConfig& t,
                          const Symbol* s_table, const std::vector<const Symbol*>& t_tables,
                          const CellSet& composite_memory,
                          const std::vector<std::uint32_t>& inner_idx) {
    int q = s.alphabet;
    std::size_t m_size = s.memory.size();
    std::size_t n_size = t.memory.size();
    std::uint64_t entries =
        pow_checked(static_cast<std::uint64_t>(q), composite_memory.size());
    LocalRule out;
    out.table.resize(entries);
    std::vector<Symbol> digits(composite_memory.size(), 0);
    std::vector<Symbol> mid(m_size);
    for (std::uint64_t code = 0; code < entries; ++code) {
        for (std::size_t j = 0; j < m_size; ++j) {
            std::uint64_t inner = 0;
            const std::uint32_t* row = inner_idx.data() + j * n_size;
            for (std::size_t nk = n_size; nk-- > 0;) {
                inner = inner * static_cast<std::uint64_t>(q) + digits[row[nk]];
            }
            mid[j] = t_tables[j][inner];
        }
        out.table[code] = s_table[encode_symbols(mid, q)];
        next_symbols(digits, q);
    }
    return out;
}

int far_left_index(const RuleConfig& u) {
    return u.kind == ConfigKind::TwoSided1D ? u.left : u.background;
}

int far_right_index(const RuleConfig& u) {
    return u.kind == ConfigKind::TwoSided1D ? u.right : u.background;
}

}  // namespace

RuleConfig compose(const RuleConfig& s, const RuleConfig& t, const Limits& limits) {
    if (s.dim != t.dim) throw DimensionMismatch("compose: dimension mismatch");
    if (s.alphabet != t.alphabet) throw Error("compose: alphabet mismatch");
    CellSet composite_memory = minkowski(s.memory, t.memory);
    if (!pow_fits(static_cast<std::uint64_t>(s.alphabet), composite_memory.size(),
                  limits.table_cap)) {
        throw CapExceeded("compose",
                          pow_fits(s.alphabet, composite_memory.size(), UINT64_MAX / 2)
                              ? pow_checked(s.alphabet, composite_memory.size())
                              : UINT64_MAX,
                          limits.table_cap);
    }

    std::size_t m_size = s.memory.size();
    std::size_t n_size = t.memory.size();
    std::vector<std::uint32_t> inner_idx(m_size * n_size);
    for (std::size_t j = 0; j < m_size; ++j) {
        for (std::size_t nk = 0; nk < n_size; ++nk) {
            auto idx = composite_memory.index_of(add_cells(s.memory[j], t.memory[nk]));
            inner_idx[j * n_size + nk] = static_cast<std::uint32_t>(*idx);
        }
    }

    auto table_at = [&](const Cell& g) {
        std::vector<const Symbol*> t_tables(m_size);
        for (std::size_t j = 0; j < m_size; ++j) {
            t_tables[j] = t.rule_at(add_cells(g, s.memory[j])).table.data();
        }
        return composite_table(s, t, s.rule_at(g).table.data(), t_tables,
                               composite_memory, inner_idx);
    };

    RuleConfig out;
    out.dim = s.dim;
    out.alphabet = s.alphabet;
    out.memory = composite_memory;

    bool two_sided = s.kind == ConfigKind::TwoSided1D || t.kind == ConfigKind::TwoSided1D;

    if (!two_sided) {
        std::vector<const Symbol*> bg_tables(m_size, t.rules[t.background]->table.data());
        LocalRule far = composite_table(s, t, s.rules[s.background]->table.data(),
                                        bg_tables, composite_memory, inner_idx);
        if (s.kind == ConfigKind::Constant && t.kind == ConfigKind::Constant) {
            out.kind = ConfigKind::Constant;
            out.background = intern_rule(out, far);
            out.validate();
            return out;
        }
        out.kind = ConfigKind::Patched;
        out.background = intern_rule(out, far);
        CellSet candidates = set_union(
            s.special_cells(), t.special_cells().empty()
                                   ? CellSet(s.dim)
                                   : minkowski(t.special_cells(), negate(s.memory)));
        for (const Cell& g : candidates) {
            LocalRule table = table_at(g);
            if (!(table == far)) out.patch.emplace(g, intern_rule(out, table));
        }
        out.validate();
        return out;
    }

    // At least one operand is two-sided, so d = 1. Everything left of L and
    // right of R reads purely one-sided rules; the interval [L, R] is
    // materialized cell by cell.
    Coord mem_lo = s.memory[0][0];
    Coord mem_hi = s.memory[m_size - 1][0];
    Coord lo = INT64_MAX, hi = INT64_MIN;
    auto widen = [&](Coord a, Coord b) {
        lo = std::min(lo, a);
        hi = std::max(hi, b);
    };
    if (s.kind == ConfigKind::TwoSided1D) widen(s.cut, s.cut);
    if (t.kind == ConfigKind::TwoSided1D) widen(t.cut - mem_hi, t.cut - mem_lo);
    for (const Cell& c : s.special_cells()) widen(c[0], c[0]);
    if (!t.special_cells().empty()) {
        CellSet reach = minkowski(t.special_cells(), negate(s.memory));
        widen(reach[0][0], reach[reach.size() - 1][0]);
    }
    Coord band_lo = lo - 1, band_hi = hi + 1;

    std::vector<const Symbol*> left_tables(m_size, t.rules[far_left_index(t)]->table.data());
    LocalRule far_left = composite_table(s, t, s.rules[far_left_index(s)]->table.data(),
                                         left_tables, composite_memory, inner_idx);
    std::vector<const Symbol*> right_tables(m_size,
                                            t.rules[far_right_index(t)]->table.data());
    LocalRule far_right = composite_table(s, t, s.rules[far_right_index(s)]->table.data(),
                                          right_tables, composite_memory, inner_idx);

    out.kind = ConfigKind::TwoSided1D;
    out.cut = band_lo;
    out.left = intern_rule(out, far_left);
    out.right = intern_rule(out, far_right);
    for (Coord g = band_lo + 1; g <= band_hi; ++g) {
        LocalRule table = table_at({g});
        if (!(table == far_right)) out.patch.emplace(Cell{g}, intern_rule(out, table));
    }
    out.validate();
    return out;
}

}  // namespace anuca
