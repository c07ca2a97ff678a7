#include <doctest.h>

#include "anuca/corpus.hpp"
#include "anuca/engine.hpp"
#include "oracle.hpp"

using namespace anuca;
using namespace anuca::testing;

namespace {

CellSet box1d(Coord lo, Coord hi) { return Box::cube(1, lo, hi).cell_set(); }

Pattern pat1d(Coord lo, std::initializer_list<int> symbols) {
    std::vector<Symbol> sym;
    for (int v : symbols) sym.push_back(static_cast<Symbol>(v));
    return Pattern{box1d(lo, lo + static_cast<Coord>(sym.size()) - 1), std::move(sym)};
}

Pattern random_pattern(Rng& rng, const CellSet& support, int q) {
    Pattern p{support, std::vector<Symbol>(support.size())};
    for (auto& v : p.symbols) v = static_cast<Symbol>(rng.below(q));
    return p;
}

// random constant/patched/two-sided config over small memory, q <= 3, d <= 2
RuleConfig random_config(Rng& rng) {
    int dim = 1 + static_cast<int>(rng.below(2));
    int q = 2 + static_cast<int>(rng.below(2));
    std::vector<Cell> offs;
    std::uint64_t mem_size = 1 + rng.below(3);
    while (offs.size() < mem_size) {
        Cell m(dim);
        for (int j = 0; j < dim; ++j) m[j] = rng.range(-1, 1);
        offs.push_back(std::move(m));
        CellSet dedup = CellSet::from_cells(dim, offs);
        offs.assign(dedup.begin(), dedup.end());
    }
    CellSet memory = CellSet::from_cells(dim, offs);
    auto random_rule = [&] {
        LocalRule r;
        r.table.resize(pow_checked(q, memory.size()));
        for (auto& v : r.table) v = static_cast<Symbol>(rng.below(q));
        return r;
    };
    RuleConfig s = make_constant(dim, q, memory, random_rule());
    std::uint64_t variant = rng.below(3);
    if (variant == 1) {
        std::map<Cell, int> patch;
        std::uint64_t n = 1 + rng.below(3);
        for (std::uint64_t i = 0; i < n; ++i) {
            Cell c(dim);
            for (int j = 0; j < dim; ++j) c[j] = rng.range(-2, 2);
            patch.emplace(std::move(c), intern_rule(s, random_rule()));
        }
        s = make_patched(s, 0, std::move(patch));
    } else if (variant == 2 && dim == 1) {
        RuleConfig two = s;
        two.kind = ConfigKind::TwoSided1D;
        two.left = 0;
        two.right = intern_rule(two, random_rule());
        two.cut = rng.range(-2, 2);
        two.background = -1;
        two.validate();
        s = std::move(two);
    }
    return s;
}

}  // namespace

TEST_CASE("apply_window on the builtin examples") {
    RuleConfig ex3 = builtin("ex3_s").config;
    Pattern x = pat1d(-2, {0, 1, 0, 1, 1});
    Pattern y = apply_window(ex3, box1d(-1, 1), x);
    CHECK(y == pat1d(-1, {0, 0, 0}));

    RuleConfig id = builtin("identity").config;
    Pattern any = pat1d(-3, {1, 0, 1, 1, 0, 1, 0});
    CHECK(apply_window(id, any.support, any) == any);

    RuleConfig shift = builtin("shift").config;
    Pattern in = pat1d(-1, {1, 0, 1, 1, 0});
    CHECK(apply_window(shift, box1d(0, 2), in) == pat1d(0, {1, 1, 0}));
}

TEST_CASE("apply_window validates support") {
    RuleConfig shift = builtin("shift").config;
    Pattern too_small = pat1d(0, {1, 0, 1});
    CHECK_THROWS_AS(apply_window(shift, box1d(0, 2), too_small), Error);
}

TEST_CASE("apply_window matches the oracle") {
    Rng rng(31);
    for (int i = 0; i < 300; ++i) {
        RuleConfig s = random_config(rng);
        Cell center(s.dim);
        for (int j = 0; j < s.dim; ++j) center[j] = rng.range(-3, 3);
        CellSet window = translate(Box::cube(s.dim, 0, 1 + rng.range(0, 1)).cell_set(),
                                   center);
        WindowEvaluator ev(s, window);
        Pattern x = random_pattern(rng, ev.domain(), s.alphabet);
        Pattern got = apply_window(s, window, x);
        Sparse expect = oracle_window(s, window, sparse_of(x));
        CHECK(got == pattern_of(window, expect));
    }
}

TEST_CASE("lift_eval") {
    Box k = Box::cube(1, 0, 2);
    Pattern x = pat1d(0, {1, 0, 1});
    CHECK(lift_eval(x, k, {0}) == 1);
    CHECK(lift_eval(x, k, {1}) == 0);
    CHECK(lift_eval(x, k, {4}) == 0);   // 4 mod 3 = 1
    CHECK(lift_eval(x, k, {-1}) == 1);  // -1 mod 3 = 2
}

TEST_CASE("apply_periodized basics") {
    RuleConfig shift = builtin("shift").config;
    Box k = Box::cube(1, 0, 2);
    Pattern x = pat1d(0, {1, 0, 0});
    CHECK(apply_periodized(shift, k, x) == pat1d(0, {0, 0, 1}));

    RuleConfig q = builtin("ex1_q").config;
    Box k1 = Box::cube(1, 0, 0);
    CHECK(apply_periodized(q, k1, pat1d(0, {0})) == pat1d(0, {0}));
    CHECK(apply_periodized(q, k1, pat1d(0, {1})) == pat1d(0, {0}));

    RuleConfig id = builtin("identity").config;
    Pattern any = pat1d(0, {1, 1, 0});
    CHECK(apply_periodized(id, k, any) == any);
}

TEST_CASE("apply_periodized matches lift_eval composition") {
    Rng rng(32);
    for (int i = 0; i < 200; ++i) {
        RuleConfig s = random_config(rng);
        Cell lo(s.dim), hi(s.dim);
        for (int j = 0; j < s.dim; ++j) {
            lo[j] = rng.range(-2, 1);
            hi[j] = lo[j] + rng.range(0, 2);
        }
        Box k(lo, hi);
        Pattern x = random_pattern(rng, k.cell_set(), s.alphabet);
        Pattern y = apply_periodized(s, k, x);
        // oracle: evaluate sigma on the periodic lift cell by cell
        for (std::size_t ci = 0; ci < y.support.size(); ++ci) {
            const Cell& g = y.support[ci];
            Sparse neigh;
            for (const Cell& m : s.memory) {
                Cell at = add_cells(g, m);
                neigh[at] = lift_eval(x, k, at);
            }
            CHECK(y.symbols[ci] == oracle_cell(s, neigh, g));
        }
    }
}

TEST_CASE("compose identity laws") {
    RuleConfig id = builtin("identity").config;
    RuleConfig ex3 = builtin("ex3_s").config;
    RuleConfig left_id = compose(id, ex3);
    RuleConfig right_id = compose(ex3, id);

    Rng rng(33);
    for (int i = 0; i < 100; ++i) {
        Cell center{rng.range(-6, 6)};
        CellSet window = translate(box1d(-1, 1), center);
        WindowEvaluator ev(ex3, window);
        Pattern x = random_pattern(rng, ev.domain(), 2);
        Pattern direct = apply_window(ex3, window, x);
        CHECK(apply_window(left_id, window, x) == direct);
        CHECK(apply_window(right_id, window, x) == direct);
    }
}

TEST_CASE("compose of shifts reads offset two") {
    RuleConfig shift = builtin("shift").config;
    RuleConfig twice = compose(shift, shift);
    CHECK(twice.kind == ConfigKind::Constant);
    CHECK(twice.memory == box1d(-2, 2));
    const LocalRule& rule = *twice.rules[twice.background];
    // table depends only on the symbol at offset +2 (digit index 4)
    std::vector<Symbol> digits(5, 0);
    for (std::uint64_t code = 0; code < rule.table.size(); ++code) {
        CHECK(rule.table[code] == digits[4]);
        next_symbols(digits, 2);
    }
}

TEST_CASE("compose equals sequential application") {
    Rng rng(34);
    int checked = 0;
    for (int i = 0; i < 250; ++i) {
        RuleConfig s = random_config(rng);
        RuleConfig t = random_config(rng);
        if (s.dim != t.dim || s.alphabet != t.alphabet) continue;
        RuleConfig q = compose(s, t);
        ++checked;
        Cell center(s.dim);
        for (int j = 0; j < s.dim; ++j) center[j] = rng.range(-4, 4);
        CellSet window = translate(Box::cube(s.dim, 0, 1).cell_set(), center);
        CellSet mid = minkowski(window, s.memory);
        WindowEvaluator inner(t, mid);
        Pattern x = random_pattern(rng, inner.domain(), s.alphabet);
        Pattern through_t = apply_window(t, mid, x);
        Pattern sequential = apply_window(s, window, through_t);
        Pattern composed = apply_window(q, window, restrict_pattern(x, minkowski(window, q.memory)));
        CHECK(composed == sequential);
    }
    CHECK(checked > 50);
}

TEST_CASE("composite of the step example agrees with two passes") {
    RuleConfig ex1 = builtin("ex1_s").config;
    RuleConfig q = compose(ex1, ex1);
    CHECK(q.kind == ConfigKind::TwoSided1D);
    Rng rng(35);
    CellSet window = box1d(-8, 8);
    CellSet mid = minkowski(window, ex1.memory);
    WindowEvaluator inner(ex1, mid);
    for (int i = 0; i < 50; ++i) {
        Pattern x = random_pattern(rng, inner.domain(), 2);
        Pattern sequential = apply_window(ex1, window, apply_window(ex1, mid, x));
        Pattern composed = apply_window(q, window, x);
        CHECK(composed == sequential);
    }
}

TEST_CASE("composition is associative in action") {
    Rng rng(42);
    int checked = 0;
    while (checked < 60) {
        RuleConfig a = random_config(rng);
        RuleConfig b = random_config(rng);
        RuleConfig c = random_config(rng);
        // three-fold composites stay within the table cap only in d = 1
        if (a.dim != 1 || b.dim != 1 || c.dim != 1) continue;
        if (a.alphabet != b.alphabet || b.alphabet != c.alphabet) continue;
        ++checked;
        RuleConfig left = compose(compose(a, b), c);
        RuleConfig right = compose(a, compose(b, c));
        CHECK(left.memory == right.memory);
        Cell center(a.dim);
        for (int j = 0; j < a.dim; ++j) center[j] = rng.range(-3, 3);
        CellSet window = translate(Box::cube(a.dim, 0, 1).cell_set(), center);
        WindowEvaluator ev(left, window);
        Pattern x = random_pattern(rng, ev.domain(), a.alphabet);
        CHECK(apply_window(left, window, x) ==
              apply_window(right, window, restrict_pattern(x, ev.domain())));
    }
}

TEST_CASE("compose handles distinct memories across the step") {
    // two-sided config over {-1,0} composed with one over {-1,0,1}
    RuleConfig narrow = builtin("ex2_s").config;
    RuleConfig wide = builtin("ex3_s").config;
    RuleConfig q = compose(narrow, wide);
    CHECK(q.memory == Box::cube(1, -2, 1).cell_set());
    Rng rng(43);
    CellSet window = Box::cube(1, -6, 6).cell_set();
    CellSet mid = minkowski(window, narrow.memory);
    WindowEvaluator inner(wide, mid);
    for (int i = 0; i < 40; ++i) {
        Pattern x = random_pattern(rng, inner.domain(), 2);
        Pattern sequential = apply_window(narrow, window, apply_window(wide, mid, x));
        CHECK(apply_window(q, window, x) == sequential);
    }
}

TEST_CASE("apply_window_bg fills from the background") {
    RuleConfig shift = builtin("shift").config;
    Pattern x = pat1d(-1, {1, 1, 1});
    Pattern y = apply_window_bg(shift, box1d(-1, 1), x, 0);
    CHECK(y == pat1d(-1, {1, 1, 0}));  // the cell past the input reads background
    Pattern y1 = apply_window_bg(shift, box1d(-1, 1), x, 1);
    CHECK(y1 == pat1d(-1, {1, 1, 1}));
}

TEST_CASE("window consistency (locality)") {
    // evaluating inside a larger window never changes the result
    Rng rng(36);
    for (int i = 0; i < 300; ++i) {
        RuleConfig s = random_config(rng);
        Cell center(s.dim);
        for (int j = 0; j < s.dim; ++j) center[j] = rng.range(-3, 3);
        CellSet small = translate(Box::cube(s.dim, 0, 1).cell_set(), center);
        CellSet big = minkowski(small, Box::cube(s.dim, -1, 1).cell_set());
        WindowEvaluator ev_big(s, big);
        Pattern x = random_pattern(rng, ev_big.domain(), s.alphabet);
        Pattern big_out = apply_window(s, big, x);
        Pattern small_out =
            apply_window(s, small, restrict_pattern(x, minkowski(small, s.memory)));
        CHECK(restrict_pattern(big_out, small) == small_out);
    }
}

TEST_CASE("pseudo-equivariance") {
    Rng rng(37);
    for (int i = 0; i < 300; ++i) {
        RuleConfig s = random_config(rng);
        Cell g(s.dim);
        for (int j = 0; j < s.dim; ++j) g[j] = rng.range(-5, 5);
        CellSet window = Box::cube(s.dim, -1, 1).cell_set();
        WindowEvaluator ev(s, window);
        Pattern x = random_pattern(rng, ev.domain(), s.alphabet);
        Pattern lhs = apply_window(translate_config(s, g), translate(window, g),
                                   translate_pattern(x, g));
        Pattern rhs = translate_pattern(apply_window(s, window, x), g);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("sequential continuity toward the constant limit") {
    // once the patch leaves the window's memory domain, a translated
    // patched config evaluates exactly like its constant background
    RuleConfig constant = builtin("shift").config;
    RuleConfig patched = make_patched(constant, 0, {});
    patched.rules.push_back(
        std::make_shared<const LocalRule>(projection_rule(2, 3, 1)));
    patched.rule_names.push_back("center");
    patched.patch.emplace(Cell{0}, 1);

    Rng rng(38);
    CellSet window = box1d(-2, 2);
    WindowEvaluator ev(constant, window);
    for (Coord n = 4; n <= 12; ++n) {
        RuleConfig moved = translate_config(patched, {n});
        Pattern x = random_pattern(rng, ev.domain(), 2);
        CHECK(apply_window(moved, window, x) == apply_window(constant, window, x));
    }
}

TEST_CASE("periodized left-inverse law under wrap compatibility") {
    Rng rng(39);
    for (int i = 0; i < 100; ++i) {
        // permutation-shift pairs: s reads one offset through a permutation,
        // t undoes it from the opposite offset
        int q = 2 + static_cast<int>(rng.below(2));
        Coord off = rng.range(-1, 1);
        std::vector<Symbol> perm(q), inv(q);
        for (int v = 0; v < q; ++v) perm[v] = static_cast<Symbol>(v);
        for (int v = q - 1; v > 0; --v) {
            std::swap(perm[v], perm[rng.below(static_cast<std::uint64_t>(v) + 1)]);
        }
        for (int v = 0; v < q; ++v) inv[perm[v]] = static_cast<Symbol>(v);
        CellSet ms = CellSet::from_cells(1, {{off}});
        CellSet mt = CellSet::from_cells(1, {{-off}});
        LocalRule rs{perm}, rt{inv};
        RuleConfig s = make_constant(1, q, ms, rs);
        RuleConfig t = make_constant(1, q, mt, rt);

        Box k = Box::cube(1, 0, 2 + rng.range(0, 3));
        Pattern x = random_pattern(rng, k.cell_set(), q);
        Pattern y = apply_periodized(s, k, x);
        Pattern back = apply_periodized(t, k, y);
        CHECK(back == x);
    }
}
