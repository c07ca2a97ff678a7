#include "anuca/analysis.hpp"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <deque>
#include <unordered_map>

#include "anuca/parallel.hpp"

namespace anuca {

namespace {

Pattern pattern_from_code(const CellSet& support, std::uint64_t code, int q) {
    Pattern p{support, std::vector<Symbol>(support.size())};
    decode_symbols(code, q, p.symbols);
    return p;
}

Cell first_difference(const Pattern& a, const Pattern& b) {
    for (std::size_t i = 0; i < a.symbols.size(); ++i) {
        if (a.symbols[i] != b.symbols[i]) return a.support[i];
    }
    throw Error("patterns do not differ");
}

std::string key_of(std::span<const Symbol> symbols) {
    return std::string(reinterpret_cast<const char*>(symbols.data()), symbols.size());
}

}  // namespace

std::string Certificate::kind() const {
    struct Visitor {
        std::string operator()(const CollisionAsymptotic&) { return "collision-asymptotic"; }
        std::string operator()(const CollisionPeriodic&) { return "collision-periodic"; }
        std::string operator()(const MissingImagePattern&) { return "missing-image-pattern"; }
        std::string operator()(const InverseSynthesized&) { return "inverse-synthesized"; }
        std::string operator()(const PsiBijection&) { return "psi-bijection"; }
        std::string operator()(const LiftWitness&) { return "lift-witness"; }
        std::string operator()(const LiftFailure&) { return "lift-failure"; }
        std::string operator()(const Inconclusive&) { return "inconclusive"; }
    };
    return std::visit(Visitor{}, payload);
}

bool Certificate::is_refutation() const {
    return std::holds_alternative<CollisionAsymptotic>(payload) ||
           std::holds_alternative<CollisionPeriodic>(payload) ||
           std::holds_alternative<MissingImagePattern>(payload) ||
           std::holds_alternative<LiftFailure>(payload);
}

ImageWindow image_window(const RuleConfig& s, const CellSet& window, const Limits& limits) {
    WindowEvaluator ev(s, window);
    const CellSet& dom = ev.domain();
    int q = s.alphabet;
    if (!pow_fits(q, dom.size(), limits.pattern_cap)) {
        throw CapExceeded("image_window", UINT64_MAX, limits.pattern_cap);
    }
    std::uint64_t inputs = pow_checked(q, dom.size());
    limits.check_patterns("image_window", inputs);
    if (!pow_fits(q, window.size(), limits.table_cap)) {
        throw CapExceeded("image_window presence table", UINT64_MAX, limits.table_cap);
    }
    ImageWindow iw;
    iw.window = window;
    iw.alphabet = q;
    iw.total = pow_checked(q, window.size());

    int workers = std::max(limits.threads, 1);
    std::vector<std::vector<bool>> partial(static_cast<std::size_t>(workers));
    parallel_slices(inputs, workers, [&](std::size_t w, std::uint64_t begin,
                                         std::uint64_t end) {
        std::vector<bool>& seen = partial[w];
        seen.assign(iw.total, false);
        std::vector<Symbol> in(dom.size());
        std::vector<Symbol> out(window.size());
        decode_symbols(begin, q, in);
        for (std::uint64_t code = begin; code < end; ++code) {
            ev.apply(in, out);
            seen[encode_symbols(out, q)] = true;
            next_symbols(in, q);
        }
    });
    iw.present.assign(iw.total, false);
    for (const auto& seen : partial) {
        if (seen.empty()) continue;
        for (std::uint64_t i = 0; i < iw.total; ++i) {
            if (seen[i]) iw.present[i] = true;
        }
    }
    iw.count = 0;
    for (std::uint64_t i = 0; i < iw.total; ++i) {
        if (iw.present[i]) ++iw.count;
    }
    if (iw.count < iw.total) {
        // report the tuple-lexicographically first missing pattern
        std::vector<Symbol> digits(window.size(), 0);
        for (std::uint64_t rank = 0; rank < iw.total; ++rank) {
            std::uint64_t code = encode_symbols(digits, q);
            if (!iw.present[code]) {
                iw.first_missing = code;
                break;
            }
            next_symbols_lex(digits, q);
        }
    }
    return iw;
}

Certificate surjectivity_deficit(const RuleConfig& s, int max_radius, const Limits& limits) {
    for (int r = 0; r <= max_radius; ++r) {
        CellSet window = Box::cube(s.dim, -r, r).cell_set();
        ImageWindow iw;
        try {
            iw = image_window(s, window, limits);
        } catch (const CapExceeded& e) {
            return Certificate{Inconclusive{
                r - 1, std::string("enumeration cap hit at radius ") + std::to_string(r) +
                           " (" + e.what() + "); no deficit up to radius " +
                           std::to_string(r - 1)}};
        }
        if (iw.deficient()) {
            return Certificate{MissingImagePattern{
                window, pattern_from_code(window, *iw.first_missing, s.alphabet), r}};
        }
    }
    return Certificate{Inconclusive{
        max_radius, "image is onto every centered window up to radius " +
                        std::to_string(max_radius)}};
}

namespace {

std::optional<CollisionAsymptotic> asymptotic_pass(const RuleConfig& s, int r,
                                                   Symbol background,
                                                   const Limits& limits) {
    int q = s.alphabet;
    Coord rho = s.memory_radius();
    CellSet core = Box::cube(s.dim, -r, r).cell_set();
    CellSet compare = Box::cube(s.dim, -(r + rho), r + rho).cell_set();
    WindowEvaluator ev(s, compare);
    const CellSet& dom = ev.domain();

    std::vector<std::uint32_t> core_pos(core.size());
    for (std::size_t i = 0; i < core.size(); ++i) {
        core_pos[i] = static_cast<std::uint32_t>(*dom.index_of(core[i]));
    }
    if (!pow_fits(q, core.size(), limits.pattern_cap)) {
        throw CapExceeded("collision_search", UINT64_MAX, limits.pattern_cap);
    }
    std::uint64_t count = pow_checked(q, core.size());
    limits.check_patterns("collision_search", count);

    std::uint64_t chunk = std::min<std::uint64_t>(count, 1ull << 14);
    std::vector<Symbol> images(static_cast<std::size_t>(chunk) * compare.size());
    std::unordered_map<std::string, std::uint64_t> bucket;  // image -> first lex rank
    bucket.reserve(1024);

    auto pattern_at_rank = [&](std::uint64_t rank) {
        Pattern p{core, std::vector<Symbol>(core.size())};
        decode_symbols_lex(rank, q, p.symbols);
        return p;
    };

    for (std::uint64_t base = 0; base < count; base += chunk) {
        std::uint64_t len = std::min(chunk, count - base);
        parallel_slices(len, limits.threads, [&](std::size_t, std::uint64_t lo,
                                                 std::uint64_t hi) {
            std::vector<Symbol> in(dom.size(), background);
            std::vector<Symbol> corebuf(core.size());
            decode_symbols_lex(base + lo, q, corebuf);
            for (std::uint64_t i = lo; i < hi; ++i) {
                for (std::size_t j = 0; j < core_pos.size(); ++j) {
                    in[core_pos[j]] = corebuf[j];
                }
                ev.apply(in, std::span<Symbol>(images.data() + i * compare.size(),
                                               compare.size()));
                next_symbols_lex(corebuf, q);
            }
        });
        for (std::uint64_t i = 0; i < len; ++i) {
            std::string key = key_of(
                std::span<const Symbol>(images.data() + i * compare.size(), compare.size()));
            auto [it, inserted] = bucket.try_emplace(std::move(key), base + i);
            if (!inserted) {
                Pattern a = pattern_at_rank(it->second);
                Pattern b = pattern_at_rank(base + i);
                return CollisionAsymptotic{a, b, background, compare,
                                           first_difference(a, b), r};
            }
        }
    }
    return std::nullopt;
}

std::optional<CollisionPeriodic> periodic_pass(const RuleConfig& s, int r,
                                               const Limits& limits, std::string& note) {
    Box k = Box::cube(s.dim, 0, r);
    int q = s.alphabet;
    std::uint64_t cells = k.cell_count();
    if (!pow_fits(q, cells, std::min(limits.pattern_cap, limits.table_cap))) {
        if (note.empty()) {
            note = "; periodic scan skipped from box side " + std::to_string(r + 1) +
                   " (cap)";
        }
        return std::nullopt;
    }
    PeriodicEvaluator ev(s, k);
    std::uint64_t count = pow_checked(q, cells);
    std::unordered_map<std::uint64_t, std::uint64_t> seen;  // image code -> first lex rank
    seen.reserve(1024);
    auto pattern_at_rank = [&](std::uint64_t rank) {
        Pattern p{ev.cells(), std::vector<Symbol>(static_cast<std::size_t>(cells))};
        decode_symbols_lex(rank, q, p.symbols);
        return p;
    };
    std::vector<Symbol> in(static_cast<std::size_t>(cells), 0);
    std::vector<Symbol> out(static_cast<std::size_t>(cells));
    for (std::uint64_t rank = 0; rank < count; ++rank) {
        ev.apply(in, out);
        auto [it, inserted] = seen.try_emplace(encode_symbols(out, q), rank);
        if (!inserted) {
            Pattern a = pattern_at_rank(it->second);
            Pattern b = pattern_at_rank(rank);
            return CollisionPeriodic{k, a, b, first_difference(a, b), true};
        }
        next_symbols_lex(in, q);
    }
    return std::nullopt;
}

}  // namespace

Certificate collision_search(const RuleConfig& s, int max_radius,
                             std::vector<Symbol> backgrounds, const Limits& limits) {
    if (backgrounds.empty()) {
        for (int v = 0; v < s.alphabet; ++v) backgrounds.push_back(static_cast<Symbol>(v));
    }
    for (Symbol b : backgrounds) {
        if (b >= s.alphabet) throw Error("collision_search: background symbol out of range");
    }
    bool periodic_applicable = s.effectively_constant().has_value();
    std::string periodic_note;
    for (int r = 0; r <= max_radius; ++r) {
        for (Symbol b : backgrounds) {
            if (auto hit = asymptotic_pass(s, r, b, limits)) return Certificate{*hit};
        }
        if (periodic_applicable) {
            if (auto hit = periodic_pass(s, r, limits, periodic_note)) {
                return Certificate{*hit};
            }
        }
    }
    std::string note = "no collision up to radius " + std::to_string(max_radius);
    if (!periodic_applicable) {
        note += "; periodic scan not applicable (configuration not constant on "
                "congruence classes)";
    }
    note += periodic_note;
    return Certificate{Inconclusive{max_radius, note}};
}

std::string StableInjectivityReport::verdict() const {
    return refuted ? "refuted" : "unrefuted up to radius " + std::to_string(max_radius);
}

StableInjectivityReport stable_injectivity_check(const RuleConfig& s, int max_radius,
                                                 const Limits& limits) {
    StableInjectivityReport report;
    report.max_radius = max_radius;
    report.entries.push_back({"s", s, collision_search(s, max_radius, {}, limits)});
    OrbitClosure orbit = orbit_closure(s);
    for (std::size_t i = 0; i < orbit.limit_points.size(); ++i) {
        const RuleConfig& limit = orbit.limit_points[i];
        if (limit == s) continue;  // already covered by the s entry
        std::string label = "limit:" + limit.rule_names[limit.background];
        report.entries.push_back(
            {label, limit, collision_search(limit, max_radius, {}, limits)});
    }
    for (const auto& entry : report.entries) {
        if (entry.certificate.is_refutation()) report.refuted = true;
    }
    return report;
}

std::optional<int> min_determining_radius(const RuleConfig& s, const Cell& g,
                                          int max_radius, const Limits& limits) {
    int q = s.alphabet;
    for (int r = 0; r <= max_radius; ++r) {
        CellSet window = translate(Box::cube(s.dim, -r, r).cell_set(), g);
        WindowEvaluator ev(s, window);
        // the probed cell joins the enumeration domain even when the memory
        // never reads it; determination then fails, as it should
        CellSet dom = set_union(ev.domain(), CellSet::from_cells(s.dim, {g}));
        if (!pow_fits(q, dom.size(), limits.pattern_cap)) {
            throw CapExceeded("min_determining_radius", UINT64_MAX, limits.pattern_cap);
        }
        std::uint64_t count = pow_checked(q, dom.size());
        limits.check_patterns("min_determining_radius", count);
        std::vector<std::uint32_t> pos(ev.domain().size());
        for (std::size_t i = 0; i < ev.domain().size(); ++i) {
            pos[i] = static_cast<std::uint32_t>(*dom.index_of(ev.domain()[i]));
        }
        std::size_t g_pos = *dom.index_of(g);

        std::unordered_map<std::string, Symbol> bucket;
        bucket.reserve(1024);
        std::vector<Symbol> full(dom.size(), 0);
        std::vector<Symbol> in(ev.domain().size());
        std::vector<Symbol> out(window.size());
        bool determined = true;
        for (std::uint64_t code = 0; code < count; ++code) {
            for (std::size_t i = 0; i < pos.size(); ++i) in[i] = full[pos[i]];
            ev.apply(in, out);
            auto [it, inserted] = bucket.try_emplace(key_of(out), full[g_pos]);
            if (!inserted && it->second != full[g_pos]) {
                determined = false;
                break;
            }
            next_symbols(full, q);
        }
        if (determined) return r;
    }
    return std::nullopt;
}

namespace {

// Offsets (indices into the neighborhood) whose digit can change the value.
std::vector<char> essential_offsets(const std::vector<Symbol>& table, std::size_t width,
                                    int q) {
    std::vector<char> essential(width, 0);
    std::uint64_t entries = table.size();
    std::uint64_t stride = 1;
    for (std::size_t j = 0; j < width; ++j, stride *= q) {
        bool found = false;
        for (std::uint64_t high = 0; high < entries / (stride * q) && !found; ++high) {
            for (std::uint64_t low = 0; low < stride && !found; ++low) {
                std::uint64_t base = high * stride * static_cast<std::uint64_t>(q) + low;
                Symbol v0 = table[base];
                for (int k = 1; k < q; ++k) {
                    if (table[base + static_cast<std::uint64_t>(k) * stride] != v0) {
                        found = true;
                        break;
                    }
                }
            }
        }
        essential[j] = found ? 1 : 0;
    }
    return essential;
}

}  // namespace

Certificate synthesize_inverse(const RuleConfig& s, int max_radius, const Limits& limits,
                               std::uint64_t seed) {
    int q = s.alphabet;
    for (int r = 0; r <= max_radius; ++r) {
        CellSet hood = Box::cube(s.dim, -r, r).cell_set();
        if (!pow_fits(q, hood.size(), limits.table_cap)) {
            throw CapExceeded("synthesize_inverse", UINT64_MAX, limits.table_cap);
        }
        std::uint64_t entries = pow_checked(q, hood.size());
        ViewClasses vc(s, hood);

        std::vector<std::vector<Symbol>> tables(vc.size());
        bool determined = true;
        for (std::size_t ci = 0; ci < vc.size() && determined; ++ci) {
            const Cell& rep = vc.classes()[ci].representative;
            CellSet window = translate(hood, rep);
            WindowEvaluator ev(s, window);
            CellSet dom = set_union(ev.domain(), CellSet::from_cells(s.dim, {rep}));
            if (!pow_fits(q, dom.size(), limits.pattern_cap)) {
                throw CapExceeded("synthesize_inverse", UINT64_MAX, limits.pattern_cap);
            }
            std::uint64_t count = pow_checked(q, dom.size());
            limits.check_patterns("synthesize_inverse", count);
            std::vector<std::uint32_t> pos(ev.domain().size());
            for (std::size_t i = 0; i < ev.domain().size(); ++i) {
                pos[i] = static_cast<std::uint32_t>(*dom.index_of(ev.domain()[i]));
            }
            std::size_t rep_pos = *dom.index_of(rep);

            std::vector<Symbol> table(entries, 0);
            std::vector<bool> filled(entries, false);
            std::vector<Symbol> full(dom.size(), 0);
            std::vector<Symbol> in(ev.domain().size());
            std::vector<Symbol> out(window.size());
            for (std::uint64_t code = 0; code < count; ++code) {
                for (std::size_t i = 0; i < pos.size(); ++i) in[i] = full[pos[i]];
                ev.apply(in, out);
                std::uint64_t image = encode_symbols(out, q);
                if (!filled[image]) {
                    filled[image] = true;
                    table[image] = full[rep_pos];
                } else if (table[image] != full[rep_pos]) {
                    determined = false;
                    break;
                }
                next_symbols(full, q);
            }
            tables[ci] = std::move(table);
        }
        if (!determined) continue;

        // trim the shared neighborhood to the offsets some table reads
        std::vector<char> used(hood.size(), 0);
        for (const auto& table : tables) {
            std::vector<char> ess = essential_offsets(table, hood.size(), q);
            for (std::size_t j = 0; j < used.size(); ++j) used[j] |= ess[j];
        }
        if (std::count(used.begin(), used.end(), 1) == 0) {
            used[*hood.index_of(zero_cell(s.dim))] = 1;
        }
        std::vector<Cell> kept;
        std::vector<std::uint64_t> place;
        std::uint64_t p = 1;
        for (std::size_t j = 0; j < hood.size(); ++j, p *= q) {
            if (used[j]) {
                kept.push_back(hood[j]);
                place.push_back(p);
            }
        }
        CellSet trimmed = CellSet::from_cells(s.dim, kept);
        std::uint64_t trimmed_entries = pow_checked(q, trimmed.size());
        std::vector<std::vector<Symbol>> final_tables(tables.size());
        for (std::size_t ci = 0; ci < tables.size(); ++ci) {
            std::vector<Symbol> out_table(trimmed_entries);
            std::vector<Symbol> digits(trimmed.size(), 0);
            for (std::uint64_t code = 0; code < trimmed_entries; ++code) {
                std::uint64_t full_code = 0;
                for (std::size_t kji = 0; kji < place.size(); ++kji) {
                    full_code += place[kji] * digits[kji];
                }
                out_table[code] = tables[ci][full_code];
                next_symbols(digits, q);
            }
            final_tables[ci] = std::move(out_table);
        }

        RuleConfig inv;
        inv.dim = s.dim;
        inv.alphabet = q;
        inv.memory = trimmed;
        auto table_of = [&](const Cell& g) {
            return LocalRule{final_tables[vc.class_of(s, g)]};
        };
        switch (s.kind) {
            case ConfigKind::Constant: {
                inv.kind = ConfigKind::Constant;
                inv.background = intern_rule(inv, LocalRule{final_tables[0]});
                break;
            }
            case ConfigKind::Patched:
            case ConfigKind::BoxList: {
                inv.kind = ConfigKind::Patched;
                LocalRule far = table_of(vc.far_representatives()[0]);
                inv.background = intern_rule(inv, far);
                for (const Cell& g : vc.covered_cells()) {
                    LocalRule table = table_of(g);
                    if (!(table == far)) inv.patch.emplace(g, intern_rule(inv, table));
                }
                break;
            }
            case ConfigKind::TwoSided1D: {
                inv.kind = ConfigKind::TwoSided1D;
                inv.cut = s.cut;
                LocalRule far_left = table_of(vc.far_representatives()[0]);
                LocalRule far_right = table_of(vc.far_representatives()[1]);
                inv.left = intern_rule(inv, far_left);
                inv.right = intern_rule(inv, far_right);
                for (const Cell& g : vc.covered_cells()) {
                    LocalRule table = table_of(g);
                    const LocalRule& def = g[0] <= s.cut ? far_left : far_right;
                    if (!(table == def)) inv.patch.emplace(g, intern_rule(inv, table));
                }
                break;
            }
        }
        inv.validate();

        if (!verify_left_inverse(inv, s, 100, 2, derive_seed(seed, {}, 0x1e5eull), limits)) {
            throw Error("synthesize_inverse: synthesized inverse failed verification "
                        "(internal error)");
        }
        return Certificate{InverseSynthesized{
            trimmed, std::make_shared<const RuleConfig>(std::move(inv)), r}};
    }
    return Certificate{Inconclusive{
        max_radius,
        "no inverse neighborhood within radius " + std::to_string(max_radius)}};
}

bool verify_left_inverse(const RuleConfig& t, const RuleConfig& s, int trials,
                         int window_radius, std::uint64_t seed, const Limits& limits) {
    RuleConfig composite = compose(t, s, limits);
    int q = composite.alphabet;
    Coord extent = 1;
    for (const Cell& c : composite.special_cells()) extent = std::max(extent, inf_norm(c));
    if (composite.kind == ConfigKind::TwoSided1D) {
        extent = std::max(extent, std::abs(composite.cut) + 1);
    }
    Coord span = extent + window_radius + composite.memory_radius() + 2;

    Rng rng(seed);
    CellSet ball = Box::cube(composite.dim, -window_radius, window_radius).cell_set();
    for (int trial = 0; trial < trials; ++trial) {
        Cell center(composite.dim);
        for (int j = 0; j < composite.dim; ++j) center[j] = rng.range(-span, span);
        CellSet window = translate(ball, center);
        WindowEvaluator ev(composite, window);
        const CellSet& dom = ev.domain();
        std::vector<Symbol> in(dom.size());
        for (auto& v : in) v = static_cast<Symbol>(rng.below(q));
        std::vector<Symbol> out(window.size());
        ev.apply(in, out);
        for (std::size_t i = 0; i < window.size(); ++i) {
            auto idx = dom.index_of(window[i]);
            if (!idx || out[i] != in[*idx]) return false;
        }
    }
    return true;
}

bool wrap_compatibility(const RuleConfig& s, const Box& k, const CellSet& e) {
    CellSet kc = k.cell_set();
    CellSet exterior = set_difference(minkowski(kc, e), kc);
    for (const Cell& g : exterior) {
        if (!(s.rule_at(g) == s.rule_at(k.reduce(g)))) return false;
    }
    return true;
}

Certificate psi_invertibility_check(const RuleConfig& s, const Box& k,
                                    const Limits& limits) {
    PeriodizedMap map = materialize_periodized(s, k, limits);
    CellSet cells = k.cell_set();
    std::vector<std::uint64_t> inverse(map.size, UINT64_MAX);
    std::vector<Symbol> digits(cells.size(), 0);
    for (std::uint64_t rank = 0; rank < map.size; ++rank) {
        std::uint64_t code = encode_symbols(digits, s.alphabet);
        std::uint64_t image = map.forward[code];
        if (inverse[image] != UINT64_MAX) {
            Pattern a = pattern_from_code(cells, inverse[image], s.alphabet);
            Pattern b = pattern_from_code(cells, code, s.alphabet);
            return Certificate{CollisionPeriodic{k, a, b, first_difference(a, b),
                                                 s.effectively_constant().has_value()}};
        }
        inverse[image] = code;
        next_symbols_lex(digits, s.alphabet);
    }
    std::uint64_t digest = fnv1a(std::span<const std::uint8_t>(
        reinterpret_cast<const std::uint8_t*>(map.forward.data()),
        map.forward.size() * sizeof(std::uint64_t)));
    return Certificate{PsiBijection{
        k, map.size, digest,
        std::make_shared<const std::vector<std::uint64_t>>(std::move(inverse))}};
}

Certificate post_surjectivity_lift(const RuleConfig& s, const Cell& cell,
                                   const CellSet& neighborhood, int trials,
                                   int window_radius, Symbol background,
                                   std::uint64_t seed, const Limits& limits) {
    int q = s.alphabet;
    CellSet probe_window =
        translate(Box::cube(s.dim, -window_radius, window_radius).cell_set(), cell);
    CellSet hood = translate(neighborhood, cell);
    CellSet affected = set_union(minkowski(hood, negate(s.memory)),
                                 CellSet::from_cells(s.dim, {cell}));
    WindowEvaluator ev(s, affected);
    const CellSet& dom = ev.domain();
    std::size_t cell_pos = *affected.index_of(cell);

    std::vector<std::uint32_t> hood_pos(hood.size());
    for (std::size_t i = 0; i < hood.size(); ++i) {
        hood_pos[i] = static_cast<std::uint32_t>(*dom.index_of(hood[i]));
    }
    if (!pow_fits(q, hood.size(), limits.pattern_cap)) {
        throw CapExceeded("post_surjectivity_lift", UINT64_MAX, limits.pattern_cap);
    }
    std::uint64_t z_count = pow_checked(q, hood.size());
    limits.check_patterns("post_surjectivity_lift", z_count);

    std::string note =
        "probe over " + std::to_string(trials) + " sampled inputs on the radius-" +
        std::to_string(window_radius) +
        " window, background-extended; evidence at this neighborhood radius only";

    std::vector<LiftCase> cases;
    for (int trial = 0; trial < trials; ++trial) {
        Rng rng(derive_seed(seed, cell, static_cast<std::uint64_t>(trial)));
        Pattern x{probe_window, std::vector<Symbol>(probe_window.size())};
        for (auto& v : x.symbols) v = static_cast<Symbol>(rng.below(q));

        Pattern base = extend_pattern(x, dom, background);
        std::vector<Symbol> y(affected.size());
        ev.apply(base.symbols, y);

        for (int flip = 0; flip < q; ++flip) {
            if (static_cast<Symbol>(flip) == y[cell_pos]) continue;
            std::vector<Symbol> target = y;
            target[cell_pos] = static_cast<Symbol>(flip);

            std::optional<Pattern> found;
            std::vector<Symbol> zbuf(hood.size(), 0);
            std::vector<Symbol> in = base.symbols;
            std::vector<Symbol> out(affected.size());
            for (std::uint64_t zc = 0; zc < z_count; ++zc) {
                for (std::size_t i = 0; i < hood_pos.size(); ++i) {
                    in[hood_pos[i]] = zbuf[i];
                }
                ev.apply(in, out);
                if (out == target) {
                    found = Pattern{hood, zbuf};
                    break;
                }
                next_symbols_lex(zbuf, q);
            }
            if (!found) {
                return Certificate{LiftFailure{
                    cell, neighborhood, x, static_cast<Symbol>(flip), window_radius,
                    background,
                    "no lift supported on the neighborhood absorbs the flip; evidence "
                    "against post-surjectivity at this radius only"}};
            }
            cases.push_back(LiftCase{x, static_cast<Symbol>(flip), std::move(*found)});
        }
    }
    return Certificate{
        LiftWitness{cell, neighborhood, window_radius, background, cases, note}};
}

std::optional<int> uniform_post_surjectivity_radius(
    const RuleConfig& s, const std::vector<Cell>& cells, int max_radius, int trials,
    int window_radius, Symbol background, std::uint64_t seed, const Limits& limits) {
    for (int r = 0; r <= max_radius; ++r) {
        CellSet hood = Box::cube(s.dim, -r, r).cell_set();
        bool all_lift = true;
        for (const Cell& cell : cells) {
            Certificate cert = post_surjectivity_lift(
                s, cell, hood, trials, window_radius, background,
                derive_seed(seed, cell, static_cast<std::uint64_t>(r)), limits);
            if (!cert.as<LiftWitness>()) {
                all_lift = false;
                break;
            }
        }
        if (all_lift) return r;
    }
    return std::nullopt;
}

Symbol EventuallyPeriodic::at(Coord n) const {
    if (n < middle_lo) {
        Coord l = static_cast<Coord>(left_cycle.size());
        Coord rel = (n - middle_lo) % l;
        if (rel < 0) rel += l;
        return left_cycle[static_cast<std::size_t>(rel)];
    }
    Coord hi = middle_lo + static_cast<Coord>(middle.size());
    if (n < hi) return middle[static_cast<std::size_t>(n - middle_lo)];
    Coord rl = static_cast<Coord>(right_cycle.size());
    return right_cycle[static_cast<std::size_t>((n - hi) % rl)];
}

namespace {

// Pair automaton over (w-1)-blocks for a width-w constant rule on Z.
struct PairAutomaton {
    int q;
    Coord w;
    std::uint64_t block_count;  // q^(w-1)
    std::vector<Symbol> outsym;  // [block * q + letter] -> output symbol

    std::uint64_t state_of(std::uint64_t u, std::uint64_t v) const {
        return u * block_count + v;
    }
    std::uint64_t step_block(std::uint64_t u, int letter) const {
        std::uint64_t top = 1;
        for (Coord i = 0; i + 2 <= w; ++i) top *= static_cast<std::uint64_t>(q);
        // blocks store letters oldest-first as base-q digits
        return w == 1 ? 0
                      : u / static_cast<std::uint64_t>(q) +
                            static_cast<std::uint64_t>(letter) * (top / q);
    }
    bool edge_ok(std::uint64_t u, int a, std::uint64_t v, int b) const {
        return outsym[u * q + a] == outsym[v * q + b];
    }
};

PairAutomaton build_pair_automaton(const CellSet& memory, int alphabet,
                                   const LocalRule& rule) {
    if (memory.dim() != 1) throw Error("constant_injectivity_1d needs dimension 1");
    Coord mn = memory[0][0];
    Coord mx = memory[memory.size() - 1][0];
    Coord w = mx - mn + 1;
    PairAutomaton pa;
    pa.q = alphabet;
    pa.w = w;
    pa.block_count = pow_checked(alphabet, static_cast<std::uint64_t>(w - 1));
    if (pa.block_count > (1ull << 20)) {
        throw CapExceeded("constant_injectivity_1d", pa.block_count * pa.block_count,
                          1ull << 40);
    }
    // positions of the actual memory offsets inside the hull window
    std::vector<std::size_t> pos(memory.size());
    for (std::size_t j = 0; j < memory.size(); ++j) {
        pos[j] = static_cast<std::size_t>(memory[j][0] - mn);
    }
    pa.outsym.resize(pa.block_count * alphabet);
    std::vector<Symbol> window(static_cast<std::size_t>(w));
    std::vector<Symbol> block(static_cast<std::size_t>(w - 1), 0);
    for (std::uint64_t u = 0; u < pa.block_count; ++u) {
        for (int a = 0; a < alphabet; ++a) {
            for (Coord i = 0; i + 1 < w; ++i) window[i] = block[i];
            window[static_cast<std::size_t>(w - 1)] = static_cast<Symbol>(a);
            std::uint64_t code = 0;
            for (std::size_t j = memory.size(); j-- > 0;) {
                code = code * static_cast<std::uint64_t>(alphabet) + window[pos[j]];
            }
            pa.outsym[u * alphabet + a] = rule.table[code];
        }
        next_symbols(block, alphabet);
    }
    return pa;
}

}  // namespace

InjectivityDecision constant_injectivity_1d(const CellSet& memory, int alphabet,
                                            const LocalRule& rule) {
    PairAutomaton pa = build_pair_automaton(memory, alphabet, rule);
    std::uint64_t nb = pa.block_count;
    std::uint64_t states = nb * nb;
    int q = pa.q;

    std::vector<std::uint32_t> out_deg(states, 0), in_deg(states, 0);
    std::vector<char> alive(states, 1);
    for (std::uint64_t u = 0; u < nb; ++u) {
        for (std::uint64_t v = 0; v < nb; ++v) {
            std::uint64_t src = pa.state_of(u, v);
            for (int a = 0; a < q; ++a) {
                for (int b = 0; b < q; ++b) {
                    if (!pa.edge_ok(u, a, v, b)) continue;
                    out_deg[src]++;
                    in_deg[pa.state_of(pa.step_block(u, a), pa.step_block(v, b))]++;
                }
            }
        }
    }

    std::deque<std::uint64_t> dead;
    for (std::uint64_t st = 0; st < states; ++st) {
        if (out_deg[st] == 0 || in_deg[st] == 0) dead.push_back(st);
    }
    auto predecessors = [&](std::uint64_t st, auto&& visit) {
        std::uint64_t u = st / nb, v = st % nb;
        // incoming letters are the newest digits of the blocks
        std::uint64_t top = nb / q;
        int a = pa.w == 1 ? -1 : static_cast<int>(u / top);
        int b = pa.w == 1 ? -1 : static_cast<int>(v / top);
        for (int ra = 0; ra < q; ++ra) {
            for (int rb = 0; rb < q; ++rb) {
                if (pa.w == 1) {
                    // letters are free when blocks are empty
                    if (pa.edge_ok(0, ra, 0, rb)) visit(0ull, ra, rb);
                    continue;
                }
                std::uint64_t pu = (u % top) * q + static_cast<std::uint64_t>(ra);
                std::uint64_t pv = (v % top) * q + static_cast<std::uint64_t>(rb);
                if (pa.edge_ok(pu, a, pv, b)) visit(pa.state_of(pu, pv), a, b);
            }
        }
    };
    while (!dead.empty()) {
        std::uint64_t st = dead.front();
        dead.pop_front();
        if (!alive[st]) continue;
        alive[st] = 0;
        std::uint64_t u = st / nb, v = st % nb;
        for (int a = 0; a < q; ++a) {
            for (int b = 0; b < q; ++b) {
                if (!pa.edge_ok(u, a, v, b)) continue;
                std::uint64_t dst = pa.state_of(pa.step_block(u, a), pa.step_block(v, b));
                if (alive[dst] && --in_deg[dst] == 0) dead.push_back(dst);
            }
        }
        predecessors(st, [&](std::uint64_t p, int, int) {
            if (alive[p] && --out_deg[p] == 0) dead.push_back(p);
        });
    }

    // lexicographically first surviving edge with differing letters
    std::optional<std::uint64_t> e_src;
    int e_a = 0, e_b = 0;
    for (std::uint64_t st = 0; st < states && !e_src; ++st) {
        if (!alive[st]) continue;
        std::uint64_t u = st / nb, v = st % nb;
        for (int a = 0; a < q && !e_src; ++a) {
            for (int b = 0; b < q; ++b) {
                if (a == b || !pa.edge_ok(u, a, v, b)) continue;
                std::uint64_t dst = pa.state_of(pa.step_block(u, a), pa.step_block(v, b));
                if (!alive[dst]) continue;
                e_src = st;
                e_a = a;
                e_b = b;
                break;
            }
        }
    }
    if (!e_src) return InjectivityDecision{true, std::nullopt, std::nullopt};

    // Backward walk: prepend letters until a state repeats; the repeated
    // segment becomes the left cycle.
    std::vector<std::pair<Symbol, Symbol>> back_letters;  // position -1, -2, ...
    std::vector<std::uint64_t> back_states{*e_src};
    std::unordered_map<std::uint64_t, std::size_t> back_seen{{*e_src, 0}};
    std::size_t cycle_from = 0;
    for (;;) {
        std::uint64_t cur = back_states.back();
        std::optional<std::uint64_t> best;
        int la = 0, lb = 0;
        predecessors(cur, [&](std::uint64_t p, int a, int b) {
            if (!alive[p] || best) return;
            best = p;
            la = a;
            lb = b;
        });
        if (!best) throw Error("pair automaton: trimmed state lost its predecessors");
        back_letters.emplace_back(static_cast<Symbol>(la), static_cast<Symbol>(lb));
        auto it = back_seen.find(*best);
        if (it != back_seen.end()) {
            cycle_from = it->second;
            break;
        }
        back_seen.emplace(*best, back_states.size());
        back_states.push_back(*best);
    }

    // Forward walk from the edge target: append letters until a state repeats.
    std::uint64_t dst = pa.state_of(pa.step_block(*e_src / nb, e_a),
                                    pa.step_block(*e_src % nb, e_b));
    std::vector<std::pair<Symbol, Symbol>> fwd_letters;  // position 1, 2, ...
    std::vector<std::uint64_t> fwd_states{dst};
    std::unordered_map<std::uint64_t, std::size_t> fwd_seen{{dst, 0}};
    std::size_t fwd_cycle_from = 0;
    for (;;) {
        std::uint64_t cur = fwd_states.back();
        std::uint64_t u = cur / nb, v = cur % nb;
        std::optional<std::uint64_t> best;
        int la = 0, lb = 0;
        for (int a = 0; a < q && !best; ++a) {
            for (int b = 0; b < q; ++b) {
                if (!pa.edge_ok(u, a, v, b)) continue;
                std::uint64_t nxt = pa.state_of(pa.step_block(u, a), pa.step_block(v, b));
                if (!alive[nxt]) continue;
                best = nxt;
                la = a;
                lb = b;
                break;
            }
        }
        if (!best) throw Error("pair automaton: trimmed state lost its successors");
        fwd_letters.emplace_back(static_cast<Symbol>(la), static_cast<Symbol>(lb));
        auto it = fwd_seen.find(*best);
        if (it != fwd_seen.end()) {
            fwd_cycle_from = it->second;
            break;
        }
        fwd_seen.emplace(*best, fwd_states.size());
        fwd_states.push_back(*best);
    }

    // Assemble the eventually periodic pair. Backward letters occupy
    // positions -1, -2, ...; the bridge part (before the cycle entry) is
    // middle, the rest repeats.
    std::size_t back_bridge = cycle_from;  // letters -1 .. -back_bridge
    std::size_t fwd_bridge = fwd_cycle_from;
    std::size_t fwd_cycle = fwd_letters.size() - fwd_cycle_from;

    EventuallyPeriodic x, y;
    x.middle_lo = y.middle_lo = -static_cast<Coord>(back_bridge);
    for (std::size_t i = back_bridge; i-- > 0;) {
        x.middle.push_back(back_letters[i].first);
        y.middle.push_back(back_letters[i].second);
    }
    x.middle.push_back(static_cast<Symbol>(e_a));
    y.middle.push_back(static_cast<Symbol>(e_b));
    for (std::size_t i = 0; i < fwd_bridge; ++i) {
        x.middle.push_back(fwd_letters[i].first);
        y.middle.push_back(fwd_letters[i].second);
    }
    for (std::size_t i = back_letters.size(); i-- > back_bridge;) {
        x.left_cycle.push_back(back_letters[i].first);
        y.left_cycle.push_back(back_letters[i].second);
    }
    for (std::size_t i = fwd_bridge; i < fwd_bridge + fwd_cycle; ++i) {
        x.right_cycle.push_back(fwd_letters[i].first);
        y.right_cycle.push_back(fwd_letters[i].second);
    }

    if (!replay_injectivity_witness(memory, alphabet, rule, x, y)) {
        throw Error("constant_injectivity_1d: witness replay failed (internal error)");
    }
    return InjectivityDecision{false, std::move(x), std::move(y)};
}

bool replay_injectivity_witness(const CellSet& memory, int alphabet,
                                const LocalRule& rule, const EventuallyPeriodic& x,
                                const EventuallyPeriodic& y) {
    Coord mn = memory[0][0];
    Coord mx = memory[memory.size() - 1][0];
    Coord w = mx - mn + 1;
    auto image_at = [&](const EventuallyPeriodic& c, Coord n) {
        std::vector<Symbol> neigh(memory.size());
        for (std::size_t j = 0; j < memory.size(); ++j) {
            neigh[j] = c.at(n + memory[j][0]);
        }
        return rule.table[encode_symbols(neigh, alphabet)];
    };
    Coord left_period = static_cast<Coord>(x.left_cycle.size() * y.left_cycle.size());
    Coord right_period = static_cast<Coord>(x.right_cycle.size() * y.right_cycle.size());
    Coord lo = std::min(x.middle_lo, y.middle_lo) - 2 * left_period - 2 * w;
    Coord hi = std::max(x.middle_lo + static_cast<Coord>(x.middle.size()),
                        y.middle_lo + static_cast<Coord>(y.middle.size())) +
               2 * right_period + 2 * w;
    // beyond [lo, hi] both configurations and hence both images repeat with
    // the tail periods, and one full period of each tail lies inside the
    // checked range, so equality here is equality everywhere
    bool differ = false;
    for (Coord n = lo; n <= hi; ++n) {
        if (x.at(n) != y.at(n)) differ = true;
        if (image_at(x, n) != image_at(y, n)) return false;
    }
    return differ;
}

bool replay_certificate(const RuleConfig& s, const Certificate& cert,
                        const Limits& limits) {
    if (const auto* c = cert.as<CollisionAsymptotic>()) {
        if (c->a.support != c->b.support || c->a == c->b) return false;
        if (c->a.at(c->differs_at) == c->b.at(c->differs_at)) return false;
        Pattern ya = apply_window_bg(s, c->compare_window, c->a, c->background);
        Pattern yb = apply_window_bg(s, c->compare_window, c->b, c->background);
        // the compare window must cover every cell the core can influence
        CellSet influenced = minkowski(c->a.support, negate(s.memory));
        if (!influenced.is_subset_of(c->compare_window)) return false;
        return ya == yb;
    }
    if (const auto* c = cert.as<CollisionPeriodic>()) {
        if (c->a == c->b) return false;
        if (c->lift_genuine && !s.effectively_constant()) return false;
        Pattern ya = apply_periodized(s, c->box, c->a);
        Pattern yb = apply_periodized(s, c->box, c->b);
        return ya == yb;
    }
    if (const auto* c = cert.as<MissingImagePattern>()) {
        ImageWindow iw = image_window(s, c->window, limits);
        std::uint64_t code = encode_symbols(c->missing.symbols, s.alphabet);
        return !iw.present[code];
    }
    if (const auto* c = cert.as<InverseSynthesized>()) {
        return verify_left_inverse(*c->inverse, s, 100, 2, 0x7e91ull, limits);
    }
    if (const auto* c = cert.as<PsiBijection>()) {
        Certificate again = psi_invertibility_check(s, c->box, limits);
        const auto* pb = again.as<PsiBijection>();
        return pb && pb->digest == c->digest && pb->size == c->size;
    }
    if (const auto* c = cert.as<LiftWitness>()) {
        CellSet hood = translate(c->neighborhood, c->cell);
        CellSet affected = set_union(minkowski(hood, negate(s.memory)),
                                     CellSet::from_cells(s.dim, {c->cell}));
        WindowEvaluator ev(s, affected);
        std::size_t cell_pos = *affected.index_of(c->cell);
        for (const LiftCase& lc : c->cases) {
            Pattern base = extend_pattern(lc.x, ev.domain(), c->background);
            std::vector<Symbol> y(affected.size());
            ev.apply(base.symbols, y);
            if (y[cell_pos] == lc.flip_to) return false;
            std::vector<Symbol> target = y;
            target[cell_pos] = lc.flip_to;
            Pattern z_in = base;
            for (std::size_t i = 0; i < hood.size(); ++i) {
                z_in.symbols[*ev.domain().index_of(hood[i])] = lc.z.symbols[i];
            }
            std::vector<Symbol> out(affected.size());
            ev.apply(z_in.symbols, out);
            if (out != target) return false;
        }
        return true;
    }
    if (const auto* c = cert.as<LiftFailure>()) {
        CellSet hood = translate(c->neighborhood, c->cell);
        CellSet affected = set_union(minkowski(hood, negate(s.memory)),
                                     CellSet::from_cells(s.dim, {c->cell}));
        WindowEvaluator ev(s, affected);
        std::size_t cell_pos = *affected.index_of(c->cell);
        Pattern base = extend_pattern(c->x, ev.domain(), c->background);
        std::vector<Symbol> y(affected.size());
        ev.apply(base.symbols, y);
        if (y[cell_pos] == c->flip_to) return false;
        std::vector<Symbol> target = y;
        target[cell_pos] = c->flip_to;
        std::uint64_t z_count = pow_checked(s.alphabet, hood.size());
        limits.check_patterns("replay_certificate", z_count);
        std::vector<Symbol> zbuf(hood.size(), 0);
        std::vector<Symbol> in = base.symbols;
        std::vector<Symbol> out(affected.size());
        std::vector<std::uint32_t> hood_pos(hood.size());
        for (std::size_t i = 0; i < hood.size(); ++i) {
            hood_pos[i] = static_cast<std::uint32_t>(*ev.domain().index_of(hood[i]));
        }
        for (std::uint64_t zc = 0; zc < z_count; ++zc) {
            for (std::size_t i = 0; i < hood_pos.size(); ++i) in[hood_pos[i]] = zbuf[i];
            ev.apply(in, out);
            if (out == target) return false;  // a lift exists after all
            next_symbols(zbuf, s.alphabet);
        }
        return true;
    }
    return cert.as<Inconclusive>() != nullptr;
}

}  // namespace anuca
