#include "anuca/corpus.hpp"

#include <algorithm>

namespace anuca {

namespace {

CellSet offsets_1d(std::initializer_list<Coord> offs) {
    std::vector<Cell> cells;
    for (Coord o : offs) cells.push_back({o});
    return CellSet::from_cells(1, std::move(cells));
}

LocalRule xor_rule(std::size_t memory_size) {
    return make_rule_table(2, memory_size, [](std::span<const Symbol> n) {
        return static_cast<Symbol>((n[0] + n[1]) % 2);
    });
}

RuleConfig two_sided(const CellSet& memory, LocalRule left_rule, std::string left_name,
                     LocalRule right_rule, std::string right_name, Coord cut) {
    RuleConfig s;
    s.kind = ConfigKind::TwoSided1D;
    s.dim = 1;
    s.alphabet = 2;
    s.memory = memory;
    s.rules.push_back(std::make_shared<const LocalRule>(std::move(left_rule)));
    s.rule_names.push_back(std::move(left_name));
    s.rules.push_back(std::make_shared<const LocalRule>(std::move(right_rule)));
    s.rule_names.push_back(std::move(right_name));
    s.left = 0;
    s.right = 1;
    s.cut = cut;
    s.validate();
    return s;
}

}  // namespace

std::vector<std::string> builtin_names() {
    return {"ex1_s", "ex1_p", "ex1_q", "ex2_s", "ex2_s_k", "ex3_s", "ex3_p",
            "ex3_q", "shift", "identity", "xor2", "majority3"};
}

NamedExample builtin(const std::string& name) {
    CellSet m3 = offsets_1d({-1, 0, 1});
    CellSet m2 = offsets_1d({-1, 0});
    CellSet m1 = offsets_1d({0});
    LocalRule read_right = projection_rule(2, 3, 2);  // (u,v,w) -> w
    LocalRule read_left = projection_rule(2, 3, 0);   // (u,v,w) -> u
    LocalRule read_center = projection_rule(2, 3, 1); // (u,v,w) -> v

    if (name == "ex1_s") {
        NamedExample ex{name, two_sided(m3, read_right, "f", xor_rule(3), "g", 0), {}};
        ex.expected = {
            {"collision_search", 4, {}, "inconclusive"},
            {"surjectivity_deficit", 3, {}, "missing-image-pattern@1:001"},
            {"stable_injectivity_check", 3, {}, "refuted"},
            {"synthesize_inverse", 3, {}, "inconclusive"},
        };
        return ex;
    }
    if (name == "ex1_p") {
        NamedExample ex{name, make_constant(1, 2, m3, read_right, "f"), {}};
        ex.expected = {
            {"collision_search", 3, {}, "inconclusive"},
            {"synthesize_inverse", 2, {}, "inverse-synthesized"},
        };
        return ex;
    }
    if (name == "ex1_q") {
        NamedExample ex{name, make_constant(1, 2, m3, xor_rule(3), "g"), {}};
        ex.expected = {
            {"collision_search", 2, {}, "collision-periodic"},
            {"constant_injectivity_1d", 0, {}, "non-injective"},
        };
        return ex;
    }
    if (name == "ex2_s" || name == "ex2_s_k") {
        RuleConfig s = two_sided(m2, projection_rule(2, 2, 1), "f", xor_rule(2), "g", 0);
        if (name == "ex2_s_k") {
            NamedExample ex{name, translate_config(s, {1}), {}};
            ex.expected = {{"collision_search", 3, {}, "inconclusive"}};
            return ex;
        }
        NamedExample ex{name, std::move(s), {}};
        ex.expected = {
            {"collision_search", 4, {}, "inconclusive"},
            {"min_determining_radius", 6, {2}, "2"},
            {"synthesize_inverse", 3, {}, "inconclusive"},
        };
        return ex;
    }
    if (name == "ex3_s") {
        RuleConfig s = two_sided(m3, read_right, "f", read_left, "g", 0);
        s.rules.push_back(std::make_shared<const LocalRule>(read_center));
        s.rule_names.push_back("h");
        s.patch.emplace(Cell{0}, 2);
        s.validate();
        NamedExample ex{name, std::move(s), {}};
        ex.expected = {
            {"surjectivity_deficit", 3, {}, "missing-image-pattern@1:001"},
            {"stable_injectivity_check", 4, {}, "unrefuted"},
            {"synthesize_inverse", 3, {}, "inverse-synthesized"},
        };
        return ex;
    }
    if (name == "ex3_p") {
        NamedExample ex{name, make_constant(1, 2, m3, read_right, "f"), {}};
        ex.expected = {
            {"collision_search", 3, {}, "inconclusive"},
            {"synthesize_inverse", 2, {}, "inverse-synthesized"},
        };
        return ex;
    }
    if (name == "ex3_q") {
        NamedExample ex{name, make_constant(1, 2, m3, read_left, "g"), {}};
        ex.expected = {
            {"collision_search", 3, {}, "inconclusive"},
            {"synthesize_inverse", 2, {}, "inverse-synthesized"},
        };
        return ex;
    }
    if (name == "shift") {
        NamedExample ex{name, make_constant(1, 2, m3, read_right, "shift"), {}};
        ex.expected = {
            {"surjectivity_deficit", 3, {}, "inconclusive"},
            {"synthesize_inverse", 2, {}, "inverse-synthesized"},
            {"uniform_post_surjectivity_radius", 2, {0}, "1"},
        };
        return ex;
    }
    if (name == "identity") {
        NamedExample ex{name, make_constant(1, 2, m1, projection_rule(2, 1, 0), "id"), {}};
        ex.expected = {
            {"synthesize_inverse", 1, {}, "inverse-synthesized"},
            {"uniform_post_surjectivity_radius", 2, {0}, "0"},
        };
        return ex;
    }
    if (name == "xor2") {
        NamedExample ex{name, make_constant(1, 2, m2, xor_rule(2), "xor"), {}};
        ex.expected = {
            {"collision_search", 2, {}, "collision-periodic"},
            {"constant_injectivity_1d", 0, {}, "non-injective"},
            {"post_surjectivity_lift", 3, {0}, "lift-failure"},
        };
        return ex;
    }
    if (name == "majority3") {
        LocalRule maj = make_rule_table(2, 3, [](std::span<const Symbol> n) {
            return static_cast<Symbol>(n[0] + n[1] + n[2] >= 2 ? 1 : 0);
        });
        NamedExample ex{name, make_constant(1, 2, m3, std::move(maj), "maj"), {}};
        ex.expected = {
            {"collision_search", 2, {}, "collision-asymptotic"},
            {"constant_injectivity_1d", 0, {}, "non-injective"},
        };
        return ex;
    }
    throw Error("unknown builtin '" + name + "'");
}

std::vector<ClaimOutcome> run_claims(const NamedExample& example, const Limits& limits) {
    std::vector<ClaimOutcome> outcomes;
    for (const ExpectedClaim& claim : example.expected) {
        ClaimOutcome out;
        out.op = claim.op;
        out.expected = claim.expect;
        if (claim.op == "collision_search") {
            out.params = "max_radius=" + std::to_string(claim.radius);
            Certificate cert = collision_search(example.config, claim.radius, {}, limits);
            out.got = cert.kind();
            out.certificate = cert;
            out.certificate_config = example.config;
        } else if (claim.op == "surjectivity_deficit") {
            out.params = "max_radius=" + std::to_string(claim.radius);
            Certificate cert = surjectivity_deficit(example.config, claim.radius, limits);
            if (const auto* m = cert.as<MissingImagePattern>()) {
                out.got = cert.kind() + "@" + std::to_string(m->radius) + ":" +
                          packed_string(m->missing.symbols);
            } else {
                out.got = cert.kind();
            }
            out.certificate = cert;
            out.certificate_config = example.config;
        } else if (claim.op == "stable_injectivity_check") {
            out.params = "max_radius=" + std::to_string(claim.radius);
            StableInjectivityReport report =
                stable_injectivity_check(example.config, claim.radius, limits);
            out.got = report.refuted ? "refuted" : "unrefuted";
            for (const auto& entry : report.entries) {
                if (entry.certificate.is_refutation()) {
                    out.certificate = entry.certificate;
                    out.certificate_config = entry.config;
                    break;
                }
            }
        } else if (claim.op == "synthesize_inverse") {
            out.params = "max_radius=" + std::to_string(claim.radius);
            Certificate cert = synthesize_inverse(example.config, claim.radius, limits);
            out.got = cert.kind();
            out.certificate = cert;
            out.certificate_config = example.config;
        } else if (claim.op == "min_determining_radius") {
            out.params = "cell=" + format_cell(claim.cell) +
                         ",max_radius=" + std::to_string(claim.radius);
            auto r = min_determining_radius(example.config, claim.cell, claim.radius, limits);
            out.got = r ? std::to_string(*r) : "none";
        } else if (claim.op == "uniform_post_surjectivity_radius") {
            out.params = "cell=" + format_cell(claim.cell) +
                         ",max_radius=" + std::to_string(claim.radius);
            auto r = uniform_post_surjectivity_radius(example.config, {claim.cell},
                                                      claim.radius, 8, 3, 0, 0, limits);
            out.got = r ? std::to_string(*r) : "none";
        } else if (claim.op == "post_surjectivity_lift") {
            out.params = "cell=" + format_cell(claim.cell) +
                         ",radius=" + std::to_string(claim.radius);
            CellSet hood = Box::cube(example.config.dim, -claim.radius, claim.radius)
                               .cell_set();
            Certificate cert = post_surjectivity_lift(example.config, claim.cell, hood, 4,
                                                      3, 0, 0, limits);
            out.got = cert.kind();
            out.certificate = cert;
            out.certificate_config = example.config;
        } else if (claim.op == "constant_injectivity_1d") {
            out.params = "";
            InjectivityDecision dec = constant_injectivity_1d(
                example.config.memory, example.config.alphabet,
                *example.config.rules[example.config.background]);
            out.got = dec.injective ? "injective" : "non-injective";
        } else {
            throw Error("unknown claim op '" + claim.op + "'");
        }
        out.ok = out.got == out.expected;
        outcomes.push_back(std::move(out));
    }
    return outcomes;
}

RuleConfig bounded_singularity_config(int dim, const std::vector<Coord>& f_seq,
                                      const std::vector<Coord>& g_seq,
                                      const CellSet& memory, int alphabet,
                                      const LocalRule& ring_rule,
                                      const LocalRule& gap_rule, int n_boxes) {
    if (n_boxes < 1) throw Error("bounded_singularity_config: need at least one ring");
    if (f_seq.size() < static_cast<std::size_t>(n_boxes) ||
        g_seq.size() < static_cast<std::size_t>(n_boxes)) {
        throw Error("bounded_singularity_config: sequences shorter than n_boxes");
    }
    for (int n = 0; n < n_boxes; ++n) {
        if (g_seq[n] < 1 || g_seq[n] > f_seq[n]) {
            throw Error("bounded_singularity_config: need 1 <= g(n) <= f(n)");
        }
        if (n > 0) {
            if (g_seq[n] <= f_seq[n - 1]) {
                throw Error("bounded_singularity_config: rings must be disjoint "
                            "and increasing");
            }
            if (f_seq[n] - g_seq[n] <= f_seq[n - 1] - g_seq[n - 1]) {
                throw Error("bounded_singularity_config: ring thickness must widen");
            }
        }
    }

    RuleConfig s;
    s.kind = ConfigKind::BoxList;
    s.dim = dim;
    s.alphabet = alphabet;
    s.memory = memory;
    s.rules.push_back(std::make_shared<const LocalRule>(gap_rule));
    s.rule_names.push_back("gap");
    int ring_idx = 0;
    if (ring_rule == gap_rule) {
        ring_idx = 0;
    } else {
        s.rules.push_back(std::make_shared<const LocalRule>(ring_rule));
        s.rule_names.push_back("ring");
        ring_idx = 1;
    }
    s.background = 0;

    // each ring is a product of per-coordinate choices [-f,-g] or [g,f]
    for (int n = 0; n < n_boxes; ++n) {
        Coord g = g_seq[n], f = f_seq[n];
        for (int mask = 0; mask < (1 << dim); ++mask) {
            Cell lo(dim), hi(dim);
            for (int j = 0; j < dim; ++j) {
                if (mask & (1 << j)) {
                    lo[j] = g;
                    hi[j] = f;
                } else {
                    lo[j] = -f;
                    hi[j] = -g;
                }
            }
            s.boxes.emplace_back(Box(lo, hi), ring_idx);
        }
    }
    s.validate();
    return s;
}

}  // namespace anuca
