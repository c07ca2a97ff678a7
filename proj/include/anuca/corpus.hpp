#pragma once

#include "anuca/analysis.hpp"

namespace anuca {

// A builtin example plus the battery of expected verdicts it must
// reproduce; the battery doubles as the golden suite.
struct ExpectedClaim {
    std::string op;
    int radius = 0;
    Cell cell;           // determining-radius / lift probes
    std::string expect;  // verdict string the run must produce
};

struct NamedExample {
    std::string name;
    RuleConfig config;
    std::vector<ExpectedClaim> expected;
};

std::vector<std::string> builtin_names();
NamedExample builtin(const std::string& name);

struct ClaimOutcome {
    std::string op;
    std::string params;
    std::string expected;
    std::string got;
    bool ok = false;
    // refutation/witness certificate, with the config it refers to (a
    // stable-injectivity refutation may belong to an orbit limit, not s)
    std::optional<Certificate> certificate;
    std::optional<RuleConfig> certificate_config;
};

std::vector<ClaimOutcome> run_claims(const NamedExample& example, const Limits& limits);

// Rule configuration constant on a family of concentric rings
// {a : g_seq[n] <= |a| <= f_seq[n]}^d and equal to gap_rule elsewhere.
RuleConfig bounded_singularity_config(int dim, const std::vector<Coord>& f_seq,
                                      const std::vector<Coord>& g_seq,
                                      const CellSet& memory, int alphabet,
                                      const LocalRule& ring_rule,
                                      const LocalRule& gap_rule, int n_boxes);

}  // namespace anuca
