#pragma once

#include "anuca/limits.hpp"
#include "anuca/rules.hpp"

namespace anuca {

// Evaluator for one output window E: precomputes, per output cell, the rule
// table and the positions of its neighborhood inside the input domain EM.
// Borrows the config's rule tables; keep the config alive while evaluating.
class WindowEvaluator {
public:
    WindowEvaluator(const RuleConfig& s, CellSet window);

    const CellSet& window() const { return window_; }
    const CellSet& domain() const { return domain_; }
    int alphabet() const { return alphabet_; }

    // in: symbols over domain() in canonical order; out: window() order.
    void apply(std::span<const Symbol> in, std::span<Symbol> out) const;

private:
    CellSet window_;
    CellSet domain_;
    int alphabet_ = 2;
    std::size_t mem_size_ = 0;
    std::vector<const Symbol*> tables_;
    std::vector<std::uint32_t> neighbor_;
};

// The induced map on a finite window: input must cover minkowski(E, M)
// exactly; output covers E.
Pattern apply_window(const RuleConfig& s, const CellSet& window, const Pattern& x);

// Convenience wrapper: fills the required input domain from `x` where
// defined and from `background` elsewhere.
Pattern apply_window_bg(const RuleConfig& s, const CellSet& window, const Pattern& x,
                        Symbol background);

// Periodic lift: value of the K-periodic extension of x at g.
Symbol lift_eval(const Pattern& x, const Box& k, const Cell& g);

// One application of the periodized map on A^K.
Pattern apply_periodized(const RuleConfig& s, const Box& k, const Pattern& x);

// Evaluator reading inputs through the K-periodic lift.
class PeriodicEvaluator {
public:
    PeriodicEvaluator(const RuleConfig& s, const Box& k);

    const Box& box() const { return box_; }
    const CellSet& cells() const { return cells_; }
    int alphabet() const { return alphabet_; }

    void apply(std::span<const Symbol> in, std::span<Symbol> out) const;

private:
    Box box_;
    CellSet cells_;
    int alphabet_ = 2;
    std::size_t mem_size_ = 0;
    std::vector<const Symbol*> tables_;
    std::vector<std::uint32_t> neighbor_;
};

// Fully materialized periodized map: forward[code(x)] = code of the image.
struct PeriodizedMap {
    Box box;
    int alphabet;
    std::uint64_t size;                  // q^{|K|}
    std::vector<std::uint64_t> forward;
};

PeriodizedMap materialize_periodized(const RuleConfig& s, const Box& k,
                                     const Limits& limits = {});

// Configuration q with sigma_q = sigma_s . sigma_t, over the Minkowski sum
// of the two memories. The result kind follows the operands: constants stay
// constant, eventually-constant pairs become patched, and any two-sided
// operand (dimension 1) yields a two-sided result.
RuleConfig compose(const RuleConfig& s, const RuleConfig& t, const Limits& limits = {});

}  // namespace anuca
