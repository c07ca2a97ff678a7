#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "anuca/pattern.hpp"

namespace anuca {

// One local transition table A^M -> A. Entry i is the output for the
// neighborhood pattern whose symbol at the j-th memory offset is the j-th
// base-q digit of i (least significant digit = offset index 0).
struct LocalRule {
    std::vector<Symbol> table;
    bool operator==(const LocalRule& other) const = default;
};

using RulePtr = std::shared_ptr<const LocalRule>;

enum class ConfigKind { Constant, Patched, TwoSided1D, BoxList };

std::string kind_name(ConfigKind kind);

// Finitely-described assignment of a local rule to every cell of Z^d.
// All rules share one memory set and one alphabet. Patch entries override
// everything; in a BoxList the first box containing a cell wins over the
// background. Values are immutable after construction.
struct RuleConfig {
    ConfigKind kind = ConfigKind::Constant;
    int dim = 1;
    int alphabet = 2;
    CellSet memory;
    std::vector<std::string> rule_names;
    std::vector<RulePtr> rules;

    int background = -1;                    // Constant / Patched / BoxList
    int left = -1;                          // TwoSided1D
    int right = -1;                         // TwoSided1D
    Coord cut = 0;                          // TwoSided1D: left applies to g <= cut
    std::vector<std::pair<Box, int>> boxes; // BoxList
    std::map<Cell, int> patch;              // Patched / TwoSided1D / BoxList

    void validate() const;

    std::uint64_t table_size() const;  // q^{|M|}
    Coord memory_radius() const;

    int rule_index_at(const Cell& g) const;
    const LocalRule& rule_at(const Cell& g) const { return *rules[rule_index_at(g)]; }
    RulePtr rule_ptr_at(const Cell& g) const { return rules[rule_index_at(g)]; }

    Symbol eval(const Cell& g, std::span<const Symbol> neighborhood) const;

    // Cells whose rule can differ from the far description (patch keys and,
    // for a BoxList, the box cells). The TwoSided1D step is not included;
    // code that cares about the step handles it explicitly.
    CellSet special_cells() const;

    // Index of the single rule governing every cell, when one exists.
    std::optional<int> effectively_constant() const;

    bool operator==(const RuleConfig& other) const;  // structural, names ignored
};

RuleConfig make_constant(int dim, int alphabet, CellSet memory, LocalRule rule,
                         std::string name = "r0");
RuleConfig make_patched(const RuleConfig& background_of, int background,
                        std::map<Cell, int> patch);

// Adds the table to the config's rule list if not already present; returns
// its index.
int intern_rule(RuleConfig& config, const LocalRule& rule);

// Constant config reusing s's alphabet/memory and the rule at index.
RuleConfig constant_config_like(const RuleConfig& s, int rule_index);

// Left translation: result(h) = s(h - g).
RuleConfig translate_config(const RuleConfig& s, const Cell& g);

// Restriction s|_E with table-level equality and a stable hash.
struct LocalView {
    CellSet window;
    std::vector<RulePtr> rules;

    bool operator==(const LocalView& other) const;
    std::uint64_t hash() const;
};

LocalView local_view(const RuleConfig& s, const CellSet& window);

// One representative per equality class of the views of all translates of
// s on `window`; every cell of Z^d is represented.
struct ViewClass {
    Cell representative;
    LocalView view;
};

class ViewClasses {
public:
    ViewClasses(const RuleConfig& s, CellSet window);

    const CellSet& window() const { return window_; }
    const std::vector<ViewClass>& classes() const { return classes_; }
    std::size_t size() const { return classes_.size(); }

    // Cells that may see a non-far view; everything outside matches one of
    // the far representatives.
    const std::vector<Cell>& covered_cells() const { return covered_; }
    const std::vector<Cell>& far_representatives() const { return far_reps_; }

    std::size_t class_of(const RuleConfig& s, const Cell& g) const;

private:
    CellSet window_;
    std::vector<ViewClass> classes_;
    std::vector<Cell> covered_;
    std::vector<Cell> far_reps_;
    std::multimap<std::uint64_t, std::size_t> by_hash_;
};

inline ViewClasses distinct_view_classes(const RuleConfig& s, const CellSet& window) {
    return ViewClasses(s, window);
}

struct OrbitClosure {
    std::string translates_hint;
    std::vector<RuleConfig> limit_points;
};

OrbitClosure orbit_closure(const RuleConfig& s);

// Table constructors.
template <class Fn>
LocalRule make_rule_table(int alphabet, std::size_t memory_size, Fn&& fn) {
    LocalRule rule;
    std::uint64_t entries = pow_checked(static_cast<std::uint64_t>(alphabet), memory_size);
    rule.table.resize(entries);
    std::vector<Symbol> digits(memory_size, 0);
    for (std::uint64_t code = 0; code < entries; ++code) {
        rule.table[code] = fn(std::span<const Symbol>(digits));
        next_symbols(digits, alphabet);
    }
    return rule;
}

LocalRule projection_rule(int alphabet, std::size_t memory_size, std::size_t offset_index);

}  // namespace anuca
