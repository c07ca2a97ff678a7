#include "anuca/rules.hpp"

#include <algorithm>

#include "anuca/rng.hpp"

namespace anuca {

std::string kind_name(ConfigKind kind) {
    switch (kind) {
        case ConfigKind::Constant: return "constant";
        case ConfigKind::Patched: return "patched";
        case ConfigKind::TwoSided1D: return "two_sided_1d";
        case ConfigKind::BoxList: return "box_list";
    }
    throw Error("unknown config kind");
}

void RuleConfig::validate() const {
    if (dim < 1) throw Error("dimension must be >= 1");
    if (alphabet < 2) throw Error("alphabet must have at least 2 symbols");
    if (memory.dim() != dim) throw Error("memory set dimension mismatch");
    if (memory.empty()) throw Error("memory set must be nonempty");
    if (rules.empty()) throw Error("config lists no rules");
    std::uint64_t entries = table_size();
    for (std::size_t i = 0; i < rules.size(); ++i) {
        if (!rules[i]) throw Error("null rule " + std::to_string(i));
        if (rules[i]->table.size() != entries) {
            throw Error("rule " + (i < rule_names.size() ? rule_names[i] : std::to_string(i)) +
                        " has table length " + std::to_string(rules[i]->table.size()) +
                        ", expected " + std::to_string(entries));
        }
        for (Symbol v : rules[i]->table) {
            if (v >= alphabet) {
                throw Error("rule " + (i < rule_names.size() ? rule_names[i] : std::to_string(i)) +
                            " has symbol out of range");
            }
        }
    }
    auto check_index = [&](int idx, const char* what) {
        if (idx < 0 || idx >= static_cast<int>(rules.size())) {
            throw Error(std::string(what) + " rule index out of range");
        }
    };
    switch (kind) {
        case ConfigKind::Constant:
            check_index(background, "background");
            break;
        case ConfigKind::Patched:
            check_index(background, "background");
            break;
        case ConfigKind::TwoSided1D:
            if (dim != 1) throw Error("two_sided_1d requires dimension 1");
            check_index(left, "left");
            check_index(right, "right");
            break;
        case ConfigKind::BoxList:
            check_index(background, "background");
            for (const auto& [box, idx] : boxes) {
                if (box.dim() != dim) throw Error("box dimension mismatch");
                check_index(idx, "box");
            }
            break;
    }
    for (const auto& [cell, idx] : patch) {
        if (static_cast<int>(cell.size()) != dim) throw Error("patch cell dimension mismatch");
        check_index(idx, "patch");
    }
}

std::uint64_t RuleConfig::table_size() const {
    return pow_checked(static_cast<std::uint64_t>(alphabet), memory.size());
}

Coord RuleConfig::memory_radius() const {
    Coord r = 0;
    for (const Cell& m : memory) r = std::max(r, inf_norm(m));
    return r;
}

int RuleConfig::rule_index_at(const Cell& g) const {
    if (static_cast<int>(g.size()) != dim) {
        throw DimensionMismatch("rule_at: cell dimension mismatch");
    }
    if (!patch.empty()) {
        auto it = patch.find(g);
        if (it != patch.end()) return it->second;
    }
    switch (kind) {
        case ConfigKind::Constant:
        case ConfigKind::Patched:
            return background;
        case ConfigKind::TwoSided1D:
            return g[0] <= cut ? left : right;
        case ConfigKind::BoxList:
            for (const auto& [box, idx] : boxes) {
                if (box.contains(g)) return idx;
            }
            return background;
    }
    throw Error("unknown config kind");
}

Symbol RuleConfig::eval(const Cell& g, std::span<const Symbol> neighborhood) const {
    if (neighborhood.size() != memory.size()) {
        throw Error("neighborhood size mismatch");
    }
    return rule_at(g).table[encode_symbols(neighborhood, alphabet)];
}

CellSet RuleConfig::special_cells() const {
    std::vector<Cell> cells;
    for (const auto& [cell, idx] : patch) cells.push_back(cell);
    if (kind == ConfigKind::BoxList) {
        for (const auto& [box, idx] : boxes) {
            CellSet bc = box.cell_set();
            cells.insert(cells.end(), bc.begin(), bc.end());
        }
    }
    return CellSet::from_cells(dim, std::move(cells));
}

std::optional<int> RuleConfig::effectively_constant() const {
    int base = kind == ConfigKind::TwoSided1D ? left : background;
    if (kind == ConfigKind::TwoSided1D && !(*rules[left] == *rules[right])) {
        return std::nullopt;
    }
    for (const Cell& g : special_cells()) {
        if (!(rule_at(g) == *rules[base])) return std::nullopt;
    }
    return base;
}

bool RuleConfig::operator==(const RuleConfig& other) const {
    if (kind != other.kind || dim != other.dim || alphabet != other.alphabet ||
        !(memory == other.memory)) {
        return false;
    }
    auto same = [&](int a, int b) { return *rules[a] == *other.rules[b]; };
    switch (kind) {
        case ConfigKind::Constant:
            if (!same(background, other.background)) return false;
            break;
        case ConfigKind::Patched:
            if (!same(background, other.background)) return false;
            break;
        case ConfigKind::TwoSided1D:
            if (cut != other.cut || !same(left, other.left) || !same(right, other.right)) {
                return false;
            }
            break;
        case ConfigKind::BoxList:
            if (!same(background, other.background)) return false;
            if (boxes.size() != other.boxes.size()) return false;
            for (std::size_t i = 0; i < boxes.size(); ++i) {
                if (!(boxes[i].first == other.boxes[i].first) ||
                    !same(boxes[i].second, other.boxes[i].second)) {
                    return false;
                }
            }
            break;
    }
    if (patch.size() != other.patch.size()) return false;
    auto it = other.patch.begin();
    for (const auto& [cell, idx] : patch) {
        if (cell != it->first || !same(idx, it->second)) return false;
        ++it;
    }
    return true;
}

RuleConfig make_constant(int dim, int alphabet, CellSet memory, LocalRule rule,
                         std::string name) {
    RuleConfig s;
    s.kind = ConfigKind::Constant;
    s.dim = dim;
    s.alphabet = alphabet;
    s.memory = std::move(memory);
    s.rules.push_back(std::make_shared<const LocalRule>(std::move(rule)));
    s.rule_names.push_back(std::move(name));
    s.background = 0;
    s.validate();
    return s;
}

RuleConfig make_patched(const RuleConfig& background_of, int background,
                        std::map<Cell, int> patch) {
    RuleConfig s = background_of;
    s.kind = ConfigKind::Patched;
    s.background = background;
    s.left = s.right = -1;
    s.boxes.clear();
    s.patch = std::move(patch);
    s.validate();
    return s;
}

int intern_rule(RuleConfig& config, const LocalRule& rule) {
    for (std::size_t i = 0; i < config.rules.size(); ++i) {
        if (*config.rules[i] == rule) return static_cast<int>(i);
    }
    config.rules.push_back(std::make_shared<const LocalRule>(rule));
    config.rule_names.push_back("r" + std::to_string(config.rules.size() - 1));
    return static_cast<int>(config.rules.size() - 1);
}

RuleConfig constant_config_like(const RuleConfig& s, int rule_index) {
    RuleConfig c;
    c.kind = ConfigKind::Constant;
    c.dim = s.dim;
    c.alphabet = s.alphabet;
    c.memory = s.memory;
    c.rules.push_back(s.rules[rule_index]);
    c.rule_names.push_back(rule_index < static_cast<int>(s.rule_names.size())
                               ? s.rule_names[rule_index]
                               : "r0");
    c.background = 0;
    c.validate();
    return c;
}

RuleConfig translate_config(const RuleConfig& s, const Cell& g) {
    if (static_cast<int>(g.size()) != s.dim) {
        throw DimensionMismatch("translate_config: dimension mismatch");
    }
    RuleConfig out = s;
    std::map<Cell, int> shifted;
    for (const auto& [cell, idx] : s.patch) shifted.emplace(add_cells(cell, g), idx);
    out.patch = std::move(shifted);
    if (s.kind == ConfigKind::TwoSided1D) out.cut = s.cut + g[0];
    if (s.kind == ConfigKind::BoxList) {
        out.boxes.clear();
        for (const auto& [box, idx] : s.boxes) {
            out.boxes.emplace_back(Box(add_cells(box.lo(), g), add_cells(box.hi(), g)), idx);
        }
    }
    return out;
}

bool LocalView::operator==(const LocalView& other) const {
    if (!(window == other.window) || rules.size() != other.rules.size()) return false;
    for (std::size_t i = 0; i < rules.size(); ++i) {
        if (rules[i] != other.rules[i] && !(*rules[i] == *other.rules[i])) return false;
    }
    return true;
}

std::uint64_t LocalView::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const RulePtr& r : rules) {
        h = fnv1a(std::span<const std::uint8_t>(r->table.data(), r->table.size()), h);
    }
    return h;
}

LocalView local_view(const RuleConfig& s, const CellSet& window) {
    LocalView v;
    v.window = window;
    v.rules.reserve(window.size());
    for (const Cell& e : window) v.rules.push_back(s.rule_ptr_at(e));
    return v;
}

namespace {

LocalView view_at(const RuleConfig& s, const CellSet& window, const Cell& g) {
    LocalView v;
    v.window = window;
    v.rules.reserve(window.size());
    for (const Cell& e : window) v.rules.push_back(s.rule_ptr_at(add_cells(g, e)));
    return v;
}

}  // namespace

ViewClasses::ViewClasses(const RuleConfig& s, CellSet window) : window_(std::move(window)) {
    if (window_.empty()) throw Error("view classes need a nonempty window");
    if (window_.dim() != s.dim) throw DimensionMismatch("view classes: dimension mismatch");

    std::vector<Cell> candidates;
    CellSet specials = s.special_cells();
    if (!specials.empty()) {
        CellSet interacting = minkowski(specials, negate(window_));
        candidates.assign(interacting.begin(), interacting.end());
    }
    std::vector<Cell> far_reps;
    if (s.kind == ConfigKind::TwoSided1D) {
        Coord lo = window_[0][0];
        Coord hi = window_[window_.size() - 1][0];
        // translates whose window straddles the step
        for (Coord g = s.cut + 1 - hi; g <= s.cut - lo; ++g) candidates.push_back({g});
        Coord cand_lo = s.cut, cand_hi = s.cut;
        for (const Cell& c : candidates) {
            cand_lo = std::min(cand_lo, c[0]);
            cand_hi = std::max(cand_hi, c[0]);
        }
        far_reps.push_back({cand_lo - 1});
        far_reps.push_back({cand_hi + 1});
    } else if (s.kind != ConfigKind::Constant && !candidates.empty()) {
        Coord max0 = candidates[0][0];
        for (const Cell& c : candidates) max0 = std::max(max0, c[0]);
        Cell far = zero_cell(s.dim);
        far[0] = max0 + 1;
        far_reps.push_back(far);
    } else {
        far_reps.push_back(zero_cell(s.dim));
    }

    std::sort(candidates.begin(), candidates.end(), lex_less);
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    covered_ = candidates;
    far_reps_ = far_reps;
    candidates.insert(candidates.end(), far_reps.begin(), far_reps.end());

    for (const Cell& g : candidates) {
        LocalView v = view_at(s, window_, g);
        std::uint64_t h = v.hash();
        bool seen = false;
        auto [lo_it, hi_it] = by_hash_.equal_range(h);
        for (auto it = lo_it; it != hi_it; ++it) {
            if (classes_[it->second].view == v) {
                seen = true;
                break;
            }
        }
        if (!seen) {
            by_hash_.emplace(h, classes_.size());
            classes_.push_back(ViewClass{g, std::move(v)});
        }
    }
}

std::size_t ViewClasses::class_of(const RuleConfig& s, const Cell& g) const {
    LocalView v = view_at(s, window_, g);
    auto [lo_it, hi_it] = by_hash_.equal_range(v.hash());
    for (auto it = lo_it; it != hi_it; ++it) {
        if (classes_[it->second].view == v) return it->second;
    }
    throw Error("cell " + format_cell(g) + " matches no view class; classes incomplete");
}

OrbitClosure orbit_closure(const RuleConfig& s) {
    OrbitClosure out;
    switch (s.kind) {
        case ConfigKind::Constant:
            out.translates_hint = "constant configuration; the orbit is a single point";
            out.limit_points.push_back(s);
            break;
        case ConfigKind::Patched:
        case ConfigKind::BoxList:
            out.translates_hint =
                "translates of s; any escaping sequence converges to the constant background";
            out.limit_points.push_back(constant_config_like(s, s.background));
            break;
        case ConfigKind::TwoSided1D: {
            out.translates_hint =
                "translates of s; escaping sequences converge to the one-sided constants";
            out.limit_points.push_back(constant_config_like(s, s.left));
            RuleConfig right = constant_config_like(s, s.right);
            if (!(right == out.limit_points.front())) {
                out.limit_points.push_back(std::move(right));
            }
            break;
        }
    }
    return out;
}

LocalRule projection_rule(int alphabet, std::size_t memory_size, std::size_t offset_index) {
    return make_rule_table(alphabet, memory_size, [offset_index](std::span<const Symbol> n) {
        return n[offset_index];
    });
}

}  // namespace anuca
