#include "anuca/json_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

namespace anuca {

namespace {

constexpr const char* kFormat = "anuca-rules-v1";

const Json& require(const Json& j, const char* field) {
    auto it = j.find(field);
    if (it == j.end()) {
        throw SchemaError("missing field '" + std::string(field) + "'");
    }
    return *it;
}

Cell parse_cell_json(const Json& j, int dim) {
    if (!j.is_array() || static_cast<int>(j.size()) != dim) {
        throw SchemaError("cell must be an array of " + std::to_string(dim) +
                          " integers, got " + j.dump());
    }
    Cell c(dim);
    for (int i = 0; i < dim; ++i) {
        if (!j[i].is_number_integer()) throw SchemaError("cell coordinate must be integer");
        c[i] = j[i].get<Coord>();
    }
    return c;
}

LocalRule parse_table(const std::string& name, const std::string& digits, int alphabet,
                      std::uint64_t expected_len) {
    if (digits.size() != expected_len) {
        throw SchemaError("rule '" + name + "' has table length " +
                          std::to_string(digits.size()) + ", expected " +
                          std::to_string(expected_len));
    }
    LocalRule rule;
    rule.table.reserve(digits.size());
    for (char c : digits) {
        if (c < '0' || c >= '0' + alphabet) {
            throw SchemaError("rule '" + name + "' has symbol '" + std::string(1, c) +
                              "' out of range for alphabet " + std::to_string(alphabet));
        }
        rule.table.push_back(static_cast<Symbol>(c - '0'));
    }
    return rule;
}

std::string table_digits(const LocalRule& rule) {
    return packed_string(rule.table);
}

int rule_index_by_name(const RuleConfig& s, const std::string& name) {
    for (std::size_t i = 0; i < s.rule_names.size(); ++i) {
        if (s.rule_names[i] == name) return static_cast<int>(i);
    }
    throw SchemaError("config references unknown rule '" + name + "'");
}

}  // namespace

RuleConfig parse_rule_json(const Json& j) {
    if (require(j, "format").get<std::string>() != kFormat) {
        throw SchemaError("unsupported format '" +
                          require(j, "format").get<std::string>() + "'");
    }
    RuleConfig s;
    s.dim = require(j, "dim").get<int>();
    s.alphabet = require(j, "alphabet").get<int>();
    if (s.dim < 1) throw SchemaError("dim must be >= 1");
    if (s.alphabet < 2 || s.alphabet > 10) {
        throw SchemaError("alphabet must be between 2 and 10 in rule files");
    }

    const Json& mem = require(j, "memory");
    if (!mem.is_array() || mem.empty()) throw SchemaError("memory must be a nonempty array");
    std::vector<Cell> offsets;
    for (const Json& cj : mem) offsets.push_back(parse_cell_json(cj, s.dim));
    for (std::size_t i = 1; i < offsets.size(); ++i) {
        if (!lex_less(offsets[i - 1], offsets[i])) {
            throw SchemaError("memory offsets must be strictly ascending in canonical order");
        }
    }
    s.memory = CellSet::from_cells(s.dim, offsets);

    std::uint64_t expected_len = pow_checked(s.alphabet, s.memory.size());
    const Json& rules = require(j, "rules");
    if (!rules.is_object() || rules.empty()) {
        throw SchemaError("rules must be a nonempty object");
    }
    for (auto it = rules.begin(); it != rules.end(); ++it) {
        if (!it.value().is_string()) {
            throw SchemaError("rule '" + it.key() + "' must be a digit string");
        }
        s.rule_names.push_back(it.key());
        s.rules.push_back(std::make_shared<const LocalRule>(
            parse_table(it.key(), it.value().get<std::string>(), s.alphabet, expected_len)));
    }

    const Json& config = require(j, "config");
    std::string variant = require(config, "variant").get<std::string>();
    auto parse_patch = [&](const Json& cj) {
        std::map<Cell, int> patch;
        if (!cj.contains("patch")) return patch;
        for (const Json& entry : cj["patch"]) {
            if (!entry.is_array() || entry.size() != 2) {
                throw SchemaError("patch entries must be [cell, rule-name] pairs");
            }
            Cell cell = parse_cell_json(entry[0], s.dim);
            if (patch.count(cell)) {
                throw SchemaError("duplicate patch cell " + format_cell(cell));
            }
            patch.emplace(std::move(cell), rule_index_by_name(s, entry[1].get<std::string>()));
        }
        return patch;
    };
    if (variant == "constant") {
        s.kind = ConfigKind::Constant;
        s.background = rule_index_by_name(s, require(config, "rule").get<std::string>());
    } else if (variant == "patched") {
        s.kind = ConfigKind::Patched;
        s.background =
            rule_index_by_name(s, require(config, "background").get<std::string>());
        s.patch = parse_patch(config);
    } else if (variant == "two_sided_1d") {
        s.kind = ConfigKind::TwoSided1D;
        if (s.dim != 1) throw SchemaError("two_sided_1d requires dim 1");
        s.left = rule_index_by_name(s, require(config, "left").get<std::string>());
        s.right = rule_index_by_name(s, require(config, "right").get<std::string>());
        s.cut = require(config, "cut").get<Coord>();
        s.patch = parse_patch(config);
    } else if (variant == "box_list") {
        s.kind = ConfigKind::BoxList;
        s.background =
            rule_index_by_name(s, require(config, "background").get<std::string>());
        for (const Json& entry : require(config, "boxes")) {
            if (!entry.is_array() || entry.size() != 2) {
                throw SchemaError("boxes entries must be [[lo, hi], rule-name] pairs");
            }
            const Json& bounds = entry[0];
            if (!bounds.is_array() || bounds.size() != 2) {
                throw SchemaError("box bounds must be [lo, hi]");
            }
            Box box(parse_cell_json(bounds[0], s.dim), parse_cell_json(bounds[1], s.dim));
            s.boxes.emplace_back(std::move(box),
                                 rule_index_by_name(s, entry[1].get<std::string>()));
        }
        s.patch = parse_patch(config);
    } else {
        throw SchemaError("unknown config variant '" + variant + "'");
    }
    try {
        s.validate();
    } catch (const Error& e) {
        throw SchemaError(e.what());
    }
    return s;
}

RuleConfig load_rule_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open rule file '" + path + "'");
    Json j;
    try {
        in >> j;
    } catch (const Json::parse_error& e) {
        throw SchemaError("rule file '" + path + "': " + e.what());
    }
    try {
        return parse_rule_json(j);
    } catch (const SchemaError& e) {
        throw SchemaError("rule file '" + path + "': " + e.what());
    }
}

Json rule_config_json(const RuleConfig& s) {
    if (s.alphabet > 10) throw Error("digit-string serialization needs alphabet <= 10");
    Json j;
    j["format"] = kFormat;
    j["dim"] = s.dim;
    j["alphabet"] = s.alphabet;
    Json mem = Json::array();
    for (const Cell& m : s.memory) mem.push_back(cell_json(m));
    j["memory"] = mem;
    Json rules = Json::object();
    for (std::size_t i = 0; i < s.rules.size(); ++i) {
        rules[s.rule_names[i]] = table_digits(*s.rules[i]);
    }
    j["rules"] = rules;

    Json config;
    config["variant"] = kind_name(s.kind);
    auto patch_json = [&]() {
        Json arr = Json::array();
        for (const auto& [cell, idx] : s.patch) {
            arr.push_back(Json::array({cell_json(cell), s.rule_names[idx]}));
        }
        return arr;
    };
    switch (s.kind) {
        case ConfigKind::Constant:
            config["rule"] = s.rule_names[s.background];
            break;
        case ConfigKind::Patched:
            config["background"] = s.rule_names[s.background];
            config["patch"] = patch_json();
            break;
        case ConfigKind::TwoSided1D:
            config["left"] = s.rule_names[s.left];
            config["right"] = s.rule_names[s.right];
            config["cut"] = s.cut;
            config["patch"] = patch_json();
            break;
        case ConfigKind::BoxList: {
            config["background"] = s.rule_names[s.background];
            Json arr = Json::array();
            for (const auto& [box, idx] : s.boxes) {
                arr.push_back(Json::array(
                    {Json::array({cell_json(box.lo()), cell_json(box.hi())}),
                     s.rule_names[idx]}));
            }
            config["boxes"] = arr;
            config["patch"] = patch_json();
            break;
        }
    }
    j["config"] = config;
    return j;
}

std::string config_hash(const RuleConfig& s) {
    std::uint64_t h = fnv1a_str(rule_config_json(s).dump());
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

Json cell_json(const Cell& c) {
    Json j = Json::array();
    for (Coord v : c) j.push_back(v);
    return j;
}

Json cellset_json(const CellSet& s) {
    Json j = Json::array();
    for (const Cell& c : s) j.push_back(cell_json(c));
    return j;
}

Json box_json(const Box& b) {
    return Json{{"lo", cell_json(b.lo())}, {"hi", cell_json(b.hi())}};
}

Json pattern_json(const Pattern& p) {
    return Json{{"support", cellset_json(p.support)},
                {"symbols", packed_string(p.symbols)}};
}

Json certificate_json(const Certificate& cert) {
    Json j;
    j["kind"] = cert.kind();
    if (const auto* c = cert.as<CollisionAsymptotic>()) {
        j["radius"] = c->radius;
        j["background"] = static_cast<int>(c->background);
        j["a"] = pattern_json(c->a);
        j["b"] = pattern_json(c->b);
        j["compare_window"] = cellset_json(c->compare_window);
        j["differs_at"] = cell_json(c->differs_at);
    } else if (const auto* c = cert.as<CollisionPeriodic>()) {
        j["box"] = box_json(c->box);
        j["a"] = pattern_json(c->a);
        j["b"] = pattern_json(c->b);
        j["differs_at"] = cell_json(c->differs_at);
        j["lift_genuine"] = c->lift_genuine;
    } else if (const auto* c = cert.as<MissingImagePattern>()) {
        j["radius"] = c->radius;
        j["window"] = cellset_json(c->window);
        j["pattern"] = packed_string(c->missing.symbols);
    } else if (const auto* c = cert.as<InverseSynthesized>()) {
        j["radius"] = c->radius;
        j["memory"] = cellset_json(c->memory);
        j["inverse"] = rule_config_json(*c->inverse);
    } else if (const auto* c = cert.as<PsiBijection>()) {
        j["box"] = box_json(c->box);
        j["size"] = c->size;
        char buf[17];
        std::snprintf(buf, sizeof(buf), "%016llx",
                      static_cast<unsigned long long>(c->digest));
        j["digest"] = std::string(buf);
    } else if (const auto* c = cert.as<LiftWitness>()) {
        j["cell"] = cell_json(c->cell);
        j["neighborhood"] = cellset_json(c->neighborhood);
        j["window_radius"] = c->window_radius;
        j["background"] = static_cast<int>(c->background);
        Json cases = Json::array();
        for (const LiftCase& lc : c->cases) {
            cases.push_back(Json{{"x", pattern_json(lc.x)},
                                 {"flip_to", static_cast<int>(lc.flip_to)},
                                 {"z", pattern_json(lc.z)}});
        }
        j["cases"] = cases;
        j["note"] = c->note;
    } else if (const auto* c = cert.as<LiftFailure>()) {
        j["cell"] = cell_json(c->cell);
        j["neighborhood"] = cellset_json(c->neighborhood);
        j["window_radius"] = c->window_radius;
        j["background"] = static_cast<int>(c->background);
        j["x"] = pattern_json(c->x);
        j["flip_to"] = static_cast<int>(c->flip_to);
        j["note"] = c->note;
    } else if (const auto* c = cert.as<Inconclusive>()) {
        j["bound"] = c->bound;
        j["note"] = c->note;
    }
    return j;
}

Box parse_box_spec(const std::string& text) {
    std::vector<Coord> lo, hi;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        std::string part =
            text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        std::size_t dots = part.find("..", part.empty() || part[0] != '-' ? 0 : 1);
        if (dots == std::string::npos) {
            throw Error("box spec part '" + part + "' must look like lo..hi");
        }
        try {
            lo.push_back(std::stoll(part.substr(0, dots)));
            hi.push_back(std::stoll(part.substr(dots + 2)));
        } catch (const std::exception&) {
            throw Error("box spec part '" + part + "' has non-integer bounds");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    Cell lo_cell(lo.begin(), lo.end()), hi_cell(hi.begin(), hi.end());
    return Box(lo_cell, hi_cell);
}

Cell parse_cell_spec(const std::string& text) {
    Cell c;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        std::string part =
            text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        try {
            c.push_back(std::stoll(part));
        } catch (const std::exception&) {
            throw Error("cell spec part '" + part + "' is not an integer");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return c;
}

Pattern parse_pattern_spec(const std::string& text, int dim, int alphabet,
                           const std::optional<Box>& window) {
    if (text.find('=') == std::string::npos) {
        if (!window) throw Error("packed pattern input needs a window box");
        CellSet cells = window->cell_set();
        std::vector<Symbol> symbols = parse_packed(text, alphabet);
        if (symbols.size() != cells.size()) {
            throw Error("packed pattern has " + std::to_string(symbols.size()) +
                        " digits, window has " + std::to_string(cells.size()) + " cells");
        }
        return Pattern{std::move(cells), std::move(symbols)};
    }
    std::vector<Cell> cells;
    std::vector<Symbol> symbols;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t semi = text.find(';', pos);
        std::string item =
            text.substr(pos, semi == std::string::npos ? std::string::npos : semi - pos);
        std::size_t eq = item.find('=');
        if (eq == std::string::npos) {
            throw Error("pattern item '" + item + "' must look like cell=symbol");
        }
        Cell c = parse_cell_spec(item.substr(0, eq));
        if (static_cast<int>(c.size()) != dim) {
            throw Error("pattern cell " + format_cell(c) + " has wrong dimension");
        }
        int v = std::stoi(item.substr(eq + 1));
        if (v < 0 || v >= alphabet) throw Error("pattern symbol out of range");
        cells.push_back(std::move(c));
        symbols.push_back(static_cast<Symbol>(v));
        if (semi == std::string::npos) break;
        pos = semi + 1;
    }
    // sort into canonical order keeping symbols aligned
    std::vector<std::size_t> order(cells.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return lex_less(cells[a], cells[b]); });
    std::vector<Cell> sorted_cells;
    std::vector<Symbol> sorted_symbols;
    for (std::size_t i : order) {
        if (!sorted_cells.empty() && sorted_cells.back() == cells[i]) {
            throw Error("duplicate pattern cell " + format_cell(cells[i]));
        }
        sorted_cells.push_back(cells[i]);
        sorted_symbols.push_back(symbols[i]);
    }
    return Pattern{CellSet::from_cells(dim, sorted_cells), std::move(sorted_symbols)};
}

}  // namespace anuca
