#pragma once

#include <json.hpp>

#include "anuca/analysis.hpp"
#include "anuca/corpus.hpp"

namespace anuca {

using Json = nlohmann::json;

struct SchemaError : Error {
    using Error::Error;
};

// Rule-file format "anuca-rules-v1": dim, alphabet, memory in canonical
// order, named rule tables as digit strings (entry i = output for the
// pattern whose j-th memory offset carries the j-th base-q digit of i), and
// a config referencing rules by name.
RuleConfig parse_rule_json(const Json& j);
RuleConfig load_rule_file(const std::string& path);
Json rule_config_json(const RuleConfig& s);
std::string config_hash(const RuleConfig& s);

Json cell_json(const Cell& c);
Json cellset_json(const CellSet& s);
Json box_json(const Box& b);
Json pattern_json(const Pattern& p);
Json certificate_json(const Certificate& cert);

// CLI argument grammars: boxes as "lo..hi[,lo..hi]*", cells as "c[,c]*",
// patterns as packed digits over a declared box or "cell=symbol;..." pairs.
Box parse_box_spec(const std::string& text);
Cell parse_cell_spec(const std::string& text);
Pattern parse_pattern_spec(const std::string& text, int dim, int alphabet,
                           const std::optional<Box>& window);

}  // namespace anuca
