#include "anuca/pattern.hpp"

namespace anuca {

Symbol Pattern::at(const Cell& c) const {
    auto idx = support.index_of(c);
    if (!idx) throw Error("pattern has no cell " + format_cell(c));
    return symbols[*idx];
}

std::uint64_t pow_checked(std::uint64_t q, std::uint64_t n) {
    std::uint64_t r = 1;
    for (std::uint64_t i = 0; i < n; ++i) {
        if (r > UINT64_MAX / q) throw OverflowError("pattern space exceeds 64 bits");
        r *= q;
    }
    return r;
}

bool pow_fits(std::uint64_t q, std::uint64_t n, std::uint64_t limit) {
    std::uint64_t r = 1;
    for (std::uint64_t i = 0; i < n; ++i) {
        if (r > limit / q) return false;
        r *= q;
    }
    return r <= limit;
}

std::uint64_t encode_symbols(std::span<const Symbol> symbols, int q) {
    std::uint64_t code = 0;
    std::uint64_t place = 1;
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        code += place * symbols[i];
        if (i + 1 < symbols.size()) {
            if (place > UINT64_MAX / static_cast<std::uint64_t>(q)) {
                throw OverflowError("pattern code exceeds 64 bits");
            }
            place *= static_cast<std::uint64_t>(q);
        }
    }
    return code;
}

void decode_symbols(std::uint64_t code, int q, std::span<Symbol> out) {
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = static_cast<Symbol>(code % static_cast<std::uint64_t>(q));
        code /= static_cast<std::uint64_t>(q);
    }
}

bool next_symbols(std::span<Symbol> symbols, int q) {
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        if (symbols[i] + 1 < q) {
            ++symbols[i];
            return true;
        }
        symbols[i] = 0;
    }
    return false;
}

void decode_symbols_lex(std::uint64_t rank, int q, std::span<Symbol> out) {
    for (std::size_t i = out.size(); i-- > 0;) {
        out[i] = static_cast<Symbol>(rank % static_cast<std::uint64_t>(q));
        rank /= static_cast<std::uint64_t>(q);
    }
}

bool next_symbols_lex(std::span<Symbol> symbols, int q) {
    for (std::size_t i = symbols.size(); i-- > 0;) {
        if (symbols[i] + 1 < q) {
            ++symbols[i];
            return true;
        }
        symbols[i] = 0;
    }
    return false;
}

std::string packed_string(std::span<const Symbol> symbols) {
    std::string s;
    s.reserve(symbols.size());
    for (Symbol v : symbols) s.push_back(static_cast<char>('0' + v));
    return s;
}

std::vector<Symbol> parse_packed(const std::string& text, int q) {
    std::vector<Symbol> out;
    out.reserve(text.size());
    for (char c : text) {
        if (c < '0' || c >= '0' + q) {
            throw Error("packed pattern digit '" + std::string(1, c) +
                        "' out of range for alphabet " + std::to_string(q));
        }
        out.push_back(static_cast<Symbol>(c - '0'));
    }
    return out;
}

Pattern make_pattern(CellSet support, std::vector<Symbol> symbols, int q) {
    if (support.size() != symbols.size()) {
        throw Error("pattern symbol count " + std::to_string(symbols.size()) +
                    " does not match support size " + std::to_string(support.size()));
    }
    for (Symbol v : symbols) {
        if (v >= q) throw Error("pattern symbol out of range");
    }
    return Pattern{std::move(support), std::move(symbols)};
}

Pattern restrict_pattern(const Pattern& p, const CellSet& sub) {
    std::vector<Symbol> out;
    out.reserve(sub.size());
    for (const Cell& c : sub) out.push_back(p.at(c));
    return Pattern{sub, std::move(out)};
}

Pattern extend_pattern(const Pattern& p, const CellSet& support, Symbol background) {
    std::vector<Symbol> out;
    out.reserve(support.size());
    for (const Cell& c : support) {
        auto idx = p.support.index_of(c);
        out.push_back(idx ? p.symbols[*idx] : background);
    }
    return Pattern{support, std::move(out)};
}

Pattern translate_pattern(const Pattern& p, const Cell& g) {
    // translation preserves canonical order, so symbols stay aligned
    return Pattern{translate(p.support, g), p.symbols};
}

}  // namespace anuca
