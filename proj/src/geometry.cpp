#include "anuca/geometry.hpp"

#include <algorithm>
#include <sstream>

namespace anuca {

namespace {

void check_dim(const Cell& a, const Cell& b) {
    if (a.size() != b.size()) {
        throw DimensionMismatch("cell dimension mismatch: " + format_cell(a) +
                                " vs " + format_cell(b));
    }
}

Coord checked_add(Coord a, Coord b) {
    Coord r;
    if (__builtin_add_overflow(a, b, &r)) {
        throw OverflowError("coordinate overflow");
    }
    return r;
}

}  // namespace

Cell zero_cell(int dim) { return Cell(static_cast<std::size_t>(dim), 0); }

Cell add_cells(const Cell& a, const Cell& b) {
    check_dim(a, b);
    Cell r(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) r[j] = checked_add(a[j], b[j]);
    return r;
}

Cell sub_cells(const Cell& a, const Cell& b) {
    check_dim(a, b);
    Cell r(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) {
        Coord v;
        if (__builtin_sub_overflow(a[j], b[j], &v)) {
            throw OverflowError("coordinate overflow");
        }
        r[j] = v;
    }
    return r;
}

Cell negate_cell(const Cell& a) {
    Cell r(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) {
        if (a[j] == INT64_MIN) throw OverflowError("coordinate overflow");
        r[j] = -a[j];
    }
    return r;
}

bool lex_less(const Cell& a, const Cell& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

Coord inf_norm(const Cell& a) {
    Coord n = 0;
    for (Coord c : a) n = std::max(n, c < 0 ? -c : c);
    return n;
}

std::string format_cell(const Cell& a) {
    std::ostringstream os;
    os << '(';
    for (std::size_t j = 0; j < a.size(); ++j) {
        if (j) os << ',';
        os << a[j];
    }
    os << ')';
    return os.str();
}

CellSet CellSet::from_cells(int dim, std::vector<Cell> cells) {
    for (const Cell& c : cells) {
        if (static_cast<int>(c.size()) != dim) {
            throw DimensionMismatch("cell " + format_cell(c) +
                                    " does not have dimension " + std::to_string(dim));
        }
    }
    std::sort(cells.begin(), cells.end(), lex_less);
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    CellSet s(dim);
    s.cells_ = std::move(cells);
    return s;
}

bool CellSet::contains(const Cell& c) const {
    return std::binary_search(cells_.begin(), cells_.end(), c, lex_less);
}

std::optional<std::size_t> CellSet::index_of(const Cell& c) const {
    auto it = std::lower_bound(cells_.begin(), cells_.end(), c, lex_less);
    if (it == cells_.end() || *it != c) return std::nullopt;
    return static_cast<std::size_t>(it - cells_.begin());
}

bool CellSet::is_subset_of(const CellSet& other) const {
    return std::includes(other.cells_.begin(), other.cells_.end(),
                         cells_.begin(), cells_.end(), lex_less);
}

CellSet translate(const CellSet& e, const Cell& g) {
    if (e.dim() != static_cast<int>(g.size())) {
        throw DimensionMismatch("translate: dimension mismatch");
    }
    std::vector<Cell> out;
    out.reserve(e.size());
    for (const Cell& c : e) out.push_back(add_cells(c, g));
    // translation preserves lexicographic order
    CellSet s = CellSet::from_cells(e.dim(), std::move(out));
    return s;
}

CellSet minkowski(const CellSet& e, const CellSet& m) {
    if (e.dim() != m.dim()) {
        throw DimensionMismatch("minkowski: dimension mismatch");
    }
    std::vector<Cell> out;
    out.reserve(e.size() * m.size());
    for (const Cell& a : e) {
        for (const Cell& b : m) out.push_back(add_cells(a, b));
    }
    return CellSet::from_cells(e.dim(), std::move(out));
}

CellSet set_union(const CellSet& a, const CellSet& b) {
    if (a.dim() != b.dim() && !a.empty() && !b.empty()) {
        throw DimensionMismatch("set_union: dimension mismatch");
    }
    std::vector<Cell> out = a.cells();
    out.insert(out.end(), b.begin(), b.end());
    return CellSet::from_cells(a.empty() ? b.dim() : a.dim(), std::move(out));
}

CellSet set_difference(const CellSet& a, const CellSet& b) {
    std::vector<Cell> out;
    for (const Cell& c : a) {
        if (!b.contains(c)) out.push_back(c);
    }
    return CellSet::from_cells(a.dim(), std::move(out));
}

CellSet negate(const CellSet& e) {
    std::vector<Cell> out;
    out.reserve(e.size());
    for (const Cell& c : e) out.push_back(negate_cell(c));
    return CellSet::from_cells(e.dim(), std::move(out));
}

BoundarySets boundary_sets(const CellSet& k, const CellSet& m) {
    if (k.dim() != m.dim()) {
        throw DimensionMismatch("boundary_sets: dimension mismatch");
    }
    std::vector<Cell> interior;
    for (const Cell& g : k) {
        bool inside = true;
        for (const Cell& off : m) {
            if (!k.contains(add_cells(g, off))) {
                inside = false;
                break;
            }
        }
        if (inside) interior.push_back(g);
    }
    BoundarySets b;
    b.interior = CellSet::from_cells(k.dim(), std::move(interior));
    b.exterior = set_difference(minkowski(k, m), k);
    b.boundary = set_union(b.exterior, set_difference(k, b.interior));
    return b;
}

Box::Box(Cell lo, Cell hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    if (lo_.size() != hi_.size() || lo_.empty()) {
        throw DimensionMismatch("box bounds must share a positive dimension");
    }
    for (std::size_t j = 0; j < lo_.size(); ++j) {
        if (lo_[j] > hi_[j]) {
            throw Error("box has empty side: lo " + format_cell(lo_) + " hi " +
                        format_cell(hi_));
        }
    }
}

Box Box::cube(int dim, Coord lo, Coord hi) {
    return Box(Cell(static_cast<std::size_t>(dim), lo),
               Cell(static_cast<std::size_t>(dim), hi));
}

std::uint64_t Box::cell_count() const {
    std::uint64_t n = 1;
    for (int j = 0; j < dim(); ++j) {
        std::uint64_t s = static_cast<std::uint64_t>(side(j));
        if (n > UINT64_MAX / s) throw OverflowError("box too large");
        n *= s;
    }
    return n;
}

bool Box::contains(const Cell& c) const {
    if (c.size() != lo_.size()) {
        throw DimensionMismatch("box contains: dimension mismatch");
    }
    for (std::size_t j = 0; j < c.size(); ++j) {
        if (c[j] < lo_[j] || c[j] > hi_[j]) return false;
    }
    return true;
}

CellSet Box::cell_set() const {
    std::vector<Cell> out;
    out.reserve(static_cast<std::size_t>(cell_count()));
    Cell cur = lo_;
    for (;;) {
        out.push_back(cur);
        int j = dim() - 1;
        while (j >= 0) {
            if (cur[j] < hi_[j]) {
                ++cur[j];
                break;
            }
            cur[j] = lo_[j];
            --j;
        }
        if (j < 0) break;
    }
    // odometer with the last coordinate fastest emits lexicographic order
    CellSet s = CellSet::from_cells(dim(), std::move(out));
    return s;
}

Cell Box::reduce(const Cell& g) const {
    if (g.size() != lo_.size()) {
        throw DimensionMismatch("box reduce: dimension mismatch");
    }
    Cell r(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
        Coord s = side(static_cast<int>(j));
        Coord off = (g[j] - lo_[j]) % s;
        if (off < 0) off += s;
        r[j] = lo_[j] + off;
    }
    return r;
}

}  // namespace anuca
