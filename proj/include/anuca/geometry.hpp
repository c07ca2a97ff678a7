#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace anuca {

// Integer lattice geometry: cells of Z^d, finite cell sets in canonical
// (lexicographic) order, boxes with inclusive bounds, and modular reduction
// of cells into boxes. Everything here is a pure value.

using Coord = std::int64_t;
using Cell = std::vector<Coord>;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct OverflowError : Error {
    using Error::Error;
};

Cell zero_cell(int dim);
Cell add_cells(const Cell& a, const Cell& b);  // checked addition
Cell sub_cells(const Cell& a, const Cell& b);
Cell negate_cell(const Cell& a);
bool lex_less(const Cell& a, const Cell& b);
Coord inf_norm(const Cell& a);
std::string format_cell(const Cell& a);

// Finite subset of Z^d. Cells are kept sorted strictly ascending in
// lexicographic order; that order is canonical and pattern encodings
// depend on it.
class CellSet {
public:
    CellSet() = default;
    explicit CellSet(int dim) : dim_(dim) {}
    static CellSet from_cells(int dim, std::vector<Cell> cells);

    int dim() const { return dim_; }
    std::size_t size() const { return cells_.size(); }
    bool empty() const { return cells_.empty(); }
    const Cell& operator[](std::size_t i) const { return cells_[i]; }
    const std::vector<Cell>& cells() const { return cells_; }
    auto begin() const { return cells_.begin(); }
    auto end() const { return cells_.end(); }

    bool contains(const Cell& c) const;
    std::optional<std::size_t> index_of(const Cell& c) const;
    bool is_subset_of(const CellSet& other) const;

    bool operator==(const CellSet& other) const = default;

private:
    int dim_ = 0;
    std::vector<Cell> cells_;
};

CellSet translate(const CellSet& e, const Cell& g);
CellSet minkowski(const CellSet& e, const CellSet& m);
CellSet set_union(const CellSet& a, const CellSet& b);
CellSet set_difference(const CellSet& a, const CellSet& b);
CellSet negate(const CellSet& e);

struct BoundarySets {
    CellSet interior;  // cells of K whose whole M-neighborhood stays in K
    CellSet exterior;  // KM \ K
    CellSet boundary;  // exterior together with K \ interior
};

BoundarySets boundary_sets(const CellSet& k, const CellSet& m);

// Axis-aligned box with inclusive bounds.
class Box {
public:
    Box(Cell lo, Cell hi);
    static Box cube(int dim, Coord lo, Coord hi);

    int dim() const { return static_cast<int>(lo_.size()); }
    const Cell& lo() const { return lo_; }
    const Cell& hi() const { return hi_; }
    Coord side(int j) const { return hi_[j] - lo_[j] + 1; }
    std::uint64_t cell_count() const;
    bool contains(const Cell& c) const;
    CellSet cell_set() const;

    // The unique k in the box congruent to g coordinatewise modulo the
    // side lengths.
    Cell reduce(const Cell& g) const;

    bool operator==(const Box& other) const = default;

private:
    Cell lo_, hi_;
};

inline Cell box_reduce(const Cell& g, const Box& k) { return k.reduce(g); }

}  // namespace anuca
