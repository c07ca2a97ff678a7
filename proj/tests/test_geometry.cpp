#include <doctest.h>

#include "anuca/geometry.hpp"
#include "anuca/rng.hpp"

using namespace anuca;

namespace {

CellSet set1d(std::initializer_list<Coord> offs) {
    std::vector<Cell> cells;
    for (Coord o : offs) cells.push_back({o});
    return CellSet::from_cells(1, std::move(cells));
}

CellSet set2d(std::initializer_list<std::pair<Coord, Coord>> offs) {
    std::vector<Cell> cells;
    for (auto [a, b] : offs) cells.push_back({a, b});
    return CellSet::from_cells(2, std::move(cells));
}

CellSet random_set(Rng& rng, int dim, int max_size, Coord span) {
    std::vector<Cell> cells;
    std::uint64_t n = 1 + rng.below(max_size);
    for (std::uint64_t i = 0; i < n; ++i) {
        Cell c(dim);
        for (int j = 0; j < dim; ++j) c[j] = rng.range(-span, span);
        cells.push_back(std::move(c));
    }
    return CellSet::from_cells(dim, std::move(cells));
}

}  // namespace

TEST_CASE("translate basics") {
    CHECK(translate(set1d({0}), {0}) == set1d({0}));
    CHECK(translate(set1d({-1, 0, 1}), {3}) == set1d({2, 3, 4}));
    CHECK(translate(set2d({{0, 0}, {1, 0}}), {0, 1}) == set2d({{0, 1}, {1, 1}}));
    CHECK_THROWS_AS(translate(set1d({0}), Cell{0, 0}), DimensionMismatch);
}

TEST_CASE("minkowski basics") {
    CHECK(minkowski(set1d({0}), set1d({-1, 0, 1})) == set1d({-1, 0, 1}));
    CHECK(minkowski(set1d({-1, 0, 1}), set1d({-1, 0, 1})) == set1d({-2, -1, 0, 1, 2}));
    CHECK(minkowski(set1d({0, 5}), set1d({0, 1})) == set1d({0, 1, 5, 6}));
}

TEST_CASE("boundary sets") {
    auto b = boundary_sets(set1d({0, 1, 2, 3, 4}), set1d({-1, 0, 1}));
    CHECK(b.interior == set1d({1, 2, 3}));
    CHECK(b.exterior == set1d({-1, 5}));
    CHECK(b.boundary == set1d({-1, 0, 4, 5}));

    auto trivial = boundary_sets(set1d({3, 7}), set1d({0}));
    CHECK(trivial.interior == set1d({3, 7}));
    CHECK(trivial.exterior.empty());
    CHECK(trivial.boundary.empty());

    auto single = boundary_sets(set1d({0}), set1d({-1, 0, 1}));
    CHECK(single.interior.empty());
    CHECK(single.exterior == set1d({-1, 1}));
    CHECK(single.boundary == set1d({-1, 0, 1}));
}

TEST_CASE("box reduce") {
    Box k1 = Box::cube(1, 0, 4);
    CHECK(box_reduce({7}, k1) == Cell{2});
    for (Coord g = 0; g <= 4; ++g) CHECK(box_reduce({g}, k1) == Cell{g});

    Box k2(Cell{0, 0}, Cell{2, 2});
    CHECK(box_reduce({-1, 6}, k2) == Cell{2, 0});
}

TEST_CASE("box cell order is lexicographic") {
    Box b(Cell{0, 0}, Cell{1, 1});
    CellSet cells = b.cell_set();
    REQUIRE(cells.size() == 4);
    CHECK(cells[0] == Cell{0, 0});
    CHECK(cells[1] == Cell{0, 1});
    CHECK(cells[2] == Cell{1, 0});
    CHECK(cells[3] == Cell{1, 1});
}

TEST_CASE("translate composes") {
    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        int dim = 1 + static_cast<int>(rng.below(2));
        CellSet e = random_set(rng, dim, 6, 5);
        Cell g(dim), h(dim);
        for (int j = 0; j < dim; ++j) {
            g[j] = rng.range(-4, 4);
            h[j] = rng.range(-4, 4);
        }
        CHECK(translate(translate(e, g), h) == translate(e, add_cells(g, h)));
    }
}

TEST_CASE("minkowski is monotone") {
    Rng rng(12);
    for (int i = 0; i < 200; ++i) {
        int dim = 1 + static_cast<int>(rng.below(2));
        CellSet e2 = random_set(rng, dim, 6, 4);
        CellSet m = random_set(rng, dim, 4, 2);
        // subset of e2
        std::vector<Cell> sub;
        for (const Cell& c : e2) {
            if (rng.below(2)) sub.push_back(c);
        }
        if (sub.empty()) sub.push_back(e2[0]);
        CellSet e1 = CellSet::from_cells(dim, sub);
        CHECK(minkowski(e1, m).is_subset_of(minkowski(e2, m)));
    }
}

TEST_CASE("box reduce is idempotent and periodic") {
    Rng rng(13);
    for (int i = 0; i < 200; ++i) {
        int dim = 1 + static_cast<int>(rng.below(2));
        Cell lo(dim), hi(dim), g(dim), v(dim);
        for (int j = 0; j < dim; ++j) {
            lo[j] = rng.range(-3, 3);
            hi[j] = lo[j] + rng.range(0, 4);
            g[j] = rng.range(-20, 20);
            v[j] = rng.range(-3, 3);
        }
        Box k(lo, hi);
        Cell r = box_reduce(g, k);
        CHECK(k.contains(r));
        CHECK(box_reduce(r, k) == r);
        Cell shifted = g;
        for (int j = 0; j < dim; ++j) shifted[j] += v[j] * k.side(j);
        CHECK(box_reduce(shifted, k) == r);
    }
}

TEST_CASE("boundary partition") {
    Rng rng(14);
    for (int i = 0; i < 200; ++i) {
        int dim = 1 + static_cast<int>(rng.below(2));
        CellSet k = random_set(rng, dim, 8, 4);
        CellSet m = random_set(rng, dim, 4, 2);
        auto b = boundary_sets(k, m);
        CHECK(b.interior.is_subset_of(k));
        for (const Cell& c : b.exterior) CHECK(!k.contains(c));
        CHECK(set_union(b.interior, set_difference(k, b.interior)) == k);
        // K = interior united with K's part of the boundary
        CHECK(set_union(b.interior, set_difference(k, b.interior)) ==
              set_union(b.interior,
                        CellSet::from_cells(dim, [&] {
                            std::vector<Cell> in_k;
                            for (const Cell& c : b.boundary) {
                                if (k.contains(c)) in_k.push_back(c);
                            }
                            return in_k;
                        }())));
    }
}

TEST_CASE("minkowski commutes with translation") {
    Rng rng(15);
    for (int i = 0; i < 200; ++i) {
        int dim = 1 + static_cast<int>(rng.below(2));
        CellSet e = random_set(rng, dim, 6, 4);
        CellSet m = random_set(rng, dim, 4, 2);
        Cell g(dim);
        for (int j = 0; j < dim; ++j) g[j] = rng.range(-5, 5);
        CHECK(minkowski(translate(e, g), m) == translate(minkowski(e, m), g));
    }
}

TEST_CASE("overflow is checked") {
    CHECK_THROWS_AS(add_cells({INT64_MAX}, {1}), OverflowError);
}
