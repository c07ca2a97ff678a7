#include <doctest.h>

#include "anuca/corpus.hpp"
#include "anuca/rng.hpp"
#include "anuca/rules.hpp"

using namespace anuca;

namespace {

CellSet box1d(Coord lo, Coord hi) { return Box::cube(1, lo, hi).cell_set(); }

}  // namespace

TEST_CASE("rule_at variants") {
    RuleConfig ex1 = builtin("ex1_s").config;
    // f below and at the cut, g above
    CHECK(ex1.rule_at({0}) == *ex1.rules[ex1.left]);
    CHECK(ex1.rule_at({-5}) == *ex1.rules[ex1.left]);
    CHECK(ex1.rule_at({1}) == *ex1.rules[ex1.right]);

    RuleConfig constant = builtin("shift").config;
    CHECK(constant.rule_at({123}) == *constant.rules[0]);
    CHECK(constant.rule_at({-77}) == *constant.rules[0]);

    RuleConfig patched = make_patched(constant, 0, {});
    patched.rules.push_back(std::make_shared<const LocalRule>(projection_rule(2, 3, 1)));
    patched.rule_names.push_back("h");
    patched.patch.emplace(Cell{0}, 1);
    patched.validate();
    CHECK(patched.rule_at({0}) == *patched.rules[1]);
    CHECK(patched.rule_at({7}) == *patched.rules[0]);
}

TEST_CASE("translate_config") {
    RuleConfig constant = builtin("shift").config;
    CHECK(translate_config(constant, {9}) == constant);

    RuleConfig ex1 = builtin("ex1_s").config;
    RuleConfig s_k = translate_config(ex1, {3});
    CHECK(s_k.cut == 3);
    for (Coord n = -6; n <= 6; ++n) {
        CHECK(s_k.rule_at({n}) == ex1.rule_at({n - 3}));
    }

    RuleConfig patched = make_patched(constant, 0, {});
    patched.rules.push_back(std::make_shared<const LocalRule>(projection_rule(2, 3, 1)));
    patched.rule_names.push_back("h");
    patched.patch.emplace(Cell{0}, 1);
    RuleConfig moved = translate_config(patched, {3});
    CHECK(moved.patch.count(Cell{3}) == 1);
    CHECK(moved.patch.count(Cell{0}) == 0);
}

TEST_CASE("translate_config randomized law") {
    Rng rng(21);
    RuleConfig ex3 = builtin("ex3_s").config;
    for (int i = 0; i < 200; ++i) {
        Cell g{rng.range(-8, 8)};
        Cell h{rng.range(-12, 12)};
        RuleConfig moved = translate_config(ex3, g);
        CHECK(moved.rule_at(h) == ex3.rule_at(sub_cells(h, g)));
    }
}

TEST_CASE("orbit closure") {
    RuleConfig constant = builtin("shift").config;
    OrbitClosure oc = orbit_closure(constant);
    REQUIRE(oc.limit_points.size() == 1);
    CHECK(oc.limit_points[0] == constant);

    RuleConfig ex1 = builtin("ex1_s").config;
    OrbitClosure oc1 = orbit_closure(ex1);
    REQUIRE(oc1.limit_points.size() == 2);
    CHECK(oc1.limit_points[0] == builtin("ex1_p").config);
    CHECK(oc1.limit_points[1] == builtin("ex1_q").config);

    RuleConfig patched = make_patched(constant, 0, {});
    patched.rules.push_back(std::make_shared<const LocalRule>(projection_rule(2, 3, 1)));
    patched.rule_names.push_back("id");
    patched.patch.emplace(Cell{0}, 1);
    OrbitClosure ocp = orbit_closure(patched);
    REQUIRE(ocp.limit_points.size() == 1);
    CHECK(ocp.limit_points[0] == constant);
}

TEST_CASE("orbit closure limits are Hamming limits") {
    // translating a patched config far enough makes it agree with the
    // constant background on any fixed central box
    RuleConfig constant = builtin("shift").config;
    RuleConfig patched = make_patched(constant, 0, {});
    patched.rules.push_back(std::make_shared<const LocalRule>(projection_rule(2, 3, 1)));
    patched.rule_names.push_back("id");
    patched.patch.emplace(Cell{0}, 1);
    patched.patch.emplace(Cell{2}, 1);

    RuleConfig limit = orbit_closure(patched).limit_points[0];
    Coord patch_radius = 2;
    for (Coord n = 1; n <= 6; ++n) {
        Coord far = n + patch_radius + 1;
        RuleConfig moved = translate_config(patched, {far});
        for (Coord c = -n; c <= n; ++c) {
            CHECK(moved.rule_at({c}) == limit.rule_at({c}));
        }
    }
}

TEST_CASE("local_view equality") {
    RuleConfig constant = builtin("shift").config;
    CellSet e = box1d(-1, 1);
    CHECK(local_view(constant, e) == local_view(constant, e));

    RuleConfig ex1 = builtin("ex1_s").config;
    LocalView at0 = local_view(ex1, e);
    LocalView far = local_view(translate_config(ex1, {-10}), e);
    CHECK(!(at0 == far));
}

TEST_CASE("view classes: counts") {
    RuleConfig constant = builtin("shift").config;
    CHECK(ViewClasses(constant, box1d(-2, 2)).size() == 1);

    // on-patch vs off-patch
    RuleConfig patched = make_patched(constant, 0, {});
    patched.rules.push_back(std::make_shared<const LocalRule>(projection_rule(2, 3, 1)));
    patched.rule_names.push_back("h");
    patched.patch.emplace(Cell{0}, 1);
    CHECK(ViewClasses(patched, box1d(0, 0)).size() == 2);

    // f-side and g-side of the step
    RuleConfig ex1 = builtin("ex1_s").config;
    CHECK(ViewClasses(ex1, box1d(0, 0)).size() == 2);

    // windows of width 3 across the step: at most |E|+1 step positions
    ViewClasses wide(ex1, box1d(-1, 1));
    CHECK(wide.size() == 4);
}

TEST_CASE("view classes: completeness") {
    Rng rng(22);
    RuleConfig ex3 = builtin("ex3_s").config;
    CellSet e = box1d(-1, 1);
    ViewClasses vc(ex3, e);
    for (int i = 0; i < 1000; ++i) {
        Cell g{rng.range(-40, 40)};
        std::size_t ci = vc.class_of(ex3, g);
        LocalView direct = local_view(translate_config(ex3, negate_cell(g)), e);
        CHECK(vc.classes()[ci].view == direct);
    }
}

TEST_CASE("view classes cover box lists") {
    CellSet m3 = box1d(-1, 1);
    RuleConfig bsc = bounded_singularity_config(
        1, {4, 10, 18}, {2, 6, 12}, m3, 2, projection_rule(2, 3, 2),
        projection_rule(2, 3, 1), 3);
    ViewClasses vc(bsc, box1d(-1, 1));
    Rng rng(23);
    for (int i = 0; i < 500; ++i) {
        Cell g{rng.range(-40, 40)};
        std::size_t ci = vc.class_of(bsc, g);
        LocalView direct = local_view(translate_config(bsc, negate_cell(g)),
                                      box1d(-1, 1));
        CHECK(vc.classes()[ci].view == direct);
    }
}

TEST_CASE("config validation rejects malformed tables") {
    RuleConfig bad = builtin("shift").config;
    LocalRule wrong;
    wrong.table = {0, 1, 1};  // wrong length for 3-cell memory
    bad.rules[0] = std::make_shared<const LocalRule>(wrong);
    CHECK_THROWS_AS(bad.validate(), Error);

    RuleConfig oob = builtin("shift").config;
    LocalRule big;
    big.table.assign(8, 3);  // symbol out of range for alphabet 2
    oob.rules[0] = std::make_shared<const LocalRule>(big);
    CHECK_THROWS_AS(oob.validate(), Error);
}

TEST_CASE("effectively constant") {
    CHECK(builtin("shift").config.effectively_constant().has_value());
    CHECK(!builtin("ex1_s").config.effectively_constant().has_value());

    // patch entries equal to the background do not break constancy
    RuleConfig constant = builtin("shift").config;
    RuleConfig patched = make_patched(constant, 0, {{Cell{0}, 0}});
    CHECK(patched.effectively_constant().has_value());
}
