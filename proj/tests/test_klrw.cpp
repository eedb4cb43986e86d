#include <doctest.h>

#include <platkh/engine.hpp>
#include <platkh/object.hpp>

using namespace platkh;

namespace {

SliceEvent bb(int slot) { return {EventKind::BB, slot, 0}; }
SliceEvent rb(int red, int dir) { return {EventKind::RB, red, dir}; }
SliceEvent phi(int dir) { return {EventKind::PHI, 0, dir}; }
SliceEvent dot(int slot) { return {EventKind::DOT, slot, 0}; }

}  // namespace

TEST_CASE("identity word normalizes to the identity diagram") {
    ObjectTheta obj(RedConfig{1}, {0, 1, 0});
    LinComb r = normalize({obj, {}});
    CHECK(r.size() == 1);
    CHECK(r.identity_coefficient().is_one());
}

TEST_CASE("double black crossing vanishes") {
    ObjectTheta obj(RedConfig{1}, {0, 2, 0});
    LinComb r = normalize({obj, {bb(0), bb(0)}});
    CHECK(r.is_zero());
}

TEST_CASE("red bigon equals u times a dot, both orientations") {
    ObjectTheta obj(RedConfig{1}, {0, 1, 0});
    // poke left across red 1 and back
    LinComb left = normalize({obj, {rb(1, -1), rb(1, +1)}});
    NormalDiagram dotted = NormalDiagram::identity(obj);
    dotted.dots[0] = 1;
    LinComb expect = LinComb::single(dotted, Poly2::u());
    CHECK(left == expect);
    // poke right across red 2 and back
    LinComb right = normalize({obj, {rb(2, +1), rb(2, -1)}});
    CHECK(right == expect);
}

TEST_CASE("phi wiggle is free") {
    ObjectTheta obj(RedConfig{1}, {1, 0, 0});
    LinComb r = normalize({obj, {phi(-1), phi(+1)}});
    CHECK(r.size() == 1);
    CHECK(r.identity_coefficient().is_one());
}

TEST_CASE("dot-pass-crossing relations") {
    ObjectTheta obj(RedConfig{1}, {0, 2, 0});
    // strand starting at slot 1 goes up-left through the crossing; the dot
    // above it minus the dot below it is hbar times the identity
    LinComb above = normalize({obj, {bb(0), dot(0)}});
    LinComb below = normalize({obj, {dot(1), bb(0)}});
    LinComb diff = above - below;
    CHECK(diff.size() == 1);
    CHECK(diff.identity_coefficient() == Poly2::hbar());

    // mirror version on the up-right strand
    LinComb above2 = normalize({obj, {bb(0), dot(1)}});
    LinComb below2 = normalize({obj, {dot(0), bb(0)}});
    LinComb diff2 = below2 - above2;
    CHECK(diff2.size() == 1);
    CHECK(diff2.identity_coefficient() == Poly2::hbar());
}

TEST_CASE("crossing sweep past a red differs by u hbar") {
    // two blacks straddling red 1, swapping; the bb-crossing can be routed
    // right of the red or left of it
    ObjectTheta obj(RedConfig{1}, {1, 1, 0});
    // right routing: left black crosses red 1 first, swap happens in segment 1
    LinComb right = normalize({obj, {rb(1, +1), bb(0), rb(1, -1)}});
    // left routing: right black crosses red 1 first, swap happens in segment 0
    LinComb left = normalize({obj, {rb(1, -1), bb(0), rb(1, +1)}});
    LinComb diff = right - left;
    CHECK(diff.size() == 1);
    CHECK(diff.identity_coefficient() == Poly2::u() * Poly2::hbar());
}

TEST_CASE("normalize is idempotent on basis words") {
    ObjectTheta obj(RedConfig{1}, {1, 1, 0});
    LinComb one = normalize({obj, {rb(1, +1), bb(0)}});
    for (const auto& [d, c] : one.terms()) {
        LinComb again = normalize_word(d.bottom, realization_word(d));
        CHECK(again.size() == 1);
        CHECK(again.terms().begin()->first == d);
        CHECK(again.terms().begin()->second.is_one());
    }
}

TEST_CASE("grades of elementary diagrams") {
    ObjectTheta obj(RedConfig{1}, {0, 1, 0});
    LinComb crossed = normalize({obj, {rb(2, +1)}});
    REQUIRE(crossed.size() == 1);
    CHECK(grade_of(crossed.terms().begin()->first) == GradeVector{1, 1, 0, 0});

    NormalDiagram dotted = NormalDiagram::identity(obj);
    dotted.dots[0] = 1;
    CHECK(grade_of(dotted) == GradeVector{2, 2, -1, 0});

    CHECK(grade_of(NormalDiagram::identity(obj)) == GradeVector{0, 0, 0, 0});

    // one full positive wind in the 1-cup category: crosses both reds and phi
    LinComb wind = normalize({obj, {rb(1, -1), phi(-1), rb(2, -1)}});
    REQUIRE(wind.size() == 1);
    CHECK(grade_of(wind.terms().begin()->first) == GradeVector{2, 2, 0, 1});
}

TEST_CASE("basis enumeration in low degrees") {
    ObjectTheta pi1 = cup_object(1);
    auto id_deg = basis_in_degree(pi1, pi1, {0, 0, 0, 0});
    REQUIRE(id_deg.size() == 1);
    CHECK(id_deg[0].first.is_identity());
    CHECK(id_deg[0].second == Mono2{0, 0});

    auto dot_deg = basis_in_degree(pi1, pi1, {2, 2, -1, 0});
    REQUIRE(dot_deg.size() == 1);
    CHECK(dot_deg[0].first.dots[0] == 1);

    auto neg = basis_in_degree(pi1, pi1, {0, -2, 0, 0});
    CHECK(neg.empty());
}

TEST_CASE("compose stacks diagrams") {
    ObjectTheta obj(RedConfig{1}, {0, 1, 0});
    LinComb id = LinComb::identity(obj);
    LinComb out = normalize({obj, {rb(1, -1)}});
    CHECK(compose(out, id) == out);
    CHECK(compose(LinComb::identity(out.top()), out) == out);
    // rb-cross left then back right composes to the red bigon
    LinComb back = normalize({ObjectTheta(RedConfig{1}, {1, 0, 0}), {rb(1, +1)}});
    LinComb bigon = compose(back, out);
    NormalDiagram dotted = NormalDiagram::identity(obj);
    dotted.dots[0] = 1;
    CHECK(bigon == LinComb::single(dotted, Poly2::u()));
}
