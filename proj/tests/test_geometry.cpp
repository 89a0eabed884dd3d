#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "discplan/geometry.hpp"
#include "discplan/instance.hpp"

using namespace discplan;

TEST_CASE("discs_collide basics") {
    CHECK(discs_collide({0, 0}, {0, 0}, 1.0));         // identical centers
    CHECK_FALSE(discs_collide({0, 0}, {2, 0}, 1.0));   // exact tangency is free
    CHECK(discs_collide({0, 0}, {1.5, 0}, 1.0));
    CHECK_FALSE(discs_collide({0, 0}, {2.0000001, 0}, 1.0));
}

TEST_CASE("conflict_disc_contains matches the collision predicate") {
    CHECK(conflict_disc_contains({0, 0}, {1.9, 0}, 1.0));
    CHECK_FALSE(conflict_disc_contains({0, 0}, {2.0, 0}, 1.0));
    CHECK(conflict_disc_contains({5, 5}, {5, 6}, 1.0));

    SplitMix64 rng(7);
    for (int i = 0; i < 2000; ++i) {
        const Vec2 p{rng.next_in(0, 10), rng.next_in(0, 10)};
        const Vec2 q{rng.next_in(0, 10), rng.next_in(0, 10)};
        const double r = rng.next_in(0.1, 2.0);
        CHECK(conflict_disc_contains(p, q, r) == discs_collide(p, q, r));
        CHECK(discs_collide(p, q, r) == discs_collide(q, p, r));  // symmetry
    }
}

TEST_CASE("arrangement_feasible") {
    CHECK(arrangement_feasible(std::vector<Vec2>{{1, 1}}, 0.4));
    CHECK_FALSE(arrangement_feasible(std::vector<Vec2>{{1, 1}, {1, 1}}, 0.5));
    // spacing exactly 2r: tangent arrangements are feasible
    CHECK(arrangement_feasible(std::vector<Vec2>{{1, 1}, {3, 1}, {5, 1}}, 1.0));

    const Workspace ws{10, 10};
    CHECK_THROWS_AS((void)arrangement_feasible(std::vector<Vec2>{{0.2, 5}}, 1.0, ws),
                    PositionOutOfBounds);
}

TEST_CASE("interference_set") {
    const std::vector<std::pair<PoseLabel, Vec2>> poses{
        {PoseLabel::start(0), {0.5, 0}},
        {PoseLabel::start(1), {10, 10}},
    };
    auto hits = interference_set({0, 0}, poses, 1.0);
    REQUIRE(hits.size() == 1);
    CHECK(hits[0] == PoseLabel::start(0));

    CHECK(interference_set({-5, -5}, poses, 1.0).empty());

    const std::vector<std::pair<PoseLabel, Vec2>> overlapping{
        {PoseLabel::start(0), {4.5, 4}},
        {PoseLabel::goal(1), {5.5, 4}},
    };
    CHECK(interference_set({5, 4}, overlapping, 1.0).size() == 2);
}

TEST_CASE("interference_set monotonicity under pose addition") {
    SplitMix64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::pair<PoseLabel, Vec2>> poses;
        const int k = 1 + static_cast<int>(rng.next_below(6));
        for (int i = 0; i < k; ++i)
            poses.emplace_back(PoseLabel::start(i), Vec2{rng.next_in(0, 8), rng.next_in(0, 8)});
        const Vec2 q{rng.next_in(0, 8), rng.next_in(0, 8)};
        auto before = interference_set(q, poses, 0.7);
        poses.emplace_back(PoseLabel::goal(k), Vec2{rng.next_in(0, 8), rng.next_in(0, 8)});
        auto after = interference_set(q, poses, 0.7);
        for (const PoseLabel& l : before)
            CHECK(std::find(after.begin(), after.end(), l) != after.end());
    }
}
