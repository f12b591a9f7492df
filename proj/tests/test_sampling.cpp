// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <omp.h>

#include "support/scenes.hpp"
#include "wxvis/bvh.hpp"
#include "wxvis/reference.hpp"
#include "wxvis/sampling.hpp"

using namespace wxvis;

namespace {

GridSpec spec_for(const Rect2& bounds, double spacing = 1.0) {
    GridSpec spec;
    spec.bounds = bounds;
    spec.spacing = spacing;
    return spec;
}

} // namespace

TEST_CASE("flat plane fills the full lattice") {
    const auto mesh = load_obj(test::scene_path("plane50.obj"));
    const Bvh bvh(mesh);
    const auto nodes = generate_grid(spec_for({0, 0, 50, 50}), bvh);
    REQUIRE(nodes.size() == 50 * 50);

    // Dense ids in row-major (y-outer) order, cell-centered positions.
    CHECK(nodes.front().id == 0);
    CHECK(nodes.front().position == Vec3{0.5, 0.5, 1.7});
    CHECK(nodes.back().id == 2499);
    CHECK(nodes.back().position == Vec3{49.5, 49.5, 1.7});
    const auto& n73 = nodes[1 * 50 + 23];
    CHECK(n73.id == 73);
    CHECK(n73.position == Vec3{23.5, 1.5, 1.7});
    for (std::size_t i = 0; i < nodes.size(); ++i) REQUIRE(nodes[i].id == i);
}

TEST_CASE("grid spec validation") {
    const auto mesh = load_obj(test::scene_path("plane50.obj"));
    const Bvh bvh(mesh);
    CHECK_THROWS_AS(generate_grid(spec_for({0, 0, 50, 50}, 0.0), bvh), std::invalid_argument);
    CHECK_THROWS_AS(generate_grid(spec_for({0, 0, 50, 50}, -1.0), bvh), std::invalid_argument);
    CHECK_THROWS_AS(generate_grid(spec_for({10, 10, 10, 20}), bvh), std::invalid_argument);
    CHECK_THROWS_AS(generate_grid(spec_for({10, 10, 20, 10}), bvh), std::invalid_argument);
    GridSpec bad = spec_for({0, 0, 50, 50});
    bad.eye_height = -0.1;
    CHECK_THROWS_AS(generate_grid(bad, bvh), std::invalid_argument);
    // Bounds narrower than one spacing hold no cell centers.
    CHECK(generate_grid(spec_for({0, 0, 0.5, 0.5}), bvh).empty());
}

TEST_CASE("spacing and bounds control the lattice") {
    const auto mesh = load_obj(test::scene_path("plane50.obj"));
    const Bvh bvh(mesh);

    SUBCASE("coarse spacing") {
        const auto nodes = generate_grid(spec_for({0, 0, 50, 50}, 2.5), bvh);
        REQUIRE(nodes.size() == 20 * 20);
        CHECK(nodes.front().position == Vec3{1.25, 1.25, 1.7});
        CHECK(nodes.back().position == Vec3{48.75, 48.75, 1.7});
    }
    SUBCASE("extent that is not a spacing multiple truncates") {
        const auto nodes = generate_grid(spec_for({0, 0, 50, 50}, 3.0), bvh);
        // floor(50/3) = 16 per axis; the last center sits at 46.5 < 50.
        REQUIRE(nodes.size() == 16 * 16);
        CHECK(nodes.back().position == Vec3{46.5, 46.5, 1.7});
    }
    SUBCASE("bounds beyond the mesh leave only supported columns") {
        const auto nodes = generate_grid(spec_for({-10, -10, 60, 60}), bvh);
        CHECK(nodes.size() == 50 * 50);
        CHECK(nodes.front().position == Vec3{0.5, 0.5, 1.7});
    }
    SUBCASE("sub-rectangle of the scene") {
        const auto nodes = generate_grid(spec_for({10, 10, 20, 14}), bvh);
        REQUIRE(nodes.size() == 10 * 4);
        CHECK(nodes.front().position == Vec3{10.5, 10.5, 1.7});
    }
}

TEST_CASE("eye height raises nodes above their support") {
    const auto mesh = load_obj(test::scene_path("plane50.obj"));
    const Bvh bvh(mesh);
    GridSpec spec = spec_for({0, 0, 50, 50}, 10.0);
    spec.eye_height = 0.0;
    auto nodes = generate_grid(spec, bvh);
    REQUIRE(!nodes.empty());
    CHECK(nodes.front().position.z == 0.0);
    spec.eye_height = 1.2;
    nodes = generate_grid(spec, bvh);
    CHECK(nodes.front().position.z == 1.2);
}

TEST_CASE("obstacle tops are excluded by the walkable cutoff") {
    const auto mesh = load_obj(test::scene_path("box50.obj"));
    const Bvh bvh(mesh);

    const auto nodes = generate_grid(spec_for({0, 0, 50, 50}), bvh);
    // The box footprint (20,20)-(30,30) hides a 10x10 block of columns:
    // their first hit is the box top, 10 m above the ground hit.
    CHECK(nodes.size() == 2500 - 100);
    for (const auto& node : nodes) {
        const bool inside_footprint = node.position.x > 20.0 && node.position.x < 30.0 &&
                                      node.position.y > 20.0 && node.position.y < 30.0;
        CHECK(!inside_footprint);
        CHECK(node.position.z == 1.7); // every survivor stands on the ground
    }

    GridSpec roof_ok = spec_for({0, 0, 50, 50});
    roof_ok.walkable_cutoff = 20.0; // taller than the box: tops count as floors
    const auto with_roof = generate_grid(roof_ok, bvh);
    CHECK(with_roof.size() == 2500);
    std::size_t elevated = 0;
    for (const auto& node : with_roof) elevated += node.position.z == doctest::Approx(11.7);
    CHECK(elevated == 100);
}

TEST_CASE("drop height overrides where columns start") {
    const auto mesh = load_obj(test::scene_path("box50.obj"));
    const Bvh bvh(mesh);
    GridSpec spec = spec_for({0, 0, 50, 50});
    // Columns start below the box top: inside the footprint they only see
    // the ground, so every column reads as walkable.
    spec.drop_height = 5.0;
    CHECK(generate_grid(spec, bvh).size() == 2500);
}

TEST_CASE("sampling matches the serial reference on every scene") {
    for (const char* name : {"plane50.obj", "box50.obj", "bars50.obj", "crossroads100.obj"}) {
        const auto mesh = load_obj(test::scene_path(name));
        const Bvh bvh(mesh);
        const auto b = bvh.bounds();
        const auto spec = spec_for({b.min.x, b.min.y, b.max.x, b.max.y});
        const auto parallel = generate_grid(spec, bvh);

        const int saved = omp_get_max_threads();
        omp_set_num_threads(1);
        const auto single = generate_grid(spec, bvh);
        omp_set_num_threads(saved);

        const auto serial = ref::generate_grid_serial(spec, bvh);
        REQUIRE(parallel.size() == serial.size());
        REQUIRE(parallel.size() == single.size());
        for (std::size_t i = 0; i < parallel.size(); ++i) {
            CHECK(parallel[i].id == serial[i].id);
            CHECK(parallel[i].position == serial[i].position);
            CHECK(parallel[i].position == single[i].position);
        }
    }
}
