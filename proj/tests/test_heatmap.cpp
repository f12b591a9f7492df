// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "support/scenes.hpp"
#include "wxvis/bvh.hpp"
#include "wxvis/errors.hpp"
#include "wxvis/heatmap.hpp"
#include "wxvis/visgraph.hpp"

using namespace wxvis;

namespace {

struct TempDir {
    std::filesystem::path path;

    TempDir() {
        static int counter = 0;
        path = std::filesystem::temp_directory_path() /
               ("wxvis_heatmap_" + std::to_string(++counter));
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

std::string slurp(const std::filesystem::path& path) {
    std::ifstream stream(path, std::ios::binary);
    REQUIRE(stream);
    return {std::istreambuf_iterator<char>(stream), std::istreambuf_iterator<char>()};
}

using Pixel = std::array<std::uint8_t, 3>;

struct Image {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<Pixel> pixels; // row 0 = top of the image = maximum y

    const Pixel& at(std::size_t col, std::size_t row_from_top) const {
        return pixels[row_from_top * width + col];
    }
};

Image parse_ppm(const std::string& bytes) {
    std::istringstream header(bytes.substr(0, 64));
    std::string magic;
    std::size_t width = 0;
    std::size_t height = 0;
    int maxval = 0;
    header >> magic >> width >> height >> maxval;
    REQUIRE(magic == "P6");
    REQUIRE(maxval == 255);
    // Pixel data begins one whitespace byte after the maxval.
    const std::size_t start = bytes.find("255") + 4;
    REQUIRE(bytes.size() == start + width * height * 3);

    Image image{width, height, {}};
    for (std::size_t i = 0; i < width * height; ++i) {
        const auto* p = reinterpret_cast<const std::uint8_t*>(bytes.data() + start + 3 * i);
        image.pixels.push_back({p[0], p[1], p[2]});
    }
    return image;
}

/// Rec. 709 luma; the ramp is built to make this strictly increasing in t.
double luminance(const Pixel& p) { return 0.2126 * p[0] + 0.7152 * p[1] + 0.0722 * p[2]; }

std::vector<Node> square_lattice(std::size_t side, double spacing = 1.0) {
    std::vector<Node> nodes;
    for (std::size_t y = 0; y < side; ++y)
        for (std::size_t x = 0; x < side; ++x)
            nodes.push_back({static_cast<std::uint32_t>(nodes.size()),
                             {(x + 0.5) * spacing, (y + 0.5) * spacing, 1.7}});
    return nodes;
}

} // namespace

TEST_CASE("lattice reconstruction places nodes and leaves holes") {
    // Three corners of a 2x2 lattice; (1.5, 1.5) intentionally missing.
    const std::vector<Node> nodes = {
        {0, {0.5, 0.5, 1.7}}, {1, {1.5, 0.5, 1.7}}, {2, {0.5, 1.5, 1.9}}};
    const Lattice lattice = Lattice::from_nodes(nodes, 1.0);
    CHECK(lattice.nx == 2);
    CHECK(lattice.ny == 2);
    CHECK(lattice.origin_x == doctest::Approx(0.5));
    CHECK(lattice.origin_y == doctest::Approx(0.5));
    CHECK(lattice.node_count == 3);
    REQUIRE(lattice.cell_node.size() == 4);
    CHECK(lattice.cell_node[0] == 0);
    CHECK(lattice.cell_node[1] == 1);
    CHECK(lattice.cell_node[2] == 2);
    CHECK(lattice.cell_node[3] == -1);
}

TEST_CASE("lattice spacing can be inferred from the node coordinates") {
    const std::vector<Node> nodes = {
        {0, {1.25, 0.0, 0.0}}, {1, {3.75, 0.0, 0.0}}, {2, {1.25, 2.5, 0.0}}};
    const Lattice lattice = Lattice::from_nodes(nodes);
    CHECK(lattice.spacing == doctest::Approx(2.5));
    CHECK(lattice.nx == 2);
    CHECK(lattice.ny == 2);
}

TEST_CASE("lattice construction rejects broken node sets") {
    SUBCASE("off-lattice node") {
        const std::vector<Node> nodes = {{0, {0.5, 0.5, 0.0}}, {1, {1.93, 0.5, 0.0}}};
        CHECK_THROWS_AS(Lattice::from_nodes(nodes, 1.0), InputError);
    }
    SUBCASE("two nodes in one cell") {
        const std::vector<Node> nodes = {{0, {0.5, 0.5, 0.0}}, {1, {0.5, 0.5, 3.0}}};
        CHECK_THROWS_AS(Lattice::from_nodes(nodes, 1.0), InputError);
    }
    SUBCASE("sparse ids") {
        const std::vector<Node> nodes = {{0, {0.5, 0.5, 0.0}}, {7, {1.5, 0.5, 0.0}}};
        CHECK_THROWS_AS(Lattice::from_nodes(nodes, 1.0), InputError);
    }
    SUBCASE("no nodes") {
        CHECK_THROWS_AS(Lattice::from_nodes(std::vector<Node>{}, 1.0), InputError);
    }
}

TEST_CASE("color ramp hits its documented control points and clamps") {
    CHECK(heatmap_color(0.0) == Pixel{68, 1, 84});
    CHECK(heatmap_color(0.25) == Pixel{59, 82, 139});
    CHECK(heatmap_color(0.5) == Pixel{33, 145, 140});
    CHECK(heatmap_color(0.75) == Pixel{94, 201, 98});
    CHECK(heatmap_color(1.0) == Pixel{253, 231, 37});
    CHECK(heatmap_color(-7.0) == heatmap_color(0.0));
    CHECK(heatmap_color(42.0) == heatmap_color(1.0));
    CHECK(heatmap_color(0.3) != Pixel{0, 0, 0}); // black stays reserved for holes
}

TEST_CASE("color ramp luminance increases with score") {
    double previous = luminance(heatmap_color(0.0));
    for (int i = 1; i <= 20; ++i) {
        const double current = luminance(heatmap_color(i / 20.0));
        CHECK(current > previous); // strict even after 8-bit quantization
        previous = current;
    }
    // At fine steps, per-channel rounding to 8 bits can dip luminance by up
    // to one count per channel; anything beyond that is a real inversion.
    for (int i = 1; i <= 1000; ++i)
        CHECK(luminance(heatmap_color(i / 1000.0)) >
              luminance(heatmap_color((i - 1) / 1000.0)) - 1.0);
}

TEST_CASE("heatmap pixels are exact: orientation, ramp, and hole sentinel") {
    TempDir dir;
    const std::vector<Node> nodes = {
        {0, {0.5, 0.5, 1.7}}, {1, {1.5, 0.5, 1.7}}, {2, {0.5, 1.5, 1.7}}};
    const Lattice lattice = Lattice::from_nodes(nodes, 1.0);
    const std::vector<double> values = {0.0, 5.0, 10.0};
    const auto path = dir.path / "map.ppm";
    const HeatmapScale used = write_heatmap(path, lattice, values);
    CHECK(used.min == 0.0);
    CHECK(used.max == 10.0);

    const Image image = parse_ppm(slurp(path));
    REQUIRE(image.width == 2);
    REQUIRE(image.height == 2);
    // Top row is maximum y: node 2 (t = 1), then the hole.
    CHECK(image.at(0, 0) == heatmap_color(1.0));
    CHECK(image.at(1, 0) == Pixel{0, 0, 0});
    // Bottom row: node 0 (t = 0) and node 1 (t = 0.5).
    CHECK(image.at(0, 1) == heatmap_color(0.0));
    CHECK(image.at(1, 1) == heatmap_color(0.5));
}

TEST_CASE("sidecar records the scale and raster geometry") {
    TempDir dir;
    const std::vector<Node> nodes = {{0, {2.0, 3.0, 0.0}}, {1, {4.0, 3.0, 0.0}}};
    const Lattice lattice = Lattice::from_nodes(nodes, 2.0);
    const auto path = dir.path / "map.ppm";
    write_heatmap(path, lattice, std::vector<double>{1.0, 3.0});

    const auto doc = nlohmann::json::parse(slurp(dir.path / "map.ppm.json"));
    CHECK(doc.at("format") == "wxvis-heatmap-scale");
    CHECK(doc.at("version") == 1);
    CHECK(doc.at("min") == 1.0);
    CHECK(doc.at("max") == 3.0);
    CHECK(doc.at("mode") == "per-run");
    CHECK(doc.at("width") == 2);
    CHECK(doc.at("height") == 1);
    CHECK(doc.at("spacing") == 2.0);
    CHECK(doc.at("origin") == nlohmann::json({2.0, 3.0}));
}

TEST_CASE("a flat field renders mid-ramp, not an error") {
    TempDir dir;
    const std::vector<Node> nodes = square_lattice(3);
    const Lattice lattice = Lattice::from_nodes(nodes, 1.0);
    const auto path = dir.path / "flat.ppm";
    write_heatmap(path, lattice, std::vector<double>(9, 4.25));
    const Image image = parse_ppm(slurp(path));
    for (const Pixel& p : image.pixels) CHECK(p == heatmap_color(0.5));
}

TEST_CASE("per-run and shared scales rank pixels identically") {
    TempDir dir;
    const std::vector<Node> nodes = square_lattice(2);
    const Lattice lattice = Lattice::from_nodes(nodes, 1.0);
    const std::vector<double> values = {0.0, 5.0, 10.0, 7.5};

    const auto per_run = dir.path / "per_run.ppm";
    write_heatmap(per_run, lattice, values);
    const auto shared = dir.path / "shared.ppm";
    write_heatmap(shared, lattice, values, {ScaleMode::Shared, 0.0, 20.0});

    const Image a = parse_ppm(slurp(per_run));
    const Image b = parse_ppm(slurp(shared));
    REQUIRE(a.pixels.size() == b.pixels.size());
    for (std::size_t i = 0; i < a.pixels.size(); ++i)
        for (std::size_t j = 0; j < a.pixels.size(); ++j) {
            CHECK((luminance(a.pixels[i]) < luminance(a.pixels[j])) ==
                  (luminance(b.pixels[i]) < luminance(b.pixels[j])));
            CHECK((luminance(a.pixels[i]) > luminance(a.pixels[j])) ==
                  (luminance(b.pixels[i]) > luminance(b.pixels[j])));
        }
    // Same data, but the wider shared bounds compress every t: colors move.
    CHECK(a.at(0, 0) != b.at(0, 0));
}

TEST_CASE("snowfall renders strictly darker than clear air on a shared scale") {
    TempDir dir;
    const TriangleMesh mesh = test::make_ground(0, 0, 10, 10);
    const Bvh bvh(mesh);
    const std::vector<Node> nodes = square_lattice(10);
    const VisibilityGraph graph = build_visibility_graph(nodes, bvh);

    const ScoreField clear = compute_scores(graph, weight_edges(graph, {0.00015, {}}));
    const AttenuationCoefficient snow{0.0374, WeatherCondition::parse("snow-dry:4")};
    const ScoreField snowy = compute_scores(graph, weight_edges(graph, snow));

    HeatmapScale scale{ScaleMode::Shared, 0.0, 0.0};
    scale.min = std::numeric_limits<double>::infinity();
    scale.max = -std::numeric_limits<double>::infinity();
    for (const auto* field : {&clear, &snowy})
        for (const double v : field->score_sum) {
            scale.min = std::min(scale.min, v);
            scale.max = std::max(scale.max, v);
        }

    const Lattice lattice = Lattice::from_nodes(nodes, 1.0);
    const auto clear_path = dir.path / "clear.ppm";
    const auto snowy_path = dir.path / "snowy.ppm";
    write_heatmap(clear_path, lattice, clear.score_sum, scale);
    write_heatmap(snowy_path, lattice, snowy.score_sum, scale);

    const Image bright = parse_ppm(slurp(clear_path));
    const Image dark = parse_ppm(slurp(snowy_path));
    REQUIRE(bright.pixels.size() == 100);
    for (std::size_t i = 0; i < bright.pixels.size(); ++i)
        CHECK(luminance(dark.pixels[i]) < luminance(bright.pixels[i]));
}

TEST_CASE("heatmap export rejects inconsistent inputs") {
    TempDir dir;
    const std::vector<Node> nodes = square_lattice(2);
    const Lattice lattice = Lattice::from_nodes(nodes, 1.0);
    const auto path = dir.path / "bad.ppm";

    SUBCASE("wrong value count") {
        CHECK_THROWS_AS(write_heatmap(path, lattice, std::vector<double>(3, 1.0)), InputError);
    }
    SUBCASE("non-finite value") {
        std::vector<double> values(4, 1.0);
        values[2] = std::numeric_limits<double>::quiet_NaN();
        CHECK_THROWS_AS(write_heatmap(path, lattice, values), InputError);
    }
    SUBCASE("inverted shared bounds") {
        CHECK_THROWS_AS(
            write_heatmap(path, lattice, std::vector<double>(4, 1.0), {ScaleMode::Shared, 2.0, 1.0}),
            InputError);
    }
}
