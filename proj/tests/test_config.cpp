// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "wxvis/config.hpp"
#include "wxvis/errors.hpp"

using namespace wxvis;

TEST_CASE("an empty config object yields the reference defaults") {
    const RunConfig config = parse_run_config("{}");
    CHECK(config.mesh.empty());
    CHECK(!config.bounds.has_value());
    CHECK(config.spacing == 1.0);
    CHECK(config.eye_height == 1.7);
    CHECK(config.walkable_cutoff == 0.5);
    CHECK(!config.drop_height.has_value());
    CHECK(config.conditions.empty());
    CHECK(config.metric == Metric::Sum);
    CHECK(config.targets.empty());
    CHECK(config.out_dir.empty());
    CHECK(!config.shared_scale);
    CHECK(!config.max_los_distance.has_value());
    CHECK(config.avg_mode == AvgNormalization::Neighborhood);
    CHECK(config.clear_sigma == 0.00015);
    CHECK(config.graph_format == GraphFileFormat::Binary);
}

TEST_CASE("a full config round-trips every field") {
    const RunConfig config = parse_run_config(R"({
        "mesh": "city.obj",
        "grid": {
            "bounds": [0, 0, 100, 80],
            "spacing": 2.0,
            "eye_height": 1.6,
            "walkable_cutoff": 0.25,
            "drop_height": 120.0
        },
        "conditions": ["clear", "rain:8", "snow-dry:4:550", "fog-ha", "sigma:0.06"],
        "metric": "avg",
        "targets": [[10, 20], [30, 40, 1.7]],
        "out": "results",
        "shared_scale": true,
        "max_los": 250.0,
        "avg_mode": "candidate-set",
        "clear_sigma": 0.0002,
        "graph_format": "json"
    })");

    CHECK(config.mesh == "city.obj");
    REQUIRE(config.bounds.has_value());
    CHECK(config.bounds->min_x == 0.0);
    CHECK(config.bounds->max_x == 100.0);
    CHECK(config.bounds->max_y == 80.0);
    CHECK(config.spacing == 2.0);
    CHECK(config.eye_height == 1.6);
    CHECK(config.walkable_cutoff == 0.25);
    CHECK(config.drop_height == 120.0);
    REQUIRE(config.conditions.size() == 5);
    CHECK(config.conditions[0].kind == WeatherKind::Clear);
    CHECK(config.conditions[1].kind == WeatherKind::Rain);
    CHECK(config.conditions[1].rate_mm_per_h == 8.0);
    CHECK(config.conditions[2].kind == WeatherKind::SnowDry);
    CHECK(config.conditions[2].wavelength_nm == 550.0);
    CHECK(config.conditions[3].kind == WeatherKind::FogHeavyAdvection);
    CHECK(config.conditions[4].kind == WeatherKind::CustomSigma);
    CHECK(config.conditions[4].custom_sigma == 0.06);
    CHECK(config.metric == Metric::Avg);
    REQUIRE(config.targets.size() == 2);
    CHECK(config.targets[0][0] == 10.0);
    CHECK(config.targets[1][1] == 40.0); // the z of a 3D target is dropped
    CHECK(config.out_dir == "results");
    CHECK(config.shared_scale);
    CHECK(config.max_los_distance == 250.0);
    CHECK(config.avg_mode == AvgNormalization::CandidateSet);
    CHECK(config.clear_sigma == 0.0002);
    CHECK(config.graph_format == GraphFileFormat::Json);
}

TEST_CASE("conditions accept object entries equivalent to tokens") {
    const RunConfig config = parse_run_config(R"({
        "conditions": [
            {"kind": "rain", "rate": 8},
            {"kind": "snow-wet", "rate": 4, "wavelength": 650},
            {"kind": "sigma", "sigma": 0.06},
            {"kind": "fog-mr"}
        ]
    })");
    REQUIRE(config.conditions.size() == 4);
    CHECK(config.conditions[0].kind == WeatherKind::Rain);
    CHECK(config.conditions[0].rate_mm_per_h == 8.0);
    CHECK(config.conditions[1].kind == WeatherKind::SnowWet);
    CHECK(config.conditions[1].wavelength_nm == 650.0);
    CHECK(config.conditions[2].custom_sigma == 0.06);
    CHECK(config.conditions[3].kind == WeatherKind::FogModerateRadiation);
}

TEST_CASE("metric names parse and print consistently") {
    CHECK(parse_metric("degree") == Metric::Degree);
    CHECK(parse_metric("sum") == Metric::Sum);
    CHECK(parse_metric("avg") == Metric::Avg);
    CHECK(metric_name(Metric::Degree) == std::string("degree"));
    CHECK(metric_name(Metric::Sum) == std::string("sum"));
    CHECK(metric_name(Metric::Avg) == std::string("avg"));
    CHECK_THROWS_AS(parse_metric("median"), ConfigError);
}

TEST_CASE("typos and malformed values are configuration errors") {
    CHECK_THROWS_AS(parse_run_config("not json"), ConfigError);
    CHECK_THROWS_AS(parse_run_config("[1, 2]"), ConfigError);
    CHECK_THROWS_AS(parse_run_config(R"({"meshh": "a.obj"})"), ConfigError);
    CHECK_THROWS_AS(parse_run_config(R"({"grid": {"spacign": 1}})"), ConfigError);
    CHECK_THROWS_AS(parse_run_config(R"({"grid": {"spacing": 0}})"), ConfigError);
    CHECK_THROWS_AS(parse_run_config(R"({"grid": {"spacing": -2}})"), ConfigError);
    CHECK_THROWS_AS(parse_run_config(R"({"grid": {"bounds": [0, 0, 10]}})"), ConfigError);
    CHECK_THROWS_AS(parse_run_config(R"({"grid": {"bounds": [0, 0, 0, 10]}})"), ConfigError);
    CHECK_THROWS_AS(parse_run_config(R"({"conditions": "clear"})"), ConfigError);
    CHECK_THROWS_AS(parse_run_config(R"({"conditions": ["drizzle"]})"), ConfigError);
    CHECK_THROWS_AS(parse_run_config(R"({"conditions": [{"rate": 8}]})"), ConfigError);
    CHECK_THROWS_AS(parse_run_config(R"({"conditions": [{"kind": "rain", "speed": 8}]})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_run_config(R"({"metric": "median"})"), ConfigError);
    CHECK_THROWS_AS(parse_run_config(R"({"targets": [[1]]})"), ConfigError);
    CHECK_THROWS_AS(parse_run_config(R"({"targets": 7})"), ConfigError);
    CHECK_THROWS_AS(parse_run_config(R"({"shared_scale": "yes"})"), ConfigError);
    CHECK_THROWS_AS(parse_run_config(R"({"max_los": 0})"), ConfigError);
    CHECK_THROWS_AS(parse_run_config(R"({"avg_mode": "mean"})"), ConfigError);
    CHECK_THROWS_AS(parse_run_config(R"({"clear_sigma": -1})"), ConfigError);
    CHECK_THROWS_AS(parse_run_config(R"({"graph_format": "xml"})"), ConfigError);
}

TEST_CASE("config files load from disk and missing files are config errors") {
    const auto path = std::filesystem::temp_directory_path() / "wxvis_config_test.json";
    {
        std::ofstream stream(path, std::ios::trunc);
        stream << R"({"mesh": "scene.obj", "conditions": ["clear"], "out": "o"})";
    }
    const RunConfig config = load_run_config(path);
    CHECK(config.mesh == "scene.obj");
    CHECK(config.conditions.size() == 1);
    std::filesystem::remove(path);

    CHECK_THROWS_AS(load_run_config(path), ConfigError);
}

TEST_CASE("run validation demands mesh, conditions, spacing, and output") {
    RunConfig good;
    good.mesh = "scene.obj";
    good.conditions = {WeatherCondition::parse("clear")};
    good.out_dir = "out";
    CHECK_NOTHROW(validate_run_config(good));

    RunConfig no_mesh = good;
    no_mesh.mesh.clear();
    CHECK_THROWS_AS(validate_run_config(no_mesh), ConfigError);

    RunConfig no_conditions = good;
    no_conditions.conditions.clear();
    CHECK_THROWS_AS(validate_run_config(no_conditions), ConfigError);

    RunConfig no_out = good;
    no_out.out_dir.clear();
    CHECK_THROWS_AS(validate_run_config(no_out), ConfigError);

    RunConfig bad_spacing = good;
    bad_spacing.spacing = 0.0;
    CHECK_THROWS_AS(validate_run_config(bad_spacing), ConfigError);
}
