// SPDX-License-Identifier: Apache-2.0
// Drives the installed binary end to end through /bin/sh: the documented
// exit codes (0 ok, 2 config, 3 input, 4 numeric) are part of the
// interface, so they are asserted on the real process, not on library
// calls.
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "support/scenes.hpp"

namespace {

struct TempDir {
    std::filesystem::path path;

    TempDir() {
        static int counter = 0;
        path = std::filesystem::temp_directory_path() / ("wxvis_cli_" + std::to_string(++counter));
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

/// Runs `wxvis <args>`, returns the exit code; stdout+stderr go to `log`
/// when given, else to /dev/null.
int invoke(const std::string& args, const std::filesystem::path& log = {}) {
    const std::string sink = log.empty() ? "/dev/null" : log.string();
    const std::string command = std::string(WXVIS_CLI_PATH) + " " + args + " >" + sink + " 2>&1";
    const int status = std::system(command.c_str());
    REQUIRE(status != -1);
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

std::filesystem::path write_config(const TempDir& dir, const std::string& body) {
    const auto path = dir.path / "config.json";
    std::ofstream stream(path, std::ios::trunc);
    stream << body;
    return path;
}

/// 8x8 m corner of the flat scene, two conditions, output under the temp dir.
std::filesystem::path small_config(const TempDir& dir) {
    return write_config(dir, R"({
        "mesh": ")" + wxvis::test::scene_path("plane50.obj") +
                                 R"(",
        "grid": {"bounds": [0, 0, 8, 8]},
        "conditions": ["clear", "sigma:0.1"],
        "out": ")" + (dir.path / "run").string() +
                                 R"("
    })");
}

} // namespace

TEST_CASE("help and usage errors") {
    CHECK(invoke("--help") == 0);
    CHECK(invoke("run --help") == 0);
    CHECK(invoke("") == 2);          // a verb is required
    CHECK(invoke("frobnicate") == 2);
    CHECK(invoke("run --no-such-flag") == 2);
}

TEST_CASE("run produces the artifact set and is reproducible") {
    TempDir dir;
    const auto config = small_config(dir);
    REQUIRE(invoke("run --config " + config.string()) == 0);

    const auto run_dir = dir.path / "run";
    for (const char* name : {"nodes.csv", "graph.vgat", "scores_clear.csv",
                             "scores_sigma0p1.csv", "heatmap_clear.ppm", "manifest.json"})
        CHECK(std::filesystem::exists(run_dir / name));

    const std::string nodes = slurp(run_dir / "nodes.csv");
    const std::string scores = slurp(run_dir / "scores_sigma0p1.csv");
    std::filesystem::remove_all(run_dir);
    REQUIRE(invoke("run --config " + config.string()) == 0);
    CHECK(slurp(run_dir / "nodes.csv") == nodes);
    CHECK(slurp(run_dir / "scores_sigma0p1.csv") == scores);
}

TEST_CASE("command-line conditions replace the config's list") {
    TempDir dir;
    const auto config = small_config(dir);
    REQUIRE(invoke("run --config " + config.string() + " --condition sigma:0.3") == 0);
    CHECK(std::filesystem::exists(dir.path / "run" / "scores_sigma0p3.csv"));
    CHECK(!std::filesystem::exists(dir.path / "run" / "scores_clear.csv"));
}

TEST_CASE("the stage verbs chain through files") {
    TempDir dir;
    const std::string mesh = wxvis::test::scene_path("plane50.obj");
    const std::string common = " --mesh " + mesh + " --config " + small_config(dir).string();

    REQUIRE(invoke("grid" + common + " --out " + (dir.path / "nodes.csv").string()) == 0);
    CHECK(slurp(dir.path / "nodes.csv").substr(0, 9) == "id,x,y,z\n");

    const auto graph = dir.path / "graph.vgat";
    REQUIRE(invoke("graph" + common + " --out " + graph.string()) == 0);

    REQUIRE(invoke("weight --condition rain:8 --out " + (dir.path / "w.vgwt").string() + " " +
                  graph.string()) == 0);
    CHECK(std::filesystem::exists(dir.path / "w.vgwt"));

    REQUIRE(invoke("score --condition clear --condition snow-dry:4 --out " + dir.path.string() +
                  " " + graph.string()) == 0);
    CHECK(std::filesystem::exists(dir.path / "scores_clear.csv"));
    CHECK(std::filesystem::exists(dir.path / "scores_snow_dry4.csv"));

    REQUIRE(invoke("heatmap --condition clear --metric degree --out " + dir.path.string() + " " +
                  graph.string()) == 0);
    CHECK(std::filesystem::exists(dir.path / "heatmap_clear.ppm"));
    CHECK(std::filesystem::exists(dir.path / "heatmap_clear.ppm.json"));
}

TEST_CASE("weight demands exactly one condition") {
    TempDir dir;
    const std::string mesh = wxvis::test::scene_path("plane50.obj");
    const auto graph = dir.path / "graph.vgat";
    REQUIRE(invoke("graph --config " + small_config(dir).string() + " --out " + graph.string()) ==
            0);
    const std::string out = " --out " + (dir.path / "w.vgwt").string() + " ";
    CHECK(invoke("weight" + out + graph.string()) == 2);
    CHECK(invoke("weight --condition clear --condition rain:8" + out + graph.string()) == 2);
}

TEST_CASE("query prints the snapped node and respects the snap radius") {
    TempDir dir;
    const std::string common =
        "query --mesh " + wxvis::test::scene_path("plane50.obj") + " --config " +
        small_config(dir).string() + " --condition sigma:0.2";

    const auto log = dir.path / "query.log";
    REQUIRE(invoke(common + " 3.4 4.6", log) == 0);
    const std::string output = slurp(log);
    CHECK(output.find("node 35 at (3.5, 4.5, 1.7)") != std::string::npos);
    CHECK(output.find("sigma:0.2") != std::string::npos);

    CHECK(invoke(common + " 4.0 4.0") == 3); // exact cell corner: nothing within spacing/2
}

TEST_CASE("failure classes map to distinct exit codes") {
    TempDir dir;
    const auto config = small_config(dir);
    // Configuration problems.
    CHECK(invoke("run --config " + config.string() + " --condition drizzle") == 2);
    CHECK(invoke("run --config " + (dir.path / "absent.json").string()) == 2);
    CHECK(invoke("run --mesh " + wxvis::test::scene_path("plane50.obj") + " --out " +
                (dir.path / "x").string()) == 2); // no conditions anywhere
    // Input problems.
    CHECK(invoke("run --config " + config.string() + " --mesh " +
                (dir.path / "missing.obj").string()) == 3);
    const auto junk = dir.path / "junk.vgat";
    std::ofstream(junk) << "not a graph";
    CHECK(invoke("score --condition clear --out " + dir.path.string() + " " + junk.string()) == 3);
}
