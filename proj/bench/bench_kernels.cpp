// SPDX-License-Identifier: Apache-2.0
//
// Serial-versus-OpenMP comparison for the three kernels that dominate a
// run: lattice sampling, pairwise line-of-sight graph construction, and the
// weight/score passes. The serial baselines are the reference
// implementations the tests already check for exact agreement, so the
// speedup numbers compare like for like.
#include <benchmark/benchmark.h>

#include "wxvis/bvh.hpp"
#include "wxvis/mesh.hpp"
#include "wxvis/reference.hpp"
#include "wxvis/sampling.hpp"
#include "wxvis/visgraph.hpp"

using namespace wxvis;

namespace {

struct Scene {
    TriangleMesh mesh;
    Bvh bvh;
    GridSpec spec;
    std::vector<Node> nodes;
    VisibilityGraph graph;

    explicit Scene(const char* name, double spacing)
        : mesh(load_obj(std::string(WXVIS_SCENE_DIR) + "/" + name)), bvh(mesh) {
        const auto b = bvh.bounds();
        spec.bounds = {b.min.x, b.min.y, b.max.x, b.max.y};
        spec.spacing = spacing;
        nodes = generate_grid(spec, bvh);
        graph = build_visibility_graph(nodes, bvh);
    }
};

const Scene& bars() {
    static const Scene scene("bars50.obj", 2.0);
    return scene;
}

const Scene& city() {
    static const Scene scene("crossroads100.obj", 2.5);
    return scene;
}

void BM_GridSerial(benchmark::State& state) {
    const Scene& s = city();
    for (auto _ : state) benchmark::DoNotOptimize(ref::generate_grid_serial(s.spec, s.bvh));
}

void BM_GridParallel(benchmark::State& state) {
    const Scene& s = city();
    for (auto _ : state) benchmark::DoNotOptimize(generate_grid(s.spec, s.bvh));
}

void BM_GraphSerial(benchmark::State& state) {
    const Scene& s = bars();
    for (auto _ : state)
        benchmark::DoNotOptimize(ref::build_visibility_graph_serial(s.nodes, s.bvh));
    state.counters["nodes"] = static_cast<double>(s.nodes.size());
}

void BM_GraphParallel(benchmark::State& state) {
    const Scene& s = bars();
    for (auto _ : state) benchmark::DoNotOptimize(build_visibility_graph(s.nodes, s.bvh));
    state.counters["nodes"] = static_cast<double>(s.nodes.size());
}

void BM_GraphParallelCity(benchmark::State& state) {
    const Scene& s = city();
    for (auto _ : state) benchmark::DoNotOptimize(build_visibility_graph(s.nodes, s.bvh));
    state.counters["nodes"] = static_cast<double>(s.nodes.size());
}

void BM_WeightSerial(benchmark::State& state) {
    const Scene& s = city();
    const auto coeff = sigma_snow(4.0, SnowType::Dry);
    for (auto _ : state) benchmark::DoNotOptimize(ref::weight_edges_serial(s.graph, coeff));
    state.counters["arcs"] = static_cast<double>(s.graph.neighbors.size());
}

void BM_WeightParallel(benchmark::State& state) {
    const Scene& s = city();
    const auto coeff = sigma_snow(4.0, SnowType::Dry);
    for (auto _ : state) benchmark::DoNotOptimize(weight_edges(s.graph, coeff));
    state.counters["arcs"] = static_cast<double>(s.graph.neighbors.size());
}

void BM_ScoresSerial(benchmark::State& state) {
    const Scene& s = city();
    const auto w = weight_edges(s.graph, sigma_snow(4.0, SnowType::Dry));
    for (auto _ : state) benchmark::DoNotOptimize(ref::compute_scores_serial(s.graph, w));
}

void BM_ScoresParallel(benchmark::State& state) {
    const Scene& s = city();
    const auto w = weight_edges(s.graph, sigma_snow(4.0, SnowType::Dry));
    for (auto _ : state) benchmark::DoNotOptimize(compute_scores(s.graph, w));
}

BENCHMARK(BM_GridSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GridParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GraphSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GraphParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GraphParallelCity)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WeightSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WeightParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScoresSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScoresParallel)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
