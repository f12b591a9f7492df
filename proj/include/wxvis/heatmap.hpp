// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "wxvis/sampling.hpp"

namespace wxvis {

/// Raster view of a lattice-generated node set: one cell per lattice point,
/// row-major with y outer, cell (0,0) at the minimum-coordinate corner.
struct Lattice {
    double origin_x = 0.0; // center of cell column 0
    double origin_y = 0.0; // center of cell row 0
    double spacing = 1.0;
    std::size_t nx = 0;
    std::size_t ny = 0;
    std::size_t node_count = 0;
    std::vector<std::int64_t> cell_node; // ny*nx entries; -1 = no node there

    /// Snaps every node to the implied cell. Nodes must sit on a common
    /// lattice (within 1e-6 of a cell center per axis, no two nodes in one
    /// cell); anything else is rejected with InputError.
    static Lattice from_nodes(std::span<const Node> nodes, double spacing);

    /// Same, inferring the spacing as the smallest positive coordinate gap
    /// along either axis.
    static Lattice from_nodes(std::span<const Node> nodes);
};

enum class ScaleMode : std::uint8_t {
    PerRun = 0, // bounds taken from the exported values themselves
    Shared = 1, // bounds supplied by the caller (one scale across conditions)
};

struct HeatmapScale {
    ScaleMode mode = ScaleMode::PerRun;
    double min = 0.0; // used (and required finite, min <= max) in Shared mode
    double max = 0.0;
};

/// Color ramp for heatmaps: piecewise-linear between five control points,
/// dark blue-violet through teal to yellow. Luminance increases strictly
/// with t, so pixel comparisons reflect score order. t is clamped to [0,1].
/// Control points (t, R, G, B):
///   0.00  68   1  84
///   0.25  59  82 139
///   0.50  33 145 140
///   0.75  94 201  98
///   1.00 253 231  37
std::array<std::uint8_t, 3> heatmap_color(double t);

/// Writes a binary PPM (P6) with one pixel per lattice cell, top row =
/// maximum y. Cells without a node get the sentinel color (0,0,0), which the
/// ramp never produces. `values` is indexed by node id. A flat field maps to
/// t = 0.5. A sidecar JSON at `<path>.json` records the bounds, mode, and
/// raster geometry. Returns the scale actually used.
HeatmapScale write_heatmap(const std::filesystem::path& path, const Lattice& lattice,
                           std::span<const double> values, const HeatmapScale& scale = {});

} // namespace wxvis
