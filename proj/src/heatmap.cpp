// SPDX-License-Identifier: Apache-2.0
#include "wxvis/heatmap.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <string>

#include <json.hpp>

#include "wxvis/errors.hpp"

namespace wxvis {

namespace {

/// Acceptable distance from a cell center, as a fraction of the spacing.
constexpr double kSnapTolerance = 1e-6;

constexpr double kRampPoints[5][3] = {
    {68.0, 1.0, 84.0},   {59.0, 82.0, 139.0}, {33.0, 145.0, 140.0},
    {94.0, 201.0, 98.0}, {253.0, 231.0, 37.0},
};

std::int64_t snap_index(double coordinate, double origin, double spacing,
                        const char* axis) {
    const double offset = (coordinate - origin) / spacing;
    const double rounded = std::round(offset);
    if (std::abs(offset - rounded) > kSnapTolerance)
        throw InputError(std::string("node off the lattice along ") + axis);
    return static_cast<std::int64_t>(rounded);
}

double infer_spacing(std::span<const Node> nodes) {
    auto smallest_gap = [&](auto pick) {
        std::vector<double> coords(nodes.size());
        std::transform(nodes.begin(), nodes.end(), coords.begin(), pick);
        std::sort(coords.begin(), coords.end());
        double gap = std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i < coords.size(); ++i) {
            const double d = coords[i] - coords[i - 1];
            if (d > 1e-9) gap = std::min(gap, d);
        }
        return gap;
    };
    const double gap = std::min(smallest_gap([](const Node& n) { return n.position.x; }),
                                smallest_gap([](const Node& n) { return n.position.y; }));
    if (!std::isfinite(gap))
        throw InputError("cannot infer a lattice spacing: all nodes share one cell");
    return gap;
}

} // namespace

Lattice Lattice::from_nodes(std::span<const Node> nodes, double spacing) {
    if (nodes.empty()) throw InputError("cannot build a lattice from zero nodes");
    if (!(spacing > 0.0) || !std::isfinite(spacing))
        throw InputError("lattice spacing must be positive and finite");

    Lattice lattice;
    lattice.spacing = spacing;
    lattice.node_count = nodes.size();
    lattice.origin_x = std::numeric_limits<double>::infinity();
    lattice.origin_y = std::numeric_limits<double>::infinity();
    for (const Node& node : nodes) {
        lattice.origin_x = std::min(lattice.origin_x, node.position.x);
        lattice.origin_y = std::min(lattice.origin_y, node.position.y);
    }

    std::int64_t max_ix = 0;
    std::int64_t max_iy = 0;
    std::vector<std::pair<std::int64_t, std::int64_t>> cells(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].id >= nodes.size())
            throw InputError("lattice nodes must carry dense ids");
        const auto ix = snap_index(nodes[i].position.x, lattice.origin_x, spacing, "x");
        const auto iy = snap_index(nodes[i].position.y, lattice.origin_y, spacing, "y");
        cells[i] = {ix, iy};
        max_ix = std::max(max_ix, ix);
        max_iy = std::max(max_iy, iy);
    }
    lattice.nx = static_cast<std::size_t>(max_ix) + 1;
    lattice.ny = static_cast<std::size_t>(max_iy) + 1;
    if (lattice.nx * lattice.ny > 100'000'000)
        throw InputError("lattice raster would be implausibly large");

    lattice.cell_node.assign(lattice.nx * lattice.ny, -1);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        auto& slot = lattice.cell_node[static_cast<std::size_t>(cells[i].second) * lattice.nx +
                                       static_cast<std::size_t>(cells[i].first)];
        if (slot != -1) throw InputError("two nodes snap to the same lattice cell");
        slot = nodes[i].id;
    }
    return lattice;
}

Lattice Lattice::from_nodes(std::span<const Node> nodes) {
    if (nodes.empty()) throw InputError("cannot build a lattice from zero nodes");
    return from_nodes(nodes, infer_spacing(nodes));
}

std::array<std::uint8_t, 3> heatmap_color(double t) {
    t = std::clamp(t, 0.0, 1.0);
    const double position = t * 4.0;
    const auto low = static_cast<std::size_t>(std::min(position, 3.0));
    const double frac = position - static_cast<double>(low);
    std::array<std::uint8_t, 3> rgb{};
    for (int c = 0; c < 3; ++c) {
        const double v = kRampPoints[low][c] + frac * (kRampPoints[low + 1][c] - kRampPoints[low][c]);
        rgb[static_cast<std::size_t>(c)] = static_cast<std::uint8_t>(std::lround(v));
    }
    return rgb;
}

HeatmapScale write_heatmap(const std::filesystem::path& path, const Lattice& lattice,
                           std::span<const double> values, const HeatmapScale& scale) {
    if (values.size() != lattice.node_count)
        throw InputError("value count does not match the lattice node count");
    for (const double v : values)
        if (!std::isfinite(v)) throw InputError("heatmap values must be finite");

    HeatmapScale used = scale;
    if (scale.mode == ScaleMode::PerRun) {
        used.min = std::numeric_limits<double>::infinity();
        used.max = -std::numeric_limits<double>::infinity();
        for (const double v : values) {
            used.min = std::min(used.min, v);
            used.max = std::max(used.max, v);
        }
    } else if (!std::isfinite(scale.min) || !std::isfinite(scale.max) || scale.min > scale.max) {
        throw InputError("shared heatmap scale bounds are invalid");
    }

    const double range = used.max - used.min;
    std::string pixels = "P6\n" + std::to_string(lattice.nx) + " " + std::to_string(lattice.ny) +
                         "\n255\n";
    pixels.reserve(pixels.size() + lattice.nx * lattice.ny * 3);
    for (std::size_t row = lattice.ny; row-- > 0;) {
        for (std::size_t col = 0; col < lattice.nx; ++col) {
            const auto node = lattice.cell_node[row * lattice.nx + col];
            std::array<std::uint8_t, 3> rgb{0, 0, 0}; // no-node sentinel
            if (node >= 0) {
                const double v = values[static_cast<std::size_t>(node)];
                // A flat field has no order to show; park it mid-ramp.
                const double t = range > 0.0 ? (v - used.min) / range : 0.5;
                rgb = heatmap_color(t);
            }
            pixels.append(reinterpret_cast<const char*>(rgb.data()), 3);
        }
    }

    std::ofstream image(path, std::ios::binary | std::ios::trunc);
    if (!image) throw InputError("cannot open for writing: " + path.string());
    image.write(pixels.data(), static_cast<std::streamsize>(pixels.size()));
    image.flush();
    if (!image) throw InputError("write failed: " + path.string());

    nlohmann::json sidecar;
    sidecar["format"] = "wxvis-heatmap-scale";
    sidecar["version"] = 1;
    sidecar["min"] = used.min;
    sidecar["max"] = used.max;
    sidecar["mode"] = used.mode == ScaleMode::Shared ? "shared" : "per-run";
    sidecar["width"] = lattice.nx;
    sidecar["height"] = lattice.ny;
    sidecar["spacing"] = lattice.spacing;
    sidecar["origin"] = {lattice.origin_x, lattice.origin_y};
    const std::filesystem::path sidecar_path = path.string() + ".json";
    std::ofstream meta(sidecar_path, std::ios::trunc);
    if (!meta) throw InputError("cannot open for writing: " + sidecar_path.string());
    meta << sidecar.dump(2) << "\n";
    meta.flush();
    if (!meta) throw InputError("write failed: " + sidecar_path.string());
    return used;
}

} // namespace wxvis
