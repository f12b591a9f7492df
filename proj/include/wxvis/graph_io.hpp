// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <span>

#include "wxvis/sampling.hpp"
#include "wxvis/visgraph.hpp"

namespace wxvis {

/// Lattice nodes as CSV with the fixed header `id,x,y,z`. Numbers use the
/// shortest representation that parses back to the same double.
void write_nodes_csv(const std::filesystem::path& path, std::span<const Node> nodes);

/// Per-node scores as CSV with the fixed header `node_id,degree,s_sum,s_avg`.
void write_scores_csv(const std::filesystem::path& path, const ScoreField& scores);

/// Compact binary graph format, little-endian throughout:
///   bytes 0..3   magic "VGAT"
///   byte  4      version (1)
///   byte  5      kind (0 all-to-all, 1 subset)
///   bytes 6..7   reserved (0)
///   bytes 8..31  u64 node count n, u64 directed arc count m, u64 target count t
///   then the four arrays: f64 positions (3n), u64 offsets (n+1),
///   u32 neighbors (m), f64 distances (m); then u32 targets (t).
void write_graph_binary(const std::filesystem::path& path, const VisibilityGraph& graph);

/// JSON graph form: {"format":"wxvis-graph","version":1,"kind":...,
/// "nodes":[[x,y,z],...],"offsets":[...],"neighbors":[...],"distances":[...],
/// "targets":[...]}.
void write_graph_json(const std::filesystem::path& path, const VisibilityGraph& graph);

/// Reads either graph form, sniffed by leading bytes. Validates structural
/// invariants (monotone offsets, neighbor range, arc symmetry counts, sorted
/// unique targets) and throws InputError on any violation.
VisibilityGraph read_graph(const std::filesystem::path& path);

/// Edge-weight file, little-endian:
///   bytes 0..3  magic "VGWT"
///   byte  4     version (1)
///   bytes 5..7  reserved (0)
///   bytes 8..15 f64 sigma
///   bytes 16..23 u64 directed arc count m
///   u16 condition token length + token bytes; then f64 weights (m).
void write_weights_binary(const std::filesystem::path& path, const EdgeWeights& weights);

EdgeWeights read_weights_binary(const std::filesystem::path& path);

} // namespace wxvis
