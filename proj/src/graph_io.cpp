// SPDX-License-Identifier: Apache-2.0
#include "wxvis/graph_io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <system_error>

#include <json.hpp>

#include "wxvis/errors.hpp"

namespace wxvis {

namespace {

constexpr char kGraphMagic[4] = {'V', 'G', 'A', 'T'};
constexpr char kWeightsMagic[4] = {'V', 'G', 'W', 'T'};
constexpr std::uint8_t kFormatVersion = 1;

std::string format_double(double v) {
    char buf[32];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw InputError("number formatting failed");
    return {buf, end};
}

void append_row_end(std::string& out) { out.push_back('\n'); }

void write_file(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream stream(path, std::ios::binary | std::ios::trunc);
    if (!stream) throw InputError("cannot open for writing: " + path.string());
    stream.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    stream.flush();
    if (!stream) throw InputError("write failed: " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream stream(path, std::ios::binary);
    if (!stream) throw InputError("cannot open: " + path.string());
    std::string bytes((std::istreambuf_iterator<char>(stream)), std::istreambuf_iterator<char>());
    if (stream.bad()) throw InputError("read failed: " + path.string());
    return bytes;
}

template <typename T>
void append_le(std::string& out, T value) {
    static_assert(std::is_trivially_copyable_v<T>);
    unsigned char raw[sizeof(T)];
    std::memcpy(raw, &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(raw, raw + sizeof(T));
    out.append(reinterpret_cast<const char*>(raw), sizeof(T));
}

template <typename T>
void append_array_le(std::string& out, std::span<const T> values) {
    if constexpr (std::endian::native == std::endian::little) {
        out.append(reinterpret_cast<const char*>(values.data()), values.size_bytes());
    } else {
        for (const T& v : values) append_le(out, v);
    }
}

/// Cursor over an in-memory file image; every take checks the remainder.
class Reader {
  public:
    Reader(const std::string& bytes, std::string name)
        : bytes_(bytes), name_(std::move(name)) {}

    template <typename T>
    T take() {
        T value;
        take_into(&value, sizeof(T));
        if constexpr (std::endian::native == std::endian::big) {
            unsigned char* raw = reinterpret_cast<unsigned char*>(&value);
            std::reverse(raw, raw + sizeof(T));
        }
        return value;
    }

    template <typename T>
    std::vector<T> take_array(std::uint64_t count) {
        if (count > remaining() / sizeof(T))
            throw InputError("truncated file: " + name_);
        std::vector<T> values(static_cast<std::size_t>(count));
        if constexpr (std::endian::native == std::endian::little) {
            take_into(values.data(), values.size() * sizeof(T));
        } else {
            for (auto& v : values) v = take<T>();
        }
        return values;
    }

    std::string take_string(std::size_t length) {
        if (length > remaining()) throw InputError("truncated file: " + name_);
        std::string s = bytes_.substr(cursor_, length);
        cursor_ += length;
        return s;
    }

    std::size_t remaining() const { return bytes_.size() - cursor_; }

  private:
    void take_into(void* dst, std::size_t n) {
        if (n > remaining()) throw InputError("truncated file: " + name_);
        std::memcpy(dst, bytes_.data() + cursor_, n);
        cursor_ += n;
    }

    const std::string& bytes_;
    std::string name_;
    std::size_t cursor_ = 0;
};

void validate_graph(const VisibilityGraph& g, const std::string& name) {
    const auto n = g.positions.size();
    const auto m = g.neighbors.size();
    if (g.offsets.size() != n + 1 || g.offsets.front() != 0 || g.offsets.back() != m)
        throw InputError("graph offsets are inconsistent: " + name);
    if (g.distances.size() != m) throw InputError("graph arrays misaligned: " + name);
    if (m % 2 != 0) throw InputError("graph arc count is odd: " + name);
    for (std::size_t i = 0; i + 1 < g.offsets.size(); ++i)
        if (g.offsets[i] > g.offsets[i + 1])
            throw InputError("graph offsets are not monotone: " + name);
    for (const auto v : g.neighbors)
        if (v >= n) throw InputError("graph neighbor id out of range: " + name);
    for (const auto d : g.distances)
        if (!std::isfinite(d) || d <= 0.0)
            throw InputError("graph distance is not a positive finite value: " + name);
    if (g.kind == GraphKind::AllToAll && !g.targets.empty())
        throw InputError("all-to-all graph carries a target set: " + name);
    if (g.kind == GraphKind::Subset && g.targets.empty())
        throw InputError("subset graph lacks a target set: " + name);
    for (std::size_t i = 0; i < g.targets.size(); ++i) {
        if (g.targets[i] >= n) throw InputError("graph target id out of range: " + name);
        if (i > 0 && g.targets[i - 1] >= g.targets[i])
            throw InputError("graph targets not sorted unique: " + name);
    }
    for (const auto& p : g.positions)
        if (!is_finite(p)) throw InputError("graph position is not finite: " + name);
    // Rows sorted with no self arcs, and every arc mirrored with the same
    // stored distance.
    for (std::uint32_t v = 0; v < n; ++v) {
        const auto row = g.neighbors_of(v);
        const auto dist = g.distances_of(v);
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (row[k] == v) throw InputError("graph has a self edge: " + name);
            if (k > 0 && row[k - 1] >= row[k])
                throw InputError("graph neighbor row not sorted unique: " + name);
            const auto back = g.neighbors_of(row[k]);
            const auto it = std::lower_bound(back.begin(), back.end(), v);
            if (it == back.end() || *it != v)
                throw InputError("graph arc lacks its mirror: " + name);
            const auto back_index = static_cast<std::size_t>(it - back.begin());
            if (g.distances_of(row[k])[back_index] != dist[k])
                throw InputError("graph mirror arcs disagree on distance: " + name);
        }
    }
}

const char* kind_name(GraphKind kind) {
    return kind == GraphKind::AllToAll ? "all-to-all" : "subset";
}

GraphKind kind_from_byte(std::uint8_t b, const std::string& name) {
    if (b > 1) throw InputError("unknown graph kind byte: " + name);
    return static_cast<GraphKind>(b);
}

} // namespace

void write_nodes_csv(const std::filesystem::path& path, std::span<const Node> nodes) {
    std::string out = "id,x,y,z\n";
    for (const Node& node : nodes) {
        out += std::to_string(node.id);
        out.push_back(',');
        out += format_double(node.position.x);
        out.push_back(',');
        out += format_double(node.position.y);
        out.push_back(',');
        out += format_double(node.position.z);
        append_row_end(out);
    }
    write_file(path, out);
}

void write_scores_csv(const std::filesystem::path& path, const ScoreField& scores) {
    std::string out = "node_id,degree,s_sum,s_avg\n";
    for (std::size_t i = 0; i < scores.degree.size(); ++i) {
        out += std::to_string(i);
        out.push_back(',');
        out += std::to_string(scores.degree[i]);
        out.push_back(',');
        out += format_double(scores.score_sum[i]);
        out.push_back(',');
        out += format_double(scores.score_avg[i]);
        append_row_end(out);
    }
    write_file(path, out);
}

void write_graph_binary(const std::filesystem::path& path, const VisibilityGraph& graph) {
    std::string out;
    const std::uint64_t n = graph.positions.size();
    out.reserve(32 + n * 24 + graph.offsets.size() * 8 + graph.neighbors.size() * 12 +
                graph.targets.size() * 4);
    out.append(kGraphMagic, 4);
    append_le(out, kFormatVersion);
    append_le(out, static_cast<std::uint8_t>(graph.kind));
    append_le(out, std::uint16_t{0});
    append_le(out, n);
    append_le(out, static_cast<std::uint64_t>(graph.neighbors.size()));
    append_le(out, static_cast<std::uint64_t>(graph.targets.size()));
    static_assert(sizeof(Vec3) == 24, "positions must pack as three doubles");
    if (n > 0)
        append_array_le(out, std::span<const double>(&graph.positions.front().x, n * 3));
    append_array_le(out, std::span<const std::uint64_t>(graph.offsets));
    append_array_le(out, std::span<const std::uint32_t>(graph.neighbors));
    append_array_le(out, std::span<const double>(graph.distances));
    append_array_le(out, std::span<const std::uint32_t>(graph.targets));
    write_file(path, out);
}

void write_graph_json(const std::filesystem::path& path, const VisibilityGraph& graph) {
    nlohmann::json doc;
    doc["format"] = "wxvis-graph";
    doc["version"] = kFormatVersion;
    doc["kind"] = kind_name(graph.kind);
    auto& nodes = doc["nodes"] = nlohmann::json::array();
    for (const Vec3& p : graph.positions) nodes.push_back({p.x, p.y, p.z});
    doc["offsets"] = graph.offsets;
    doc["neighbors"] = graph.neighbors;
    doc["distances"] = graph.distances;
    doc["targets"] = graph.targets;
    write_file(path, doc.dump(2) + "\n");
}

namespace {

VisibilityGraph read_graph_binary(const std::string& bytes, const std::string& name) {
    Reader r(bytes, name);
    r.take_string(4); // magic, already sniffed
    if (r.take<std::uint8_t>() != kFormatVersion)
        throw InputError("unsupported graph version: " + name);
    VisibilityGraph g;
    g.kind = kind_from_byte(r.take<std::uint8_t>(), name);
    r.take<std::uint16_t>(); // reserved
    const auto n = r.take<std::uint64_t>();
    const auto m = r.take<std::uint64_t>();
    const auto t = r.take<std::uint64_t>();
    // Node ids are 32-bit; a larger count can only be garbage (and would
    // otherwise overflow the array-size arithmetic below).
    if (n > UINT32_MAX || t > n) throw InputError("graph counts are implausible: " + name);
    const auto coords = r.take_array<double>(n * 3);
    g.positions.resize(static_cast<std::size_t>(n));
    std::memcpy(g.positions.data(), coords.data(), coords.size() * sizeof(double));
    g.offsets = r.take_array<std::uint64_t>(n + 1);
    g.neighbors = r.take_array<std::uint32_t>(m);
    g.distances = r.take_array<double>(m);
    g.targets = r.take_array<std::uint32_t>(t);
    if (r.remaining() != 0) throw InputError("trailing bytes after graph: " + name);
    validate_graph(g, name);
    return g;
}

VisibilityGraph read_graph_json(const std::string& bytes, const std::string& name) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(bytes);
    } catch (const nlohmann::json::exception& e) {
        throw InputError("graph JSON parse failed: " + name + ": " + e.what());
    }
    try {
        if (doc.at("format") != "wxvis-graph" || doc.at("version") != kFormatVersion)
            throw InputError("not a supported graph JSON file: " + name);
        VisibilityGraph g;
        const std::string kind = doc.at("kind");
        if (kind == "all-to-all")
            g.kind = GraphKind::AllToAll;
        else if (kind == "subset")
            g.kind = GraphKind::Subset;
        else
            throw InputError("unknown graph kind: " + name);
        for (const auto& entry : doc.at("nodes")) {
            if (!entry.is_array() || entry.size() != 3)
                throw InputError("node entry is not an [x,y,z] triple: " + name);
            g.positions.push_back(
                {entry[0].get<double>(), entry[1].get<double>(), entry[2].get<double>()});
        }
        g.offsets = doc.at("offsets").get<std::vector<std::uint64_t>>();
        g.neighbors = doc.at("neighbors").get<std::vector<std::uint32_t>>();
        g.distances = doc.at("distances").get<std::vector<double>>();
        g.targets = doc.at("targets").get<std::vector<std::uint32_t>>();
        validate_graph(g, name);
        return g;
    } catch (const nlohmann::json::exception& e) {
        throw InputError("graph JSON is malformed: " + name + ": " + e.what());
    }
}

} // namespace

VisibilityGraph read_graph(const std::filesystem::path& path) {
    const std::string bytes = read_file(path);
    if (bytes.size() >= 4 && std::memcmp(bytes.data(), kGraphMagic, 4) == 0)
        return read_graph_binary(bytes, path.string());
    return read_graph_json(bytes, path.string());
}

void write_weights_binary(const std::filesystem::path& path, const EdgeWeights& weights) {
    std::string out;
    out.append(kWeightsMagic, 4);
    append_le(out, kFormatVersion);
    append_le(out, std::uint8_t{0});
    append_le(out, std::uint16_t{0});
    append_le(out, weights.sigma);
    append_le(out, static_cast<std::uint64_t>(weights.weights.size()));
    const std::string token = weights.condition.to_token();
    if (token.size() > UINT16_MAX) throw InputError("condition token too long");
    append_le(out, static_cast<std::uint16_t>(token.size()));
    out += token;
    append_array_le(out, std::span<const double>(weights.weights));
    write_file(path, out);
}

EdgeWeights read_weights_binary(const std::filesystem::path& path) {
    const std::string bytes = read_file(path);
    const std::string name = path.string();
    if (bytes.size() < 4 || std::memcmp(bytes.data(), kWeightsMagic, 4) != 0)
        throw InputError("not a weights file: " + name);
    Reader r(bytes, name);
    r.take_string(4);
    if (r.take<std::uint8_t>() != kFormatVersion)
        throw InputError("unsupported weights version: " + name);
    r.take<std::uint8_t>();
    r.take<std::uint16_t>();
    EdgeWeights w;
    w.sigma = r.take<double>();
    const auto m = r.take<std::uint64_t>();
    const auto token_length = r.take<std::uint16_t>();
    const std::string token = r.take_string(token_length);
    try {
        w.condition = WeatherCondition::parse(token);
    } catch (const ConfigError& e) {
        throw InputError("weights condition token is invalid: " + name + ": " + e.what());
    }
    w.weights = r.take_array<double>(m);
    if (r.remaining() != 0) throw InputError("trailing bytes after weights: " + name);
    if (!std::isfinite(w.sigma) || w.sigma < 0.0)
        throw InputError("weights sigma is invalid: " + name);
    for (const double v : w.weights)
        if (!(v >= 0.0) || v > 1.0) throw InputError("weight outside [0,1]: " + name);
    return w;
}

} // namespace wxvis
