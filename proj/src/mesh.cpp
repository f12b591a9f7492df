// SPDX-License-Identifier: Apache-2.0
#include "wxvis/mesh.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "wxvis/errors.hpp"

namespace wxvis {

Aabb TriangleMesh::bounds() const {
    Aabb box;
    for (const auto& v : vertices) box.expand(v);
    return box;
}

double TriangleMesh::triangle_area(std::size_t t) const {
    const auto& [i, j, k] = triangles[t];
    return 0.5 * norm(cross(vertices[j] - vertices[i], vertices[k] - vertices[i]));
}

namespace {

[[noreturn]] void parse_fail(const std::filesystem::path& path, std::size_t line,
                             const std::string& what) {
    throw InputError(path.string() + ":" + std::to_string(line) + ": " + what);
}

double parse_double(std::string_view tok, const std::filesystem::path& path, std::size_t line) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        parse_fail(path, line, "bad number '" + std::string(tok) + "'");
    return value;
}

// Face vertex references look like "i", "i/t", "i//n" or "i/t/n"; only the
// position index matters. Negative indices count back from the current end
// of the vertex list, per the OBJ convention.
std::uint32_t parse_face_index(std::string_view tok, std::size_t vertex_count,
                               const std::filesystem::path& path, std::size_t line) {
    const auto slash = tok.find('/');
    if (slash != std::string_view::npos) tok = tok.substr(0, slash);
    long long idx = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), idx);
    if (ec != std::errc{} || ptr != tok.data() + tok.size() || idx == 0)
        parse_fail(path, line, "bad face index '" + std::string(tok) + "'");
    if (idx < 0) idx += static_cast<long long>(vertex_count) + 1;
    if (idx < 1 || idx > static_cast<long long>(vertex_count))
        parse_fail(path, line, "face index " + std::to_string(idx) + " out of range");
    return static_cast<std::uint32_t>(idx - 1);
}

constexpr double kMinTriangleArea = 1e-12; // square meters

} // namespace

TriangleMesh load_obj(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open mesh file: " + path.string());

    TriangleMesh mesh;
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::uint32_t> face; // scratch
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag) || tag[0] == '#') continue;
        if (tag == "v") {
            Vec3 v;
            std::string sx, sy, sz;
            if (!(ls >> sx >> sy >> sz)) parse_fail(path, line_no, "vertex needs 3 coordinates");
            v.x = parse_double(sx, path, line_no);
            v.y = parse_double(sy, path, line_no);
            v.z = parse_double(sz, path, line_no);
            if (!is_finite(v)) parse_fail(path, line_no, "non-finite vertex coordinate");
            mesh.vertices.push_back(v);
        } else if (tag == "f") {
            face.clear();
            std::string ref;
            while (ls >> ref)
                face.push_back(parse_face_index(ref, mesh.vertices.size(), path, line_no));
            if (face.size() < 3) parse_fail(path, line_no, "face needs at least 3 vertices");
            for (std::size_t k = 1; k + 1 < face.size(); ++k) {
                const std::array<std::uint32_t, 3> tri{face[0], face[k], face[k + 1]};
                mesh.triangles.push_back(tri);
                if (mesh.triangle_area(mesh.triangles.size() - 1) < kMinTriangleArea) {
                    mesh.triangles.pop_back();
                    ++mesh.degenerate_dropped;
                }
            }
        }
        // Anything else (vn, vt, usemtl, g, o, s, mtllib, ...) is ignored.
    }
    if (mesh.triangles.empty())
        throw InputError("mesh has no (non-degenerate) triangles: " + path.string());
    return mesh;
}

} // namespace wxvis
