#include "mspm/synthetic.hpp"
#include "mspm/error.hpp"
#include "mspm/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <unordered_map>
#include <vector>

namespace mspm {

namespace {

// Icosahedron with consistently outward-oriented faces; vertices are scaled
// to the unit sphere before use.
constexpr double kGolden = 1.6180339887498948482;

const std::array<Eigen::Vector3d, 12> kIcoVertices = {{
    {-1.0, kGolden, 0.0},  {1.0, kGolden, 0.0},   {-1.0, -kGolden, 0.0},
    {1.0, -kGolden, 0.0},  {0.0, -1.0, kGolden},  {0.0, 1.0, kGolden},
    {0.0, -1.0, -kGolden}, {0.0, 1.0, -kGolden},  {kGolden, 0.0, -1.0},
    {kGolden, 0.0, 1.0},   {-kGolden, 0.0, -1.0}, {-kGolden, 0.0, 1.0},
}};

constexpr std::array<std::array<std::int32_t, 3>, 20> kIcoFaces = {{
    {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
    {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
    {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
    {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1},
}};

// Splits every face into four; `on_sphere` reprojects new midpoints onto the
// unit sphere so repeated subdivision refines a sphere rather than a polytope.
void subdivide_once(std::vector<Eigen::Vector3d>& vertices,
                    std::vector<std::array<std::int32_t, 3>>& faces,
                    bool on_sphere) {
    std::unordered_map<std::uint64_t, std::int32_t> midpoint_of;
    midpoint_of.reserve(faces.size() * 2);

    auto midpoint = [&](std::int32_t a, std::int32_t b) -> std::int32_t {
        const std::uint64_t lo = static_cast<std::uint32_t>(std::min(a, b));
        const std::uint64_t hi = static_cast<std::uint32_t>(std::max(a, b));
        const std::uint64_t key = (hi << 32) | lo;
        const auto found = midpoint_of.find(key);
        if (found != midpoint_of.end()) return found->second;
        Eigen::Vector3d mid = 0.5 * (vertices[static_cast<std::size_t>(a)] +
                                     vertices[static_cast<std::size_t>(b)]);
        if (on_sphere) mid.normalize();
        const auto index = static_cast<std::int32_t>(vertices.size());
        vertices.push_back(mid);
        midpoint_of.emplace(key, index);
        return index;
    };

    std::vector<std::array<std::int32_t, 3>> refined;
    refined.reserve(faces.size() * 4);
    for (const auto& face : faces) {
        const std::int32_t ab = midpoint(face[0], face[1]);
        const std::int32_t bc = midpoint(face[1], face[2]);
        const std::int32_t ca = midpoint(face[2], face[0]);
        refined.push_back({face[0], ab, ca});
        refined.push_back({face[1], bc, ab});
        refined.push_back({face[2], ca, bc});
        refined.push_back({ab, bc, ca});
    }
    faces = std::move(refined);
}

} // namespace

std::pair<TriangleMesh, ScalarField> hat_surface(const HatSurfaceSpec& spec) {
    const std::int32_t nr = spec.radial_resolution;
    const std::int32_t na = spec.angular_resolution;
    if (nr < 8 || na < 8) {
        throw ArgumentError("hat surface resolutions must be at least 8, got radial " +
                            std::to_string(nr) + ", angular " + std::to_string(na));
    }

    const auto vertex_count = static_cast<std::size_t>(nr) * static_cast<std::size_t>(na) + 1;
    std::vector<Eigen::Vector3d> vertices;
    vertices.reserve(vertex_count);
    Eigen::VectorXd values(static_cast<Eigen::Index>(vertex_count));

    // Half-offset equal-area rings: r_i = sqrt(2 (i - 1/2) / (nr - 1/2))
    // keeps the rim at exactly sqrt(2) while each band covers an equal
    // share of area, so the vertices split evenly across the unit circle.
    // No ring ever lands on the circle r = 1 itself (the nearest ring is
    // ~1/(2 nr) away), so the elevation step falls cleanly between two
    // rings instead of slicing through one.
    vertices.emplace_back(0.0, 0.0, 1.0);
    values[0] = 1.0;
    Eigen::Index next = 1;
    for (std::int32_t ring = 1; ring <= nr; ++ring) {
        const double radius = std::sqrt(2.0 * (ring - 0.5) / (nr - 0.5));
        for (std::int32_t seg = 0; seg < na; ++seg) {
            const double angle = 2.0 * std::numbers::pi * seg / na;
            const double x = radius * std::cos(angle);
            const double y = radius * std::sin(angle);
            // Judged on the stored coordinates so the field is exactly the
            // indicator of the open unit disk at each vertex position.
            const double value = x * x + y * y < 1.0 ? 1.0 : 0.0;
            vertices.emplace_back(x, y, value);
            values[next++] = value;
        }
    }

    // Counterclockwise faces viewed from +z: a fan around the center, then
    // two triangles per quad between consecutive rings.
    auto at = [na](std::int32_t ring, std::int32_t seg) -> std::int32_t {
        return 1 + (ring - 1) * na + seg % na;
    };
    std::vector<std::array<std::int32_t, 3>> faces;
    faces.reserve(static_cast<std::size_t>(2 * nr - 1) * static_cast<std::size_t>(na));
    for (std::int32_t seg = 0; seg < na; ++seg) {
        faces.push_back({0, at(1, seg), at(1, seg + 1)});
    }
    for (std::int32_t ring = 1; ring < nr; ++ring) {
        for (std::int32_t seg = 0; seg < na; ++seg) {
            faces.push_back({at(ring, seg), at(ring + 1, seg), at(ring + 1, seg + 1)});
            faces.push_back({at(ring, seg), at(ring + 1, seg + 1), at(ring, seg + 1)});
        }
    }

    TriangleMesh mesh = build_mesh(std::move(vertices), std::move(faces));
    return {std::move(mesh), make_field("hat", std::move(values))};
}

TriangleMesh unit_sphere(std::int32_t level) {
    if (level < 0 || level > 7) {
        throw ArgumentError("sphere subdivision level must lie in 0..7, got " +
                            std::to_string(level));
    }
    std::vector<Eigen::Vector3d> vertices;
    vertices.reserve(12);
    for (const auto& v : kIcoVertices) vertices.push_back(v.normalized());
    std::vector<std::array<std::int32_t, 3>> faces(kIcoFaces.begin(), kIcoFaces.end());
    for (std::int32_t i = 0; i < level; ++i) {
        subdivide_once(vertices, faces, /*on_sphere=*/true);
    }
    return build_mesh(std::move(vertices), std::move(faces));
}

TriangleMesh subdivide_midpoint(const TriangleMesh& mesh) {
    std::vector<Eigen::Vector3d> vertices = mesh.vertices;
    std::vector<std::array<std::int32_t, 3>> faces = mesh.faces;
    subdivide_once(vertices, faces, /*on_sphere=*/false);
    return build_mesh(std::move(vertices), std::move(faces));
}

TriangleMesh scale_mesh(const TriangleMesh& mesh, double factor) {
    if (!(factor > 0.0) || !std::isfinite(factor)) {
        throw ArgumentError("scale factor must be positive and finite, got " +
                            std::to_string(factor));
    }
    std::vector<Eigen::Vector3d> vertices = mesh.vertices;
    for (auto& v : vertices) v *= factor;
    return build_mesh(std::move(vertices), mesh.faces);
}

ScalarField gaussian_noise_field(const TriangleMesh& mesh, double sigma,
                                 std::uint64_t seed) {
    if (!(sigma > 0.0)) {
        throw ArgumentError("noise standard deviation must be positive, got " +
                            std::to_string(sigma));
    }
    GaussianSampler sampler(seed);
    Eigen::VectorXd values(static_cast<Eigen::Index>(mesh.vertices.size()));
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        values[i] = sigma * sampler.next();
    }
    return make_field("noise", std::move(values));
}

} // namespace mspm
