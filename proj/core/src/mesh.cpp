#include "mspm/mesh.hpp"
#include "mspm/error.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <iostream>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

namespace mspm {

namespace {
WarningHandler g_warning_handler;
} // namespace

void log_warning(const std::string& msg) {
    if (g_warning_handler) {
        g_warning_handler(msg);
        return;
    }
    std::cerr << "[mspm] warning: " << msg << "\n";
}

WarningHandler set_warning_handler(WarningHandler handler) {
    WarningHandler previous = std::move(g_warning_handler);
    g_warning_handler = std::move(handler);
    return previous;
}

namespace {

// Undirected edge key; endpoints fit in 32 bits each.
inline std::uint64_t edge_key(std::int32_t a, std::int32_t b) {
    const auto lo = static_cast<std::uint64_t>(std::min(a, b));
    const auto hi = static_cast<std::uint64_t>(std::max(a, b));
    return (hi << 32) | lo;
}

inline std::uint64_t directed_key(std::int32_t a, std::int32_t b) {
    return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
}

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }
    std::int32_t find(std::int32_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void unite(std::int32_t a, std::int32_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[std::max(a, b)] = std::min(a, b);
    }

private:
    std::vector<std::int32_t> parent_;
};

} // namespace

TriangleMesh build_mesh(std::vector<Eigen::Vector3d> vertices,
                        std::vector<std::array<std::int32_t, 3>> faces) {
    const auto n = static_cast<std::int64_t>(vertices.size());

    for (std::size_t f = 0; f < faces.size(); ++f) {
        const auto& face = faces[f];
        for (int c = 0; c < 3; ++c) {
            if (face[c] < 0 || face[c] >= n) {
                throw IndexOutOfRangeError("face " + std::to_string(f) +
                                           " references vertex " + std::to_string(face[c]) +
                                           " outside [0, " + std::to_string(n) + ")");
            }
        }
        if (face[0] == face[1] || face[1] == face[2] || face[0] == face[2]) {
            throw DegenerateFaceError("face " + std::to_string(f) +
                                      " repeats a vertex index");
        }
    }

    // Edge incidence: at most two faces per undirected edge, and the two
    // traversals must run in opposite directions.
    std::unordered_map<std::uint64_t, std::int32_t> undirected;
    std::unordered_set<std::uint64_t> directed;
    undirected.reserve(faces.size() * 3);
    directed.reserve(faces.size() * 3);
    for (std::size_t f = 0; f < faces.size(); ++f) {
        const auto& face = faces[f];
        for (int c = 0; c < 3; ++c) {
            const std::int32_t a = face[c];
            const std::int32_t b = face[(c + 1) % 3];
            auto& count = undirected[edge_key(a, b)];
            if (++count > 2) {
                throw NonManifoldEdgeError("edge (" + std::to_string(a) + ", " +
                                           std::to_string(b) + ") is shared by more than two faces");
            }
            if (!directed.insert(directed_key(a, b)).second) {
                throw OrientationError("faces traverse edge (" + std::to_string(a) + ", " +
                                       std::to_string(b) +
                                       ") in the same direction; orientation is inconsistent");
            }
        }
    }

    TriangleMesh mesh;
    mesh.vertices = std::move(vertices);
    mesh.faces = std::move(faces);

    // Connected components over face adjacency; isolated vertices form
    // their own components.
    UnionFind uf(mesh.vertices.size());
    for (const auto& face : mesh.faces) {
        uf.unite(face[0], face[1]);
        uf.unite(face[1], face[2]);
    }

    // Dense labels ordered by the smallest vertex index per component:
    // scanning vertices in order visits each root at its smallest member.
    mesh.vertex_component.assign(mesh.vertices.size(), -1);
    std::unordered_map<std::int32_t, std::int32_t> label_of_root;
    for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
        const std::int32_t root = uf.find(static_cast<std::int32_t>(v));
        auto [it, inserted] = label_of_root.try_emplace(root, mesh.component_count);
        if (inserted) ++mesh.component_count;
        mesh.vertex_component[v] = it->second;
    }
    return mesh;
}

double face_area(const TriangleMesh& mesh, std::size_t f) {
    const auto& face = mesh.faces[f];
    const Eigen::Vector3d e1 = mesh.vertices[face[1]] - mesh.vertices[face[0]];
    const Eigen::Vector3d e2 = mesh.vertices[face[2]] - mesh.vertices[face[0]];
    return 0.5 * e1.cross(e2).norm();
}

double total_area(const TriangleMesh& mesh) {
    double area = 0.0;
    for (std::size_t f = 0; f < mesh.face_count(); ++f) area += face_area(mesh, f);
    return area;
}

std::int32_t TopologySummary::total_euler() const {
    std::int32_t chi = 0;
    for (const auto c : euler_characteristic) chi += c;
    return chi;
}

TopologySummary summarize_topology(const TriangleMesh& mesh) {
    TopologySummary summary;
    summary.component_count = mesh.component_count;
    summary.total_area = total_area(mesh);

    // Count vertices, undirected edges, and faces per component. Every
    // simplex of a face lies in one component by construction.
    std::vector<std::int64_t> nv(mesh.component_count, 0);
    std::vector<std::int64_t> ne(mesh.component_count, 0);
    std::vector<std::int64_t> nf(mesh.component_count, 0);
    for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
        ++nv[mesh.vertex_component[v]];
    }
    std::unordered_map<std::uint64_t, std::int32_t> edge_faces;
    edge_faces.reserve(mesh.face_count() * 3);
    for (const auto& face : mesh.faces) {
        ++nf[mesh.vertex_component[face[0]]];
        for (int c = 0; c < 3; ++c) {
            ++edge_faces[edge_key(face[c], face[(c + 1) % 3])];
        }
    }
    for (const auto& [key, count] : edge_faces) {
        const auto a = static_cast<std::int32_t>(key & 0xffffffffu);
        ++ne[mesh.vertex_component[a]];
        if (count == 1) ++summary.boundary_edge_count;
    }
    summary.euler_characteristic.resize(mesh.component_count);
    for (std::int32_t c = 0; c < mesh.component_count; ++c) {
        summary.euler_characteristic[c] = static_cast<std::int32_t>(nv[c] - ne[c] + nf[c]);
    }
    return summary;
}

Minkowski minkowski_functionals(const TopologySummary& summary) {
    if (summary.component_count <= 0) {
        throw ArgumentError("Minkowski functionals of an empty surface are undefined");
    }
    if (!summary.is_closed()) {
        throw UnsupportedTopologyError(
            "Minkowski functionals require a closed surface; mesh has " +
            std::to_string(summary.boundary_edge_count) + " boundary edges");
    }
    Minkowski mink;
    mink.mu0 = static_cast<double>(summary.total_euler());
    mink.mu1 = 0.0;
    mink.mu2 = 0.5 * summary.total_area;
    return mink;
}

Minkowski minkowski_functionals(const TriangleMesh& mesh) {
    return minkowski_functionals(summarize_topology(mesh));
}

Minkowski patch_minkowski(const TriangleMesh& mesh,
                          const std::vector<std::int32_t>& vertex_subset) {
    const auto n = static_cast<std::int64_t>(mesh.vertex_count());
    std::unordered_set<std::int32_t> subset;
    subset.reserve(vertex_subset.size());
    for (const auto v : vertex_subset) {
        if (v < 0 || v >= n) {
            throw IndexOutOfRangeError("patch vertex " + std::to_string(v) +
                                       " outside [0, " + std::to_string(n) + ")");
        }
        if (!subset.insert(v).second) {
            throw IndexOutOfRangeError("patch vertex " + std::to_string(v) + " listed twice");
        }
    }

    // Euler characteristic of the induced subcomplex: kept vertices minus
    // kept undirected edges plus kept faces. Edges are enumerated from the
    // incident faces of the whole mesh so boundary edges of the patch are
    // counted once.
    std::unordered_set<std::uint64_t> kept_edges;
    std::int64_t kept_faces = 0;
    double patch_area = 0.0;
    for (std::size_t f = 0; f < mesh.face_count(); ++f) {
        const auto& face = mesh.faces[f];
        for (int c = 0; c < 3; ++c) {
            const std::int32_t a = face[c];
            const std::int32_t b = face[(c + 1) % 3];
            if (subset.count(a) && subset.count(b)) kept_edges.insert(edge_key(a, b));
        }
        if (subset.count(face[0]) && subset.count(face[1]) && subset.count(face[2])) {
            ++kept_faces;
            patch_area += face_area(mesh, f);
        }
    }
    Minkowski mink;
    mink.mu0 = static_cast<double>(static_cast<std::int64_t>(subset.size()) -
                                   static_cast<std::int64_t>(kept_edges.size()) + kept_faces);
    mink.mu1 = 0.0;
    mink.mu2 = 0.5 * patch_area;
    return mink;
}

} // namespace mspm
