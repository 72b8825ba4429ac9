#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <vector>

namespace mspm {

/// Triangulated surface embedded in R^3. Coordinates are in millimetres.
///
/// Instances are produced by build_mesh() (or the file readers), which
/// validate the connectivity invariants once; treat the struct as
/// immutable afterwards.
struct TriangleMesh {
    std::vector<Eigen::Vector3d> vertices;
    std::vector<std::array<std::int32_t, 3>> faces;

    /// Connected-component label per vertex. Labels are dense in
    /// [0, component_count) and ordered by the smallest vertex index
    /// contained in each component.
    std::vector<std::int32_t> vertex_component;
    std::int32_t component_count = 0;

    std::size_t vertex_count() const { return vertices.size(); }
    std::size_t face_count() const { return faces.size(); }
};

/// Validate connectivity and label connected components.
///
/// @throws IndexOutOfRangeError  face references a vertex outside [0, n)
/// @throws DegenerateFaceError   face repeats a vertex index
/// @throws NonManifoldEdgeError  an edge is shared by more than two faces
/// @throws OrientationError      two faces traverse a shared edge in the
///                               same direction
TriangleMesh build_mesh(std::vector<Eigen::Vector3d> vertices,
                        std::vector<std::array<std::int32_t, 3>> faces);

/// Area of face f (one half the cross-product norm).
double face_area(const TriangleMesh& mesh, std::size_t f);

/// Sum of all face areas, accumulated in face order.
double total_area(const TriangleMesh& mesh);

/// Combinatorial and metric summary of a validated mesh.
struct TopologySummary {
    std::int32_t component_count = 0;
    std::vector<std::int32_t> euler_characteristic;  // per component
    std::size_t boundary_edge_count = 0;             // edges with one incident face
    double total_area = 0.0;

    bool is_closed() const { return boundary_edge_count == 0; }
    std::int32_t total_euler() const;
};

TopologySummary summarize_topology(const TriangleMesh& mesh);

/// Intrinsic volumes (Minkowski functionals) of a surface region:
/// mu0 = Euler characteristic, mu1 = half boundary length (zero for the
/// closed surfaces handled here), mu2 = half surface area.
struct Minkowski {
    double mu0 = 0.0;
    double mu1 = 0.0;
    double mu2 = 0.0;
};

/// Minkowski functionals of a closed surface, from its topology summary.
/// @throws UnsupportedTopologyError if the surface has boundary edges
/// @throws ArgumentError for an empty component list
Minkowski minkowski_functionals(const TopologySummary& summary);

/// Convenience overload: summarize then evaluate.
Minkowski minkowski_functionals(const TriangleMesh& mesh);

/// Minkowski functionals of the subcomplex induced by a vertex subset
/// (all simplices of the mesh whose vertices lie inside the subset).
/// mu0 is the subcomplex Euler characteristic, mu1 = 0, mu2 = half the
/// kept-face area.
/// @throws IndexOutOfRangeError on out-of-range or duplicate indices
Minkowski patch_minkowski(const TriangleMesh& mesh,
                          const std::vector<std::int32_t>& vertex_subset);

} // namespace mspm
