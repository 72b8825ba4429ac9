#pragma once

#include "mspm/field.hpp"
#include "mspm/mesh.hpp"

#include <cstdint>
#include <utility>

namespace mspm {

// Parameters for the step-function demo surface: a triangulated disk of
// radius sqrt(2) whose vertices are lifted to z = 1 inside the unit circle.
struct HatSurfaceSpec {
    // Number of concentric vertex rings between the center and the rim.
    std::int32_t radial_resolution = 16;
    // Number of vertices per ring.
    std::int32_t angular_resolution = 32;
};

// Builds the hat surface and its indicator field (1 where x^2 + y^2 < 1,
// 0 on the annulus 1 <= x^2 + y^2 <= 2).  Rings are spaced so that each
// annular band covers equal area, which keeps the fraction of 1-valued
// vertices near the disk-area ratio 1/2.  The mesh is a single open disk
// (Euler characteristic 1) and the z coordinate equals the field value.
//
// Throws ArgumentError when either resolution is below 8.
std::pair<TriangleMesh, ScalarField> hat_surface(const HatSurfaceSpec& spec);

// Builds a unit sphere by midpoint-subdividing an icosahedron `level` times
// and projecting every vertex onto the unit sphere.  The result is closed,
// one component, Euler characteristic 2, with 20 * 4^level faces.
//
// Throws ArgumentError when level is outside 0..7.
TriangleMesh unit_sphere(std::int32_t level);

// One level of flat 1->4 midpoint subdivision (no reprojection).
TriangleMesh subdivide_midpoint(const TriangleMesh& mesh);

// Returns a copy of the mesh with every vertex multiplied by `factor`.
//
// Throws ArgumentError when factor is not positive and finite.
TriangleMesh scale_mesh(const TriangleMesh& mesh, double factor);

// Draws an i.i.d. N(0, sigma^2) value per vertex from a seeded generator.
// The same (mesh, sigma, seed) triple always yields the same field; spatial
// smoothness is induced later by kernel regression, not here.
//
// Throws ArgumentError when sigma is not positive.
ScalarField gaussian_noise_field(const TriangleMesh& mesh, double sigma,
                                 std::uint64_t seed);

} // namespace mspm
