#pragma once

#include "mspm/field.hpp"
#include "mspm/mesh.hpp"

#include <filesystem>
#include <iosfwd>

namespace mspm {

/// Read a triangle mesh from an OFF file (comments and blank lines
/// allowed, leading "OFF" keyword optional). Faces must be triangles.
/// The result is validated via build_mesh().
/// @throws ParseError plus the build_mesh() validation errors
TriangleMesh read_off(const std::filesystem::path& path);
TriangleMesh read_off(std::istream& in, const std::string& origin = "<stream>");

/// Write a mesh in OFF format with 17-significant-digit coordinates.
void write_off(const std::filesystem::path& path, const TriangleMesh& mesh);

/// Read a triangle mesh from an ASCII PLY file. Vertex properties other
/// than x/y/z and extra face properties are ignored; binary PLY is
/// rejected.
/// @throws ParseError plus the build_mesh() validation errors
TriangleMesh read_ply(const std::filesystem::path& path);
TriangleMesh read_ply(std::istream& in, const std::string& origin = "<stream>");

/// Dispatch on extension: ".off" or ".ply" (case-insensitive).
/// @throws ParseError for unknown extensions
TriangleMesh read_mesh(const std::filesystem::path& path);

/// Write legacy ASCII VTK PolyData, optionally with one per-vertex scalar
/// array attached as POINT_DATA (named after the field).
void write_vtk(const std::filesystem::path& path, const TriangleMesh& mesh);
void write_vtk(const std::filesystem::path& path, const TriangleMesh& mesh,
               const ScalarField& field);

} // namespace mspm
