#pragma once

#include <Eigen/Core>

#include <filesystem>
#include <string>

namespace mspm {

/// Per-vertex scalar data. `values[i]` belongs to vertex i of the mesh the
/// field was sampled on; the name travels into file output (VTK array name).
struct ScalarField {
    std::string name;
    Eigen::VectorXd values;
};

/// Construct a field, rejecting NaN or infinite entries.
/// @throws ArgumentError on non-finite values
ScalarField make_field(std::string name, Eigen::VectorXd values);

/// Read a two-column CSV "vertex_index,value". Indices must cover
/// 0..n-1 exactly once (any order); an optional non-numeric header line is
/// skipped. The field name is taken from the file stem.
/// @throws ParseError on malformed rows, duplicate or missing indices,
///         or non-finite values
ScalarField read_field_csv(const std::filesystem::path& path);

/// Write the two-column CSV form with a header line. Values are printed
/// with 17 significant digits so a round-trip is bit-exact.
void write_field_csv(const std::filesystem::path& path, const ScalarField& field);

} // namespace mspm
