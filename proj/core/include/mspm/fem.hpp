#pragma once

#include "mspm/mesh.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace mspm {

/// Cotangent finite-element discretization of the surface Laplacian.
///
/// `stiffness` is the symmetric positive-semidefinite matrix C with
/// off-diagonal entries -(cot a + cot b)/2 over the angles opposite each
/// edge and rows summing to zero. `mass` is the diagonal of the lumped
/// mass matrix A: one third of the incident face area per vertex, so the
/// entries sum to the total surface area.
struct FemMatrices {
    Eigen::SparseMatrix<double> stiffness;
    Eigen::VectorXd mass;

    Eigen::Index n() const { return mass.size(); }

    /// The lumped mass matrix in sparse form.
    Eigen::SparseMatrix<double> mass_matrix() const;
};

/// Assemble stiffness and lumped mass for a validated mesh.
/// @throws AssemblyError naming the face if a face has (numerically) zero
///         area
FemMatrices assemble_cotan(const TriangleMesh& mesh);

} // namespace mspm
