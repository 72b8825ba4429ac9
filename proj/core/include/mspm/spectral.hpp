#pragma once

#include "mspm/fem.hpp"
#include "mspm/field.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>

namespace mspm {

/// Truncated Laplace-Beltrami eigenbasis of a surface.
///
/// Columns of `eigenfunctions` are mass-orthonormal: Psi^T A Psi = I with
/// A = diag(mass). `eigenvalues` are ascending and nonnegative; one zero
/// eigenvalue appears per connected component.
struct SpectralBasis {
    Eigen::VectorXd eigenvalues;     // k, ascending
    Eigen::MatrixXd eigenfunctions;  // n x k
    Eigen::VectorXd mass;            // n, lumped mass diagonal used in the solve

    Eigen::Index n() const { return eigenfunctions.rows(); }
    Eigen::Index k() const { return eigenfunctions.cols(); }
};

struct SolveOptions {
    /// Spectral shift is shift_scale * trace(A); keeps the factorized
    /// matrix positive definite despite the zero modes.
    double shift_scale = 1e-8;
    /// Problems with n below this use a dense generalized eigensolver
    /// instead of the iterative path.
    Eigen::Index dense_threshold = 300;
    /// Cap on the Krylov subspace dimension (0 = automatic).
    Eigen::Index max_subspace = 0;
    /// Seed for the deterministic start vector of the iterative path.
    std::uint64_t seed = 0x6d73706dull;
};

/// Compute the k smallest generalized eigenpairs of C psi = lambda A psi.
///
/// Small problems are solved densely; otherwise a shift-invert Lanczos
/// iteration with full reorthogonalization in the mass inner product runs
/// until every returned pair satisfies
///   ||C x - lambda A x||_2 <= tol * ||A x||_2.
/// Tiny negative eigenvalues (rounding artifacts of the semidefinite
/// stiffness) are clamped to zero.
///
/// @throws ArgumentError  k outside [1, n], nonpositive mass entries
/// @throws SolverError    factorization failure or non-convergence; the
///                        message reports the achieved residuals
SpectralBasis solve_eigen(const FemMatrices& fem, Eigen::Index k, double tol = 1e-9,
                          const SolveOptions& options = {});

/// Basis coefficients of a field: beta_j = psi_j^T A f.
/// @throws ArgumentError on length mismatch
Eigen::VectorXd fourier_coefficients(const Eigen::VectorXd& values,
                                     const SpectralBasis& basis);
Eigen::VectorXd fourier_coefficients(const ScalarField& field,
                                     const SpectralBasis& basis);

/// Relative L2(A) error of representing the field in the basis:
/// ||f - Psi Psi^T A f||_A / ||f||_A. For an (exactly) zero field the
/// error is reported absolutely and `relative` is false.
struct ReconstructionError {
    double value = 0.0;
    bool relative = true;
};
ReconstructionError reconstruction_error(const Eigen::VectorXd& values,
                                         const SpectralBasis& basis);
ReconstructionError reconstruction_error(const ScalarField& field,
                                         const SpectralBasis& basis);

/// Number of leading eigenvalues treated as zero: those below
/// 1e-8 * max(eigenvalues). Equals the mesh component count when the basis
/// is large enough to contain all null modes.
Eigen::Index zero_mode_count(const SpectralBasis& basis);

/// Serialize to a versioned little-endian binary container; reloading
/// reproduces the basis bit for bit.
/// @throws ParseError on bad magic/version/size when loading
void save_basis(const std::filesystem::path& path, const SpectralBasis& basis);
SpectralBasis load_basis(const std::filesystem::path& path);

} // namespace mspm
