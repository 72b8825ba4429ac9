#pragma once

#include "mspm/field.hpp"
#include "mspm/spectral.hpp"

#include <Eigen/Core>

#include <functional>

namespace mspm {

/// Spectral filter applied to basis coefficients. The smoothed field is
///   h = sum_j tau_j beta_j psi_j,    beta_j = psi_j' A f,
/// where tau_j = g(lambda_j * t) for a generator g with g(0) = 1.
///
/// - heat(t):    g(x) = exp(-x); t = 0 keeps every coefficient.
/// - identity(): no damping at all — plain least-squares projection onto
///               the truncated basis.
/// - custom(g,t): arbitrary generator; rescaled so g(0) = 1 (with a
///               warning) when it is not already normalized.
class KernelSpec {
public:
    static KernelSpec heat(double bandwidth);
    static KernelSpec identity();
    static KernelSpec custom(std::function<double(double)> generator, double bandwidth);

    /// Limit the filter to the first `k` basis functions (0 = use the
    /// whole basis supplied at evaluation time).
    KernelSpec truncated(Eigen::Index k) const;

    Eigen::Index truncation() const { return truncation_; }
    double bandwidth() const { return bandwidth_; }
    bool is_identity() const { return kind_ == Kind::Identity; }

    /// Filter weights tau_j for the given eigenvalues (ascending,
    /// nonnegative up to rounding).
    /// @throws ArgumentError on decreasing or significantly negative input,
    ///         or when a custom generator returns a non-finite value
    Eigen::VectorXd weights(const Eigen::VectorXd& eigenvalues) const;

private:
    enum class Kind { Heat, Identity, Custom };
    KernelSpec(Kind kind, double bandwidth) : kind_(kind), bandwidth_(bandwidth) {}

    Kind kind_;
    double bandwidth_ = 0.0;
    Eigen::Index truncation_ = 0;
    std::function<double(double)> generator_;
};

/// Free-function form of KernelSpec::weights.
Eigen::VectorXd kernel_weights(const KernelSpec& spec, const Eigen::VectorXd& eigenvalues);

/// Smooth a field by filtered basis expansion. Linear in the input.
/// @throws ArgumentError on dimension mismatch or truncation > basis.k()
ScalarField regress(const ScalarField& field, const SpectralBasis& basis,
                    const KernelSpec& spec);

/// Heat diffusion of the initial condition to time t, evaluated through
/// the eigenexpansion; equals regress() with a heat kernel over the full
/// supplied basis.
/// @throws ArgumentError for t < 0
ScalarField diffusion_solve(const ScalarField& initial, const SpectralBasis& basis, double t);

/// Band-pass / wavelet analysis: same evaluation path with an arbitrary
/// generator g(lambda * scale).
ScalarField wavelet_transform(const ScalarField& field, const SpectralBasis& basis,
                              const std::function<double(double)>& generator, double scale);

/// Dense kernel samples K = Psi diag(tau) Psi^T, i.e. K(p, q) is the
/// smoothing kernel between vertices p and q; smoothing a field f is
/// K * (mass .* f). Refused above `dense_limit` vertices to avoid
/// accidental O(n^2) blowups.
/// @throws ArgumentError when n > dense_limit
Eigen::MatrixXd kernel_matrix(const SpectralBasis& basis, const KernelSpec& spec,
                              Eigen::Index dense_limit = 2000);

} // namespace mspm
