#pragma once

#include "mspm/mesh.hpp"

#include <cstdint>

namespace mspm {

/// Regularized incomplete beta function I_x(a, b), a, b > 0, x in [0, 1].
/// Continued-fraction evaluation, accurate to ~1e-14.
double regularized_incomplete_beta(double a, double b, double x);

/// CDF of Student's t distribution with dof degrees of freedom.
/// @throws ArgumentError for dof <= 0
double student_t_cdf(double x, double dof);

/// Euler-characteristic densities of a T field with `dof` degrees of
/// freedom after heat-kernel smoothing at `bandwidth`:
///   rho0(z) = P(T > z)
///   rho1(z) = (2 t^2)^{-1/2} (2 pi)^{-1} (1 + z^2/nu)^{-(nu-1)/2}
///   rho2(z) = (2 t^2)^{-1} (2 pi)^{-3/2}
///             [Gamma((nu+1)/2) / ((nu/2)^{1/2} Gamma(nu/2))]
///             z (1 + z^2/nu)^{-(nu-1)/2}
struct EcDensities {
    double rho0 = 0.0;
    double rho1 = 0.0;
    double rho2 = 0.0;
};

/// @throws ArgumentError for dof < 1 or bandwidth <= 0
EcDensities ec_densities_t(double z, double dof, double bandwidth);

/// Raw expected Euler characteristic of the excursion set above z:
/// mu0*rho0 + mu1*rho1 + mu2*rho2, unclamped.
double expected_euler(double z, const Minkowski& mink, double dof, double bandwidth);

/// Family-wise corrected p-value P(sup T > max_stat), i.e. the EC
/// expansion clamped to [0, 1]. Warns when the raw expansion exceeds 1
/// (threshold below the expansion's domain of validity).
/// @throws ArgumentError for mu2 <= 0, dof < 1, or bandwidth <= 0
double corrected_pvalue(double max_stat, const Minkowski& mink, double dof,
                        double bandwidth);

/// Corrected p-value for an F field with numerator df 1 via the
/// two-sided-T reduction: P(sup F > z) = P(sup |T| > sqrt(z)) ~=
/// 2 * sum_j mu_j rho_j(sqrt(z)), clamped to [0, 1].
/// @throws ArgumentError for max_f < 0 plus the corrected_pvalue errors
double corrected_pvalue_f(double max_f, const Minkowski& mink, double dof_den,
                          double bandwidth);

/// Threshold t*_alpha with corrected_pvalue(t*_alpha) = alpha, located by
/// a downward grid scan over z in [0, 100] plus bisection to 1e-8.
/// @throws ArgumentError for alpha outside (0, 0.5) or when no bracket
///         exists in [0, 100]
double alpha_quantile(double alpha, const Minkowski& mink, double dof, double bandwidth);

/// Approximate power of detecting a signal of c standard deviations over
/// the region `signal` with n subjects at level alpha:
///   P = 1 - exp(-sum_j mu_j(signal) rho_j(t*_alpha - c sqrt(n)))
/// where t*_alpha comes from the whole-template functionals `search`.
/// The result is clamped to [0, 1].
/// @throws ArgumentError for c < 0, n < 2, signal area <= 0
double power(Eigen::Index n, double c, const Minkowski& search, const Minkowski& signal,
             double dof, double bandwidth, double alpha);

} // namespace mspm
