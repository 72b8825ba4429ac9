#include "mspm/rft.hpp"

#include "mspm/error.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace mspm;

namespace {

Minkowski mink(double mu0, double mu1, double mu2) {
    Minkowski m;
    m.mu0 = mu0;
    m.mu1 = mu1;
    m.mu2 = mu2;
    return m;
}

} // namespace

TEST_CASE("regularized incomplete beta matches reference values and identities") {
    SUBCASE("endpoints") {
        CHECK(regularized_incomplete_beta(2.5, 7.0, 0.0) == 0.0);
        CHECK(regularized_incomplete_beta(2.5, 7.0, 1.0) == 1.0);
    }
    SUBCASE("I_x(1,1) = x and I_x(1,b) = 1-(1-x)^b") {
        for (double x : {0.05, 0.3, 0.72, 0.999}) {
            CHECK(regularized_incomplete_beta(1.0, 1.0, x) == doctest::Approx(x).epsilon(1e-14));
            CHECK(regularized_incomplete_beta(1.0, 4.5, x) ==
                  doctest::Approx(1.0 - std::pow(1.0 - x, 4.5)).epsilon(1e-13));
        }
    }
    SUBCASE("symmetry I_x(a,b) = 1 - I_{1-x}(b,a)") {
        std::mt19937_64 gen(77);
        std::uniform_real_distribution<double> shape(0.2, 30.0);
        std::uniform_real_distribution<double> unit(0.001, 0.999);
        for (int rep = 0; rep < 50; ++rep) {
            const double a = shape(gen);
            const double b = shape(gen);
            const double x = unit(gen);
            const double lhs = regularized_incomplete_beta(a, b, x);
            const double rhs = 1.0 - regularized_incomplete_beta(b, a, 1.0 - x);
            CHECK(std::abs(lhs - rhs) < 1e-13);
        }
    }
    SUBCASE("library reference across a parameter grid") {
        for (double a : {0.5, 1.0, 2.5, 19.0, 27.5}) {
            for (double b : {0.5, 1.5, 10.0, 21.0}) {
                for (double x : {0.01, 0.2, 0.5, 0.8, 0.99}) {
                    const double got = regularized_incomplete_beta(a, b, x);
                    const double want = oracle::incomplete_beta_reference(a, b, x);
                    CHECK(std::abs(got - want) < 1e-12);
                }
            }
        }
    }
    SUBCASE("invalid arguments") {
        CHECK_THROWS_AS(regularized_incomplete_beta(0.0, 1.0, 0.5), ArgumentError);
        CHECK_THROWS_AS(regularized_incomplete_beta(1.0, -2.0, 0.5), ArgumentError);
        CHECK_THROWS_AS(regularized_incomplete_beta(1.0, 1.0, -0.1), ArgumentError);
        CHECK_THROWS_AS(regularized_incomplete_beta(1.0, 1.0, 1.2), ArgumentError);
    }
}

TEST_CASE("student t CDF agrees with closed forms and the reference library") {
    SUBCASE("nu = 1 is the Cauchy CDF") {
        for (double x : {-8.0, -1.0, 0.0, 0.4, 3.0}) {
            const double want = 0.5 + std::atan(x) / 3.141592653589793238462643383279502884;
            CHECK(student_t_cdf(x, 1.0) == doctest::Approx(want).epsilon(1e-13));
        }
    }
    SUBCASE("nu = 2 closed form") {
        for (double x : {-5.0, -0.3, 0.0, 1.7, 9.0}) {
            const double want = 0.5 + x / (2.0 * std::sqrt(x * x + 2.0));
            CHECK(student_t_cdf(x, 2.0) == doctest::Approx(want).epsilon(1e-13));
        }
    }
    SUBCASE("reference library over a grid of dof and x") {
        for (double nu : {1.0, 2.0, 5.0, 38.0, 42.0, 54.0}) {
            for (double x = -10.0; x <= 10.0001; x += 0.5) {
                const double got = student_t_cdf(x, nu);
                const double want = oracle::student_t_cdf(x, nu);
                CHECK(std::abs(got - want) < 1e-12);
            }
        }
    }
    SUBCASE("symmetry and limits") {
        for (double nu : {3.0, 17.0}) {
            for (double x : {0.2, 1.1, 6.0}) {
                CHECK(std::abs(student_t_cdf(x, nu) + student_t_cdf(-x, nu) - 1.0) < 1e-15);
            }
        }
        CHECK(student_t_cdf(std::numeric_limits<double>::infinity(), 4.0) == 1.0);
        CHECK(student_t_cdf(-std::numeric_limits<double>::infinity(), 4.0) == 0.0);
    }
    SUBCASE("invalid arguments") {
        CHECK_THROWS_AS(student_t_cdf(1.0, 0.0), ArgumentError);
        CHECK_THROWS_AS(student_t_cdf(1.0, -3.0), ArgumentError);
        CHECK_THROWS_AS(student_t_cdf(std::nan(""), 4.0), ArgumentError);
    }
}

TEST_CASE("EC densities match hand-computed values") {
    // Literals computed independently at 30-digit precision.
    SUBCASE("nu = 5, z = 2, bandwidth 1") {
        const EcDensities rho = ec_densities_t(2.0, 5.0, 1.0);
        CHECK(rho.rho0 == doctest::Approx(1.0 - oracle::student_t_cdf(2.0, 5.0))
                              .epsilon(1e-12));
        CHECK(rho.rho1 == doctest::Approx(0.034734425777666129).epsilon(1e-14));
        CHECK(rho.rho2 == doctest::Approx(0.01864700034444502).epsilon(1e-14));
    }
    SUBCASE("nu = 42, z = 3.5, bandwidth 0.5") {
        const EcDensities rho = ec_densities_t(3.5, 42.0, 0.5);
        CHECK(rho.rho0 == doctest::Approx(1.0 - oracle::student_t_cdf(3.5, 42.0))
                              .epsilon(1e-12));
        CHECK(rho.rho1 == doctest::Approx(0.0011850887105871996).epsilon(1e-14));
        CHECK(rho.rho2 == doctest::Approx(0.0023262646803039613).epsilon(1e-14));
    }
    SUBCASE("bandwidth scaling: rho1 ~ 1/t, rho2 ~ 1/t^2, rho0 unchanged") {
        const EcDensities base = ec_densities_t(2.5, 12.0, 1.0);
        const EcDensities scaled = ec_densities_t(2.5, 12.0, 3.0);
        CHECK(scaled.rho0 == base.rho0);
        CHECK(scaled.rho1 == doctest::Approx(base.rho1 / 3.0).epsilon(1e-14));
        CHECK(scaled.rho2 == doctest::Approx(base.rho2 / 9.0).epsilon(1e-14));
    }
    SUBCASE("large-dof limit approaches the Gaussian densities") {
        const double nu = 1e6;
        const double t = 0.8;
        const double t2 = 2.0 * t * t;
        const double pi = 3.141592653589793238462643383279502884;
        for (double z : {0.5, 1.5, 3.0}) {
            const EcDensities rho = ec_densities_t(z, nu, t);
            const double gauss = std::exp(-0.5 * z * z);
            CHECK(rho.rho1 ==
                  doctest::Approx(gauss / (std::sqrt(t2) * 2.0 * pi)).epsilon(1e-4));
            CHECK(rho.rho2 ==
                  doctest::Approx(z * gauss / (t2 * std::pow(2.0 * pi, 1.5))).epsilon(1e-4));
        }
    }
    SUBCASE("invalid arguments") {
        CHECK_THROWS_AS(ec_densities_t(2.0, 0.5, 1.0), ArgumentError);
        CHECK_THROWS_AS(ec_densities_t(2.0, 5.0, 0.0), ArgumentError);
        CHECK_THROWS_AS(ec_densities_t(2.0, 5.0, -1.0), ArgumentError);
    }
}

TEST_CASE("expected Euler characteristic combines the functionals linearly") {
    const EcDensities rho = ec_densities_t(2.2, 19.0, 1.5);
    const double got = expected_euler(2.2, mink(2.0, 0.5, 40.0), 19.0, 1.5);
    CHECK(got == doctest::Approx(2.0 * rho.rho0 + 0.5 * rho.rho1 + 40.0 * rho.rho2)
                     .epsilon(1e-15));
}

TEST_CASE("corrected p-value clamps and responds monotonically") {
    const Minkowski m = mink(2.0, 0.0, 120.0);
    SUBCASE("low thresholds clamp to 1, high thresholds vanish") {
        CHECK(corrected_pvalue(0.1, m, 20.0, 1.0) == 1.0);
        CHECK(corrected_pvalue(40.0, m, 20.0, 1.0) < 1e-8);
    }
    SUBCASE("nonincreasing in the threshold beyond the density peak") {
        double prev = corrected_pvalue(2.0, m, 20.0, 1.0);
        for (double z = 2.2; z <= 10.0; z += 0.2) {
            const double p = corrected_pvalue(z, m, 20.0, 1.0);
            CHECK(p <= prev + 1e-15);
            prev = p;
        }
    }
    SUBCASE("nondecreasing in each Minkowski functional") {
        const double z = 4.0;
        const double base = corrected_pvalue(z, mink(1.0, 0.0, 50.0), 25.0, 1.0);
        CHECK(corrected_pvalue(z, mink(2.0, 0.0, 50.0), 25.0, 1.0) >= base);
        CHECK(corrected_pvalue(z, mink(1.0, 5.0, 50.0), 25.0, 1.0) >= base);
        CHECK(corrected_pvalue(z, mink(1.0, 0.0, 80.0), 25.0, 1.0) >= base);
    }
    SUBCASE("invalid functionals") {
        CHECK_THROWS_AS(corrected_pvalue(3.0, mink(2.0, 0.0, 0.0), 20.0, 1.0), ArgumentError);
        CHECK_THROWS_AS(corrected_pvalue(3.0, mink(2.0, 0.0, -4.0), 20.0, 1.0), ArgumentError);
    }
}

TEST_CASE("F-field corrected p-value is the two-sided expansion at sqrt(F)") {
    const Minkowski m = mink(2.0, 0.0, 90.0);
    SUBCASE("matches twice the T expansion evaluated at sqrt(F)") {
        for (double f : {4.0, 9.0, 20.25}) {
            const double direct = 2.0 * expected_euler(std::sqrt(f), m, 33.0, 1.0);
            const double got = corrected_pvalue_f(f, m, 33.0, 1.0);
            CHECK(got == doctest::Approx(std::min(direct, 1.0)).epsilon(1e-14));
        }
    }
    SUBCASE("F = 0 clamps to 1") {
        CHECK(corrected_pvalue_f(0.0, m, 33.0, 1.0) == 1.0);
    }
    SUBCASE("twice the T p-value while both are unclamped") {
        const double f = 16.0;
        const double t_side = corrected_pvalue(4.0, m, 33.0, 1.0);
        CHECK(corrected_pvalue_f(f, m, 33.0, 1.0) ==
              doctest::Approx(2.0 * t_side).epsilon(1e-13));
    }
    SUBCASE("invalid arguments") {
        CHECK_THROWS_AS(corrected_pvalue_f(-1.0, m, 33.0, 1.0), ArgumentError);
        CHECK_THROWS_AS(corrected_pvalue_f(4.0, mink(1.0, 0.0, 0.0), 33.0, 1.0),
                        ArgumentError);
    }
}

TEST_CASE("alpha quantile inverts the corrected p-value") {
    SUBCASE("round trip at several levels") {
        struct Case {
            double alpha, dof, bandwidth;
            Minkowski m;
        };
        const std::vector<Case> cases = {
            {0.05, 19.0, 1.0, mink(2.0, 0.0, 628.0)},
            {0.01, 42.0, 0.7, mink(2.0, 0.0, 100.0)},
            {0.10, 8.0, 2.0, mink(1.0, 3.0, 55.0)},
            {0.25, 100.0, 1.0, mink(2.0, 0.0, 1000.0)},
        };
        for (const Case& c : cases) {
            const double z = alpha_quantile(c.alpha, c.m, c.dof, c.bandwidth);
            CHECK(z > 0.0);
            CHECK(std::abs(corrected_pvalue(z, c.m, c.dof, c.bandwidth) - c.alpha) <= 1e-6);
        }
    }
    SUBCASE("larger search area pushes the threshold up") {
        const double small = alpha_quantile(0.05, mink(2.0, 0.0, 50.0), 20.0, 1.0);
        const double large = alpha_quantile(0.05, mink(2.0, 0.0, 5000.0), 20.0, 1.0);
        CHECK(large > small);
    }
    SUBCASE("alpha domain") {
        const Minkowski m = mink(2.0, 0.0, 100.0);
        CHECK_THROWS_AS(alpha_quantile(0.0, m, 20.0, 1.0), ArgumentError);
        CHECK_THROWS_AS(alpha_quantile(0.5, m, 20.0, 1.0), ArgumentError);
        CHECK_THROWS_AS(alpha_quantile(-0.1, m, 20.0, 1.0), ArgumentError);
    }
    SUBCASE("no bracket when the expansion stays above or below the level") {
        // dof 1 decays so slowly that a huge area keeps p above alpha at z = 100.
        CHECK_THROWS_AS(alpha_quantile(0.05, mink(0.0, 0.0, 1e6), 1.0, 1.0), ArgumentError);
        // A vanishing area never reaches alpha anywhere on [0, 100].
        CHECK_THROWS_AS(alpha_quantile(0.05, mink(0.0, 0.0, 1e-12), 20.0, 1.0),
                        ArgumentError);
    }
}

TEST_CASE("power approximation behaves like a detection probability") {
    const Minkowski search = mink(2.0, 0.0, 628.0);
    const Minkowski signal = mink(1.0, 0.0, 30.0);
    SUBCASE("zero effect with signal = search collapses to 1 - exp(-alpha)") {
        for (double alpha : {0.05, 0.1, 0.25}) {
            const double p = power(20, 0.0, search, search, 19.0, 1.0, alpha);
            CHECK(p == doctest::Approx(1.0 - std::exp(-alpha)).epsilon(1e-5));
        }
    }
    SUBCASE("nondecreasing in the effect size") {
        const double base = power(20, 0.0, search, signal, 19.0, 1.0, 0.05);
        double prev = 0.0;
        for (double c = 0.0; c <= 0.8001; c += 0.05) {
            const double p = power(20, c, search, signal, 19.0, 1.0, 0.05);
            CHECK(p >= prev - 1e-12);
            CHECK(p <= 1.0);
            prev = p;
        }
        // The expansion saturates at 1 - exp(-mu0) once the shifted
        // threshold falls below the body of the field distribution, so a
        // strong effect is "detected" relative to the null value, not with
        // probability near one.
        CHECK(prev > 50.0 * base);
        CHECK(prev > 0.35);
        CHECK(prev < 1.0 - std::exp(-1.0) + 1e-9);
    }
    SUBCASE("nondecreasing in the sample size at fixed moderate effect") {
        double prev = 0.0;
        for (Eigen::Index n = 5; n <= 40; ++n) {
            const double p = power(n, 0.5, search, signal, 19.0, 1.0, 0.05);
            CHECK(p >= prev - 1e-12);
            prev = p;
        }
    }
    SUBCASE("negative expansion clamps to zero power") {
        // Signal region with mu0 = 0: just below threshold the z-linear
        // density is negative, so the raw expression would be negative.
        const Minkowski flat = mink(0.0, 0.0, 1.0);
        const double t_star = alpha_quantile(0.05, mink(1.0, 0.0, 100.0), 20.0, 1.0);
        const double c = (t_star + 0.5) / std::sqrt(20.0);
        CHECK(power(20, c, mink(1.0, 0.0, 100.0), flat, 20.0, 1.0, 0.05) == 0.0);
    }
    SUBCASE("invalid arguments") {
        CHECK_THROWS_AS(power(1, 0.5, search, signal, 19.0, 1.0, 0.05), ArgumentError);
        CHECK_THROWS_AS(power(20, -0.5, search, signal, 19.0, 1.0, 0.05), ArgumentError);
        CHECK_THROWS_AS(power(20, 0.5, search, mink(1.0, 0.0, 0.0), 19.0, 1.0, 0.05),
                        ArgumentError);
        CHECK_THROWS_AS(power(20, 0.5, search, signal, 19.0, 1.0, 0.6), ArgumentError);
    }
}
