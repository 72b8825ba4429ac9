#include "mspm/kernel.hpp"
#include "mspm/error.hpp"

#include <cmath>

namespace mspm {

KernelSpec KernelSpec::heat(double bandwidth) {
    if (!(bandwidth >= 0.0)) {
        throw ArgumentError("heat kernel bandwidth must be nonnegative, got " +
                            std::to_string(bandwidth));
    }
    return KernelSpec(Kind::Heat, bandwidth);
}

KernelSpec KernelSpec::identity() { return KernelSpec(Kind::Identity, 0.0); }

KernelSpec KernelSpec::custom(std::function<double(double)> generator, double bandwidth) {
    if (!generator) throw ArgumentError("custom kernel requires a generator function");
    if (!(bandwidth >= 0.0)) {
        throw ArgumentError("kernel bandwidth must be nonnegative, got " +
                            std::to_string(bandwidth));
    }
    KernelSpec spec(Kind::Custom, bandwidth);
    const double at_zero = generator(0.0);
    if (!std::isfinite(at_zero) || at_zero == 0.0) {
        throw ArgumentError("custom kernel generator must be finite and nonzero at 0");
    }
    if (at_zero != 1.0) {
        log_warning("custom kernel generator has g(0) = " + std::to_string(at_zero) +
                    "; rescaling so g(0) = 1");
        spec.generator_ = [g = std::move(generator), at_zero](double x) {
            return g(x) / at_zero;
        };
    } else {
        spec.generator_ = std::move(generator);
    }
    return spec;
}

KernelSpec KernelSpec::truncated(Eigen::Index k) const {
    if (k < 0) throw ArgumentError("truncation must be nonnegative");
    KernelSpec spec = *this;
    spec.truncation_ = k;
    return spec;
}

Eigen::VectorXd KernelSpec::weights(const Eigen::VectorXd& eigenvalues) const {
    const Eigen::Index k = eigenvalues.size();
    const double scale = k > 0 ? std::max(std::abs(eigenvalues[k - 1]), 1.0) : 1.0;
    for (Eigen::Index j = 0; j < k; ++j) {
        if (j > 0 && eigenvalues[j] < eigenvalues[j - 1]) {
            throw ArgumentError("eigenvalues must be ascending (violated at index " +
                                std::to_string(j) + ")");
        }
        if (eigenvalues[j] < -1e-8 * scale) {
            throw ArgumentError("eigenvalue " + std::to_string(j) +
                                " is significantly negative");
        }
    }
    Eigen::VectorXd tau(k);
    for (Eigen::Index j = 0; j < k; ++j) {
        const double lambda = std::max(eigenvalues[j], 0.0);
        double w = 1.0;
        switch (kind_) {
        case Kind::Heat:
            w = std::exp(-lambda * bandwidth_);
            break;
        case Kind::Identity:
            w = 1.0;
            break;
        case Kind::Custom:
            w = generator_(lambda * bandwidth_);
            if (!std::isfinite(w)) {
                throw ArgumentError("custom kernel generator returned a non-finite weight at "
                                    "lambda*t = " +
                                    std::to_string(lambda * bandwidth_));
            }
            break;
        }
        tau[j] = w;
    }
    return tau;
}

Eigen::VectorXd kernel_weights(const KernelSpec& spec, const Eigen::VectorXd& eigenvalues) {
    return spec.weights(eigenvalues);
}

namespace {

Eigen::Index effective_truncation(const KernelSpec& spec, const SpectralBasis& basis) {
    const Eigen::Index k = spec.truncation() == 0 ? basis.k() : spec.truncation();
    if (k > basis.k()) {
        throw ArgumentError("truncation " + std::to_string(k) + " exceeds basis size " +
                            std::to_string(basis.k()));
    }
    if (k < 1) throw ArgumentError("truncation must be at least 1");
    return k;
}

} // namespace

ScalarField regress(const ScalarField& field, const SpectralBasis& basis,
                    const KernelSpec& spec) {
    if (field.values.size() != basis.n()) {
        throw ArgumentError("field length " + std::to_string(field.values.size()) +
                            " does not match basis vertex count " + std::to_string(basis.n()));
    }
    const Eigen::Index k = effective_truncation(spec, basis);
    const auto psi = basis.eigenfunctions.leftCols(k);
    const Eigen::VectorXd tau = spec.weights(basis.eigenvalues.head(k));
    const Eigen::VectorXd beta = psi.transpose() * basis.mass.cwiseProduct(field.values);
    ScalarField out;
    out.name = field.name;
    out.values.noalias() = psi * tau.cwiseProduct(beta);
    return out;
}

ScalarField diffusion_solve(const ScalarField& initial, const SpectralBasis& basis,
                            double t) {
    if (!(t >= 0.0)) {
        throw ArgumentError("diffusion time must be nonnegative, got " + std::to_string(t));
    }
    return regress(initial, basis, KernelSpec::heat(t));
}

ScalarField wavelet_transform(const ScalarField& field, const SpectralBasis& basis,
                              const std::function<double(double)>& generator, double scale) {
    return regress(field, basis, KernelSpec::custom(generator, scale));
}

Eigen::MatrixXd kernel_matrix(const SpectralBasis& basis, const KernelSpec& spec,
                              Eigen::Index dense_limit) {
    if (basis.n() > dense_limit) {
        throw ArgumentError("kernel matrix would be " + std::to_string(basis.n()) + "x" +
                            std::to_string(basis.n()) + "; limit is " +
                            std::to_string(dense_limit));
    }
    const Eigen::Index k = effective_truncation(spec, basis);
    const auto psi = basis.eigenfunctions.leftCols(k);
    const Eigen::VectorXd tau = spec.weights(basis.eigenvalues.head(k));
    return psi * tau.asDiagonal() * psi.transpose();
}

} // namespace mspm
