#include "mspm/spectral.hpp"
#include "mspm/error.hpp"
#include "mspm/rng.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include <lapacke.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <vector>

namespace mspm {

namespace {

// Deterministic sign convention: the first nonzero entry of each column is
// made positive. "Nonzero" is judged against the column's magnitude so a
// rounding-level entry cannot decide the sign.
void fix_signs(Eigen::MatrixXd& vectors) {
    for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
        const double cutoff = 1e-12 * vectors.col(c).cwiseAbs().maxCoeff();
        for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
            const double entry = vectors(r, c);
            if (std::abs(entry) > cutoff) {
                if (entry < 0.0) vectors.col(c) = -vectors.col(c);
                break;
            }
        }
    }
}

// Clamp tiny negative eigenvalues of the semidefinite pencil to zero;
// strongly negative values indicate a failed solve.
void clamp_negative(Eigen::VectorXd& eigenvalues) {
    if (eigenvalues.size() == 0) return;
    const double scale = std::max(eigenvalues.cwiseAbs().maxCoeff(), 1e-300);
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
        if (eigenvalues[i] < 0.0) {
            if (eigenvalues[i] < -1e-8 * scale) {
                throw SolverError("eigenvalue " + std::to_string(i) +
                                  " is significantly negative (" +
                                  std::to_string(eigenvalues[i]) +
                                  "); the discretization is invalid");
            }
            eigenvalues[i] = 0.0;
        }
    }
}

SpectralBasis solve_dense(const FemMatrices& fem, Eigen::Index k) {
    const Eigen::MatrixXd C = Eigen::MatrixXd(fem.stiffness);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(fem.n(), fem.n());
    A.diagonal() = fem.mass;

    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(C, A);
    if (solver.info() != Eigen::Success) {
        throw SolverError("dense generalized eigensolver failed");
    }
    SpectralBasis basis;
    basis.eigenvalues = solver.eigenvalues().head(k);
    basis.eigenfunctions = solver.eigenvectors().leftCols(k);
    basis.mass = fem.mass;
    clamp_negative(basis.eigenvalues);
    fix_signs(basis.eigenfunctions);
    return basis;
}

// Largest `want` eigenpairs of the symmetric tridiagonal (diag, sub).
// Eigenvalues return ascending. jobz 'N' skips vectors.
struct TridiagTop {
    Eigen::VectorXd values;   // ascending, size want
    Eigen::MatrixXd vectors;  // m x want (empty for jobz 'N')
};

TridiagTop tridiag_top(const std::vector<double>& diag, const std::vector<double>& sub,
                       Eigen::Index m, Eigen::Index want, bool vectors) {
    std::vector<double> d(diag.begin(), diag.begin() + m);
    std::vector<double> e(m > 1 ? sub.begin() : sub.end(),
                          m > 1 ? sub.begin() + (m - 1) : sub.end());
    e.resize(m > 0 ? m : 1, 0.0);

    TridiagTop out;
    out.values.resize(want);
    std::vector<double> w(static_cast<std::size_t>(m));
    std::vector<lapack_int> isuppz(static_cast<std::size_t>(2 * std::max<Eigen::Index>(want, 1)));
    lapack_int found = 0;
    Eigen::MatrixXd z;
    if (vectors) z.resize(m, want);
    const lapack_int il = static_cast<lapack_int>(m - want + 1);
    const lapack_int iu = static_cast<lapack_int>(m);
    const lapack_int info = LAPACKE_dstevr(
        LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'I', static_cast<lapack_int>(m), d.data(),
        e.data(), 0.0, 0.0, il, iu, 0.0, &found, w.data(), vectors ? z.data() : nullptr,
        static_cast<lapack_int>(std::max<Eigen::Index>(m, 1)), isuppz.data());
    if (info != 0 || found != static_cast<lapack_int>(want)) {
        throw SolverError("tridiagonal eigensolver failed (info = " + std::to_string(info) +
                          ", found = " + std::to_string(found) + ")");
    }
    for (Eigen::Index i = 0; i < want; ++i) out.values[i] = w[static_cast<std::size_t>(i)];
    if (vectors) out.vectors = std::move(z);
    return out;
}

// Shift-invert Lanczos in the mass inner product. The operator
// op(x) = (C + sigma*A)^{-1} (A x) is self-adjoint w.r.t. <u,v> = u'Av and
// has eigenvalues theta = 1/(lambda + sigma), so the k smallest lambda of
// the pencil are the k largest theta — the end of the spectrum a Krylov
// method resolves first.
//
// Two safeguards make the iteration trustworthy:
//  - The kernel of C (one constant per connected component) is deflated
//    analytically and the iteration confined to its mass-orthogonal
//    complement. Without this the tiny regularizing shift makes the
//    factorization ill-conditioned enough (kappa ~ lambda_max/sigma) that
//    solve roundoff alone would exceed the residual tolerance.
//  - A single Krylov sequence carries at most one vector per distinct
//    eigenvalue, so exactly degenerate eigenvalues (structured meshes are
//    full of them) would silently lose copies. A Sylvester inertia count
//    proves completeness of every accepted set; on a shortfall a fresh
//    random direction is appended and the iteration continues. Appended
//    directions break the tridiagonal structure, so the full projected
//    matrix H = V' A op V is maintained and Rayleigh-Ritz runs on H
//    (solved as tridiagonal until the first extra direction enters).
class ShiftInvertLanczos {
public:
    ShiftInvertLanczos(const FemMatrices& fem, double sigma, Eigen::Index k, double tol,
                       Eigen::Index max_subspace, std::uint64_t seed)
        : fem_(fem), sigma_(sigma), k_(k), tol_(tol), seed_(seed) {
        const Eigen::Index n = fem.n();
        build_kernel();
        wanted_ = std::max<Eigen::Index>(k_ - kernel_.cols(), 0);
        // Generous cap: every extra copy of a degenerate eigenvalue needs
        // room for an appended direction and its own convergence run.
        subspace_cap_ = max_subspace > 0
                            ? std::min(max_subspace, n)
                            : std::min(n, 2 * std::max<Eigen::Index>(2 * k + 32, k + 200));
        if (subspace_cap_ < k) {
            throw ArgumentError("subspace cap " + std::to_string(subspace_cap_) +
                                " is smaller than the requested k = " + std::to_string(k));
        }
        subspace_cap_ = std::min(subspace_cap_, n - kernel_.cols());
        Eigen::SparseMatrix<double> shifted = fem.stiffness;
        for (Eigen::Index i = 0; i < n; ++i) {
            shifted.coeffRef(i, i) += sigma * fem.mass[i];
        }
        factor_.compute(shifted);
        if (factor_.info() != Eigen::Success) {
            throw SolverError("factorization of the shifted stiffness matrix failed");
        }
    }

    SpectralBasis run() {
        if (wanted_ == 0) return finalize();  // every requested mode is a kernel mode
        krylov_.resize(fem_.n(), subspace_cap_);
        h_ = Eigen::MatrixXd::Zero(subspace_cap_, subspace_cap_);

        if (!append_direction(random_vector(next_stream_++))) {
            throw SolverError("start vector vanishes in the deflated complement");
        }

        for (Eigen::Index q = 0; q < count_; ++q) {
            // Project the image of column q onto every current column; the
            // captured coefficients form column q of H and the leftover
            // tail joins the basis. Later columns are built orthogonal to
            // that tail, so their couplings to column q vanish and H stays
            // exact as the basis grows.
            Eigen::VectorXd w = apply_operator(krylov_.col(q));
            Eigen::VectorXd coeff = Eigen::VectorXd::Zero(count_);
            for (int pass = 0; pass < 2; ++pass) {
                w.noalias() -=
                    kernel_ * (kernel_.transpose() * fem_.mass.cwiseProduct(w)).eval();
                const Eigen::VectorXd h =
                    krylov_.leftCols(count_).transpose() * fem_.mass.cwiseProduct(w);
                w.noalias() -= krylov_.leftCols(count_) * h;
                coeff += h;
            }
            h_.col(q).head(count_) = coeff;

            const double beta = a_norm(w);
            const double breakdown = 1e-12 * std::max(1.0, coeff.cwiseAbs().maxCoeff());
            if (beta > breakdown && count_ < subspace_cap_) {
                h_(count_, q) = beta;
                krylov_.col(count_) = w / beta;
                ++count_;
            }

            const Eigen::Index m = q + 1;  // processed prefix = Ritz space
            bool deficient = false;
            if (m >= wanted_ && ((m - wanted_) % 8 == 0 || m == count_)) {
                const Converge state = check_converged(m);
                if (state == Converge::Done) return finalize();
                deficient = (state == Converge::Deficient);
                last_deficient_ = deficient;
            }
            const bool stalled = (m == count_);  // tail vanished, queue empty
            if ((deficient || stalled) && count_ < subspace_cap_ && restarts_ < 8) {
                // Missing duplicate copies, or an invariant subspace was
                // exhausted: continue from a fresh random direction.
                ++restarts_;
                extra_directions_ = true;
                append_direction(random_vector(next_stream_++));
            }
        }

        std::string detail =
            "shift-invert Lanczos did not converge within " + std::to_string(count_) +
            " iterations; worst relative residual " + std::to_string(worst_residual_) +
            " vs tolerance " + std::to_string(tol_);
        if (last_deficient_) {
            detail += "; copies of a degenerate eigenvalue remain unresolved";
        }
        throw SolverError(detail);
    }

private:
    // Connected components recovered from the stiffness sparsity pattern
    // (every mesh edge is a structural entry, even when its cotan weight
    // rounds to zero). Column c of kernel_ is the mass-normalized
    // indicator of component c: the exact eigenvectors of eigenvalue 0.
    void build_kernel() {
        const Eigen::Index n = fem_.n();
        std::vector<std::int32_t> component(static_cast<std::size_t>(n), -1);
        std::int32_t count = 0;
        std::vector<Eigen::Index> stack;
        for (Eigen::Index start = 0; start < n; ++start) {
            if (component[static_cast<std::size_t>(start)] >= 0) continue;
            component[static_cast<std::size_t>(start)] = count;
            stack.push_back(start);
            while (!stack.empty()) {
                const Eigen::Index v = stack.back();
                stack.pop_back();
                for (Eigen::SparseMatrix<double>::InnerIterator it(fem_.stiffness, v); it;
                     ++it) {
                    const auto u = static_cast<std::size_t>(it.row());
                    if (component[u] < 0) {
                        component[u] = count;
                        stack.push_back(it.row());
                    }
                }
            }
            ++count;
        }
        kernel_ = Eigen::MatrixXd::Zero(n, count);
        for (Eigen::Index v = 0; v < n; ++v) {
            kernel_(v, component[static_cast<std::size_t>(v)]) = 1.0;
        }
        for (Eigen::Index c = 0; c < count; ++c) {
            kernel_.col(c) /= std::sqrt(a_dot(kernel_.col(c), kernel_.col(c)));
        }
    }

    Eigen::VectorXd apply_operator(const Eigen::VectorXd& x) const {
        const Eigen::VectorXd ax = fem_.mass.cwiseProduct(x);
        Eigen::VectorXd y = factor_.solve(ax);
        if (factor_.info() != Eigen::Success) {
            throw SolverError("triangular solve failed in the Lanczos iteration");
        }
        return y;
    }

    double a_dot(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
        return u.dot(fem_.mass.cwiseProduct(v));
    }
    double a_norm(const Eigen::VectorXd& u) const { return std::sqrt(a_dot(u, u)); }

    // Orthonormalize against the kernel and all current columns, then
    // store; returns false when nothing of the direction survives.
    bool append_direction(Eigen::VectorXd v) {
        for (int pass = 0; pass < 2; ++pass) {
            v.noalias() -= kernel_ * (kernel_.transpose() * fem_.mass.cwiseProduct(v)).eval();
            v.noalias() -=
                krylov_.leftCols(count_) *
                (krylov_.leftCols(count_).transpose() * fem_.mass.cwiseProduct(v)).eval();
        }
        const double norm = a_norm(v);
        if (norm <= 1e-12) return false;
        krylov_.col(count_) = v / norm;
        ++count_;
        return true;
    }

    Eigen::VectorXd random_vector(std::uint64_t stream) const {
        GaussianSampler sampler(mix_seed(seed_, stream));
        Eigen::VectorXd v(fem_.n());
        for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = sampler.next();
        return v;
    }

    // Top `want` eigenpairs of the leading m x m block of H, ascending:
    // solved as a tridiagonal matrix while the basis is one pure Krylov
    // chain, as a dense symmetric matrix afterwards.
    TridiagTop projected_top(Eigen::Index m, Eigen::Index want, bool vectors) const {
        if (!extra_directions_) {
            std::vector<double> diag(static_cast<std::size_t>(m));
            std::vector<double> sub(static_cast<std::size_t>(m > 1 ? m - 1 : 0));
            for (Eigen::Index i = 0; i < m; ++i) diag[static_cast<std::size_t>(i)] = h_(i, i);
            for (Eigen::Index i = 0; i + 1 < m; ++i) {
                sub[static_cast<std::size_t>(i)] = h_(i + 1, i);
            }
            return tridiag_top(diag, sub, m, want, vectors);
        }
        Eigen::MatrixXd block =
            0.5 * (h_.topLeftCorner(m, m) + h_.topLeftCorner(m, m).transpose());
        TridiagTop out;
        out.values.resize(want);
        std::vector<double> w(static_cast<std::size_t>(m));
        std::vector<lapack_int> isuppz(
            static_cast<std::size_t>(2 * std::max<Eigen::Index>(want, 1)));
        lapack_int found = 0;
        Eigen::MatrixXd z;
        if (vectors) z.resize(m, want);
        const lapack_int info = LAPACKE_dsyevr(
            LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'I', 'L', static_cast<lapack_int>(m),
            block.data(), static_cast<lapack_int>(m), 0.0, 0.0,
            static_cast<lapack_int>(m - want + 1), static_cast<lapack_int>(m), 0.0, &found,
            w.data(), vectors ? z.data() : nullptr, static_cast<lapack_int>(std::max<Eigen::Index>(m, 1)),
            isuppz.data());
        if (info != 0 || found != static_cast<lapack_int>(want)) {
            throw SolverError("projected eigensolver failed (info = " + std::to_string(info) +
                              ", found = " + std::to_string(found) + ")");
        }
        for (Eigen::Index i = 0; i < want; ++i) out.values[i] = w[static_cast<std::size_t>(i)];
        if (vectors) out.vectors = std::move(z);
        return out;
    }

    enum class Converge { NotYet, Deficient, Done };

    // Sylvester inertia: the number of pencil eigenvalues strictly below
    // mu equals the count of negative entries in D from an LDLT of
    // C - mu*A. Returns -1 when the factorization does not complete.
    Eigen::Index inertia_below(double mu) const {
        Eigen::SparseMatrix<double> shifted = fem_.stiffness;
        for (Eigen::Index i = 0; i < fem_.n(); ++i) {
            shifted.coeffRef(i, i) -= mu * fem_.mass[i];
        }
        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(shifted);
        if (ldlt.info() != Eigen::Success) return -1;
        Eigen::Index negatives = 0;
        const auto& d = ldlt.vectorD();
        for (Eigen::Index i = 0; i < d.size(); ++i) {
            if (d[i] < 0.0) ++negatives;
        }
        return negatives;
    }

    // Count verification for the accepted pairs: if the inertia slice just
    // below the largest accepted eigenvalue holds more true eigenvalues
    // than accepted ones, a duplicate of a clustered eigenvalue has not
    // entered the subspace yet.
    bool complete(const Eigen::VectorXd& lambda) const {
        const double top = lambda[wanted_ - 1];
        for (const double fraction : {1e-6, 3e-6, 1e-5, 3e-5, 1e-4}) {
            const double mu = top * (1.0 - fraction);
            double clearance = 1e300;
            for (Eigen::Index i = 0; i < wanted_; ++i) {
                clearance = std::min(clearance, std::abs(lambda[i] - mu));
            }
            if (clearance < 1e-8 * top) continue;  // slice too close to a value
            const Eigen::Index below = inertia_below(mu);
            if (below < 0) continue;  // indefinite factorization failed; next slice
            Eigen::Index accepted = kernel_.cols();  // zero modes all lie below mu
            for (Eigen::Index i = 0; i < wanted_; ++i) {
                if (lambda[i] < mu) ++accepted;
            }
            if (below > accepted) return false;
            if (below < accepted) {
                throw SolverError("eigensolver accepted more eigenvalues below " +
                                  std::to_string(mu) + " than the pencil holds");
            }
            return true;
        }
        return true;  // no usable slice; accept the residual-checked pairs
    }

    // Convergence test over the processed prefix of size m. The residual
    // bound of a Ritz pair is the norm of its couplings into the
    // appended-but-unprocessed columns (rows m..count_-1 of H) — for a
    // pure chain exactly the classic |beta * y_last|.
    Converge check_converged(Eigen::Index m) {
        const TridiagTop values = projected_top(m, wanted_, false);
        for (Eigen::Index i = 0; i < wanted_; ++i) {
            if (values.values[i] <= 0.0) return Converge::NotYet;  // not yet resolved
        }

        const TridiagTop pairs = projected_top(m, wanted_, true);
        for (Eigen::Index i = 0; i < wanted_; ++i) {
            double bound2 = 0.0;
            for (Eigen::Index r = m; r < count_; ++r) {
                const double coupling = h_.row(r).head(m).dot(pairs.vectors.col(i));
                bound2 += coupling * coupling;
            }
            if (std::sqrt(bound2) > prefilter_ * std::max(pairs.values[i], 1e-300)) {
                return Converge::NotYet;
            }
        }

        // Ritz vectors and true residuals on the original pencil.
        // theta ascending corresponds to lambda descending; reverse so the
        // result is ascending in lambda.
        const Eigen::MatrixXd y = pairs.vectors.rowwise().reverse();
        Eigen::MatrixXd ritz = krylov_.leftCols(m) * y;
        Eigen::VectorXd lambda(wanted_);
        for (Eigen::Index i = 0; i < wanted_; ++i) {
            lambda[i] = 1.0 / pairs.values[wanted_ - 1 - i] - sigma_;
        }
        worst_residual_ = 0.0;
        for (Eigen::Index i = 0; i < wanted_; ++i) {
            const Eigen::VectorXd cx = fem_.stiffness * ritz.col(i);
            const Eigen::VectorXd ax = fem_.mass.cwiseProduct(ritz.col(i));
            const double rel = (cx - lambda[i] * ax).norm() / std::max(ax.norm(), 1e-300);
            worst_residual_ = std::max(worst_residual_, rel);
        }
        if (worst_residual_ > tol_) {
            // The cheap bound let an unconverged pair through; demand more
            // of it before paying for Ritz vectors again.
            prefilter_ = std::max(prefilter_ * 0.1, 1e-16);
            return Converge::NotYet;
        }
        if (!complete(lambda)) return Converge::Deficient;
        result_.eigenvalues = std::move(lambda);
        result_.eigenfunctions = std::move(ritz);
        extracted_ = true;
        return Converge::Done;
    }

    // Kernel modes (eigenvalue exactly zero) first, then the Lanczos pairs
    // sorted ascending.
    SpectralBasis finalize() {
        if (wanted_ > 0 && !extracted_) {
            throw SolverError("internal error: no extracted eigenpairs");
        }
        const Eigen::Index z = k_ - wanted_;
        std::vector<Eigen::Index> order(static_cast<std::size_t>(wanted_));
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
            return result_.eigenvalues[a] < result_.eigenvalues[b];
        });
        SpectralBasis sorted;
        sorted.eigenvalues.resize(k_);
        sorted.eigenfunctions.resize(fem_.n(), k_);
        sorted.eigenvalues.head(z).setZero();
        sorted.eigenfunctions.leftCols(z) = kernel_.leftCols(z);
        for (Eigen::Index i = 0; i < wanted_; ++i) {
            sorted.eigenvalues[z + i] = result_.eigenvalues[order[static_cast<std::size_t>(i)]];
            sorted.eigenfunctions.col(z + i) =
                result_.eigenfunctions.col(order[static_cast<std::size_t>(i)]);
        }
        sorted.mass = fem_.mass;
        clamp_negative(sorted.eigenvalues);
        fix_signs(sorted.eigenfunctions);
        return sorted;
    }

    const FemMatrices& fem_;
    double sigma_;
    Eigen::Index k_;
    double tol_;
    std::uint64_t seed_;
    Eigen::Index subspace_cap_ = 0;
    Eigen::Index wanted_ = 0;   // pairs the iteration must still find
    Eigen::Index count_ = 0;    // columns currently in the basis
    Eigen::MatrixXd kernel_;    // n x (component count), A-orthonormal
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> factor_;
    Eigen::MatrixXd krylov_;
    Eigen::MatrixXd h_;         // projected operator, exact on the prefix
    std::uint64_t next_stream_ = 0;
    int restarts_ = 0;
    bool extra_directions_ = false;
    SpectralBasis result_;
    bool extracted_ = false;
    bool last_deficient_ = false;
    double worst_residual_ = 0.0;
    double prefilter_ = 0.1;  // cheap-bound gate as a fraction of theta
};

} // namespace

SpectralBasis solve_eigen(const FemMatrices& fem, Eigen::Index k, double tol,
                          const SolveOptions& options) {
    const Eigen::Index n = fem.n();
    if (k < 1 || k > n) {
        throw ArgumentError("requested k = " + std::to_string(k) +
                            " outside [1, n]; n = " + std::to_string(n));
    }
    if (tol <= 0.0) throw ArgumentError("residual tolerance must be positive");
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!(fem.mass[i] > 0.0)) {
            throw ArgumentError("vertex " + std::to_string(i) +
                                " has nonpositive lumped mass (isolated vertex?)");
        }
    }

    if (n <= options.dense_threshold) {
        return solve_dense(fem, k);
    }
    const double sigma = options.shift_scale * fem.mass.sum();
    ShiftInvertLanczos lanczos(fem, sigma, k, tol, options.max_subspace, options.seed);
    return lanczos.run();
}

Eigen::VectorXd fourier_coefficients(const Eigen::VectorXd& values,
                                     const SpectralBasis& basis) {
    if (values.size() != basis.n()) {
        throw ArgumentError("field length " + std::to_string(values.size()) +
                            " does not match basis vertex count " + std::to_string(basis.n()));
    }
    return basis.eigenfunctions.transpose() * basis.mass.cwiseProduct(values);
}

Eigen::VectorXd fourier_coefficients(const ScalarField& field,
                                     const SpectralBasis& basis) {
    return fourier_coefficients(field.values, basis);
}

ReconstructionError reconstruction_error(const Eigen::VectorXd& values,
                                         const SpectralBasis& basis) {
    const Eigen::VectorXd beta = fourier_coefficients(values, basis);
    const Eigen::VectorXd residual = values - basis.eigenfunctions * beta;
    const double residual_norm = std::sqrt(residual.dot(basis.mass.cwiseProduct(residual)));
    const double field_norm = std::sqrt(values.dot(basis.mass.cwiseProduct(values)));
    if (field_norm == 0.0) {
        return ReconstructionError{residual_norm, false};
    }
    return ReconstructionError{residual_norm / field_norm, true};
}

ReconstructionError reconstruction_error(const ScalarField& field,
                                         const SpectralBasis& basis) {
    return reconstruction_error(field.values, basis);
}

Eigen::Index zero_mode_count(const SpectralBasis& basis) {
    if (basis.k() == 0) return 0;
    const double cutoff = 1e-8 * std::max(basis.eigenvalues[basis.k() - 1], 0.0);
    Eigen::Index count = 0;
    for (Eigen::Index i = 0; i < basis.k(); ++i) {
        if (basis.eigenvalues[i] <= cutoff) ++count;
    }
    return count;
}

namespace {

constexpr char kMagic[8] = {'M', 'S', 'P', 'M', 'B', 'A', 'S', '\0'};
constexpr std::uint32_t kFormatVersion = 1;

static_assert(sizeof(double) == 8, "serialization assumes 64-bit IEEE doubles");

template <typename T>
void put_le(std::ostream& out, T value) {
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(value);
    if constexpr (std::endian::native == std::endian::big) {
        std::reverse(bytes.begin(), bytes.end());
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), sizeof(T));
}

template <typename T>
T get_le(std::istream& in) {
    std::array<unsigned char, sizeof(T)> bytes{};
    in.read(reinterpret_cast<char*>(bytes.data()), sizeof(T));
    if constexpr (std::endian::native == std::endian::big) {
        std::reverse(bytes.begin(), bytes.end());
    }
    return std::bit_cast<T>(bytes);
}

void put_doubles(std::ostream& out, const double* data, std::size_t count) {
    if constexpr (std::endian::native == std::endian::little) {
        out.write(reinterpret_cast<const char*>(data),
                  static_cast<std::streamsize>(count * sizeof(double)));
    } else {
        for (std::size_t i = 0; i < count; ++i) put_le(out, data[i]);
    }
}

void get_doubles(std::istream& in, double* data, std::size_t count) {
    if constexpr (std::endian::native == std::endian::little) {
        in.read(reinterpret_cast<char*>(data),
                static_cast<std::streamsize>(count * sizeof(double)));
    } else {
        for (std::size_t i = 0; i < count; ++i) data[i] = get_le<double>(in);
    }
}

} // namespace

void save_basis(const std::filesystem::path& path, const SpectralBasis& basis) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open for writing: " + path.string());
    out.write(kMagic, sizeof(kMagic));
    put_le(out, kFormatVersion);
    put_le(out, static_cast<std::uint64_t>(basis.n()));
    put_le(out, static_cast<std::uint64_t>(basis.k()));
    put_doubles(out, basis.eigenvalues.data(), static_cast<std::size_t>(basis.k()));
    put_doubles(out, basis.eigenfunctions.data(),
                static_cast<std::size_t>(basis.n()) * static_cast<std::size_t>(basis.k()));
    put_doubles(out, basis.mass.data(), static_cast<std::size_t>(basis.n()));
    if (!out) throw ParseError("write failed: " + path.string());
}

SpectralBasis load_basis(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open basis file: " + path.string());
    char magic[8] = {};
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw ParseError("not a spectral basis file: " + path.string());
    }
    const auto version = get_le<std::uint32_t>(in);
    if (version != kFormatVersion) {
        throw ParseError("unsupported basis format version " + std::to_string(version) +
                         " in " + path.string());
    }
    const auto n = get_le<std::uint64_t>(in);
    const auto k = get_le<std::uint64_t>(in);
    if (!in || n == 0 || k == 0 || k > n || n > (1ull << 32)) {
        throw ParseError("corrupt basis header in " + path.string());
    }
    SpectralBasis basis;
    basis.eigenvalues.resize(static_cast<Eigen::Index>(k));
    basis.eigenfunctions.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
    basis.mass.resize(static_cast<Eigen::Index>(n));
    get_doubles(in, basis.eigenvalues.data(), k);
    get_doubles(in, basis.eigenfunctions.data(), n * k);
    get_doubles(in, basis.mass.data(), n);
    if (!in) throw ParseError("basis file truncated: " + path.string());
    char extra = 0;
    if (in.read(&extra, 1); in.gcount() != 0) {
        throw ParseError("trailing bytes after basis payload: " + path.string());
    }
    return basis;
}

} // namespace mspm
