#include "oracles.hpp"

#include <Eigen/Geometry>
#include <Eigen/SparseCholesky>
#include <unsupported/Eigen/MatrixFunctions>

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>

#include <atomic>
#include <cmath>
#include <random>
#include <stdexcept>
#include <unistd.h>

namespace oracle {

Eigen::VectorXd matrix_exponential_diffusion(const mspm::FemMatrices& fem,
                                             const Eigen::VectorXd& f, double t) {
    const Eigen::MatrixXd stiffness = Eigen::MatrixXd(fem.stiffness);
    const Eigen::MatrixXd generator =
        fem.mass.cwiseInverse().asDiagonal() * stiffness;
    const Eigen::MatrixXd propagator = (-t * generator).exp();
    return propagator * f;
}

Eigen::VectorXd implicit_euler_diffusion(const mspm::FemMatrices& fem,
                                         const Eigen::VectorXd& f, double t,
                                         int steps) {
    const double dt = t / steps;
    Eigen::SparseMatrix<double> system = fem.stiffness * dt;
    for (Eigen::Index i = 0; i < fem.n(); ++i) system.coeffRef(i, i) += fem.mass[i];
    system.makeCompressed();
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(system);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("implicit Euler factorization failed");
    }
    Eigen::VectorXd u = f;
    for (int step = 0; step < steps; ++step) {
        u = solver.solve(fem.mass.cwiseProduct(u).eval());
    }
    return u;
}

double student_t_cdf(double x, double dof) {
    const boost::math::students_t_distribution<double> dist(dof);
    return boost::math::cdf(dist, x);
}

double incomplete_beta_reference(double a, double b, double x) {
    return boost::math::ibeta(a, b, x);
}

mspm::TriangleMesh single_triangle() {
    return mspm::build_mesh({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, {{0, 1, 2}});
}

mspm::TriangleMesh triangle_pair() {
    return mspm::build_mesh({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}},
                            {{0, 1, 2}, {0, 2, 3}});
}

mspm::TriangleMesh tetrahedron(double edge) {
    // Vertices of a regular tetrahedron inscribed in a cube, faces outward.
    const double s = edge / std::sqrt(8.0);
    std::vector<Eigen::Vector3d> vertices = {
        {s, s, s}, {s, -s, -s}, {-s, s, -s}, {-s, -s, s}};
    return mspm::build_mesh(std::move(vertices),
                            {{0, 2, 1}, {0, 1, 3}, {0, 3, 2}, {1, 2, 3}});
}

mspm::TriangleMesh two_tetrahedra() {
    const mspm::TriangleMesh one = tetrahedron();
    std::vector<Eigen::Vector3d> vertices = one.vertices;
    for (const auto& v : one.vertices) {
        vertices.push_back(v + Eigen::Vector3d(5.0, 0.0, 0.0));
    }
    std::vector<std::array<std::int32_t, 3>> faces = one.faces;
    for (const auto& f : one.faces) {
        faces.push_back({f[0] + 4, f[1] + 4, f[2] + 4});
    }
    return mspm::build_mesh(std::move(vertices), std::move(faces));
}

mspm::TriangleMesh grid_patch(int m, double jitter, std::uint64_t seed) {
    if (m < 1) throw std::invalid_argument("grid_patch needs m >= 1");
    std::mt19937_64 engine(seed);
    std::uniform_real_distribution<double> offset(-jitter, jitter);
    std::vector<Eigen::Vector3d> vertices;
    for (int row = 0; row <= m; ++row) {
        for (int col = 0; col <= m; ++col) {
            double x = static_cast<double>(col) / m;
            double y = static_cast<double>(row) / m;
            if (jitter > 0.0 && row > 0 && row < m && col > 0 && col < m) {
                x += offset(engine) / m;
                y += offset(engine) / m;
            }
            vertices.emplace_back(x, y, 0.0);
        }
    }
    std::vector<std::array<std::int32_t, 3>> faces;
    auto at = [m](int row, int col) {
        return static_cast<std::int32_t>(row * (m + 1) + col);
    };
    for (int row = 0; row < m; ++row) {
        for (int col = 0; col < m; ++col) {
            faces.push_back({at(row, col), at(row, col + 1), at(row + 1, col + 1)});
            faces.push_back({at(row, col), at(row + 1, col + 1), at(row + 1, col)});
        }
    }
    return mspm::build_mesh(std::move(vertices), std::move(faces));
}

Eigen::VectorXd random_field(Eigen::Index n, std::uint64_t seed) {
    std::mt19937_64 engine(seed);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    Eigen::VectorXd values(n);
    for (Eigen::Index i = 0; i < n; ++i) values[i] = uniform(engine);
    return values;
}

bool exact_equal(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() &&
           (a.array() == b.array()).all();
}

void random_rigid_motion(std::uint64_t seed, Eigen::Matrix3d& rotation,
                         Eigen::Vector3d& translation) {
    std::mt19937_64 engine(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::Quaterniond q(gauss(engine), gauss(engine), gauss(engine), gauss(engine));
    q.normalize();
    rotation = q.toRotationMatrix();
    translation = Eigen::Vector3d(gauss(engine), gauss(engine), gauss(engine));
}

mspm::TriangleMesh transform_mesh(const mspm::TriangleMesh& mesh,
                                  const Eigen::Matrix3d& rotation,
                                  const Eigen::Vector3d& translation) {
    std::vector<Eigen::Vector3d> vertices;
    vertices.reserve(mesh.vertices.size());
    for (const auto& v : mesh.vertices) vertices.push_back(rotation * v + translation);
    return mspm::build_mesh(std::move(vertices), mesh.faces);
}

TempDir::TempDir() {
    static std::atomic<unsigned> counter{0};
    const auto id = counter.fetch_add(1);
    path_ = std::filesystem::temp_directory_path() /
            ("mspm-test-" + std::to_string(::getpid()) + "-" + std::to_string(id));
    std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
}

} // namespace oracle
