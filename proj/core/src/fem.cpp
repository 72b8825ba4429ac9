#include "mspm/fem.hpp"
#include "mspm/error.hpp"

#include <Eigen/Geometry>

#include <vector>

namespace mspm {

Eigen::SparseMatrix<double> FemMatrices::mass_matrix() const {
    Eigen::SparseMatrix<double> m(mass.size(), mass.size());
    m.reserve(Eigen::VectorXi::Constant(static_cast<int>(mass.size()), 1));
    for (Eigen::Index i = 0; i < mass.size(); ++i) {
        m.insert(i, i) = mass[i];
    }
    m.makeCompressed();
    return m;
}

FemMatrices assemble_cotan(const TriangleMesh& mesh) {
    const auto n = static_cast<Eigen::Index>(mesh.vertex_count());
    FemMatrices fem;
    fem.mass = Eigen::VectorXd::Zero(n);

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(mesh.face_count() * 12);

    for (std::size_t f = 0; f < mesh.face_count(); ++f) {
        const auto& face = mesh.faces[f];
        const Eigen::Vector3d& p0 = mesh.vertices[face[0]];
        const Eigen::Vector3d& p1 = mesh.vertices[face[1]];
        const Eigen::Vector3d& p2 = mesh.vertices[face[2]];

        const double double_area = (p1 - p0).cross(p2 - p0).norm();
        const double max_edge_sq = std::max({(p1 - p0).squaredNorm(),
                                             (p2 - p1).squaredNorm(),
                                             (p0 - p2).squaredNorm()});
        if (double_area <= 1e-12 * max_edge_sq) {
            throw AssemblyError("face " + std::to_string(f) + " has zero area");
        }
        const double area = 0.5 * double_area;
        for (int c = 0; c < 3; ++c) {
            fem.mass[face[c]] += area / 3.0;
        }

        // Half-cotangent of the angle at each corner weights the opposite
        // edge: cot = dot / |cross|, and |cross| is twice the face area
        // for every corner.
        for (int c = 0; c < 3; ++c) {
            const std::int32_t corner = face[c];
            const std::int32_t a = face[(c + 1) % 3];
            const std::int32_t b = face[(c + 2) % 3];
            const Eigen::Vector3d u = mesh.vertices[a] - mesh.vertices[corner];
            const Eigen::Vector3d v = mesh.vertices[b] - mesh.vertices[corner];
            const double w = 0.5 * u.dot(v) / double_area;
            triplets.emplace_back(a, b, -w);
            triplets.emplace_back(b, a, -w);
            triplets.emplace_back(a, a, w);
            triplets.emplace_back(b, b, w);
        }
    }

    fem.stiffness.resize(n, n);
    fem.stiffness.setFromTriplets(triplets.begin(), triplets.end());
    fem.stiffness.makeCompressed();
    return fem;
}

} // namespace mspm
