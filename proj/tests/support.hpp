#pragma once

// shared helpers for the cmclab test binaries

#include <random>
#include <string>

#include "cmclab/loop.hpp"
#include "cmclab/mesh.hpp"
#include "cmclab/parse.hpp"
#include "cmclab/potential.hpp"

namespace testsupport {

using namespace cmclab;

inline std::mt19937& rng() {
    static std::mt19937 r(987654);
    return r;
}

inline Cd rand_c(double scale = 1.0) {
    std::uniform_real_distribution<double> d(-1, 1);
    return scale * Cd(d(rng()), d(rng()));
}

// element of Lambda^-_* with determinant exactly one: product of unipotent
// twisted factors I + c lambda^{-k} sigma_{+-}, odd k
inline MatrixLoop random_minus_star(int n, std::initializer_list<int> ks = {1, 1, 3}) {
    MatrixLoop l = MatrixLoop::identity(n);
    bool upper = true;
    for (int k : ks) {
        MatrixLoop f = MatrixLoop::identity(n);
        Cd c = rand_c(0.5);
        if (upper)
            f.at(-k)(0, 1) = c;
        else
            f.at(-k)(1, 0) = c;
        upper = !upper;
        l = multiply(l, f);
    }
    return l;
}

// least-squares sphere fit: |v - c| = R
struct SphereFit {
    Vec3 center;
    double radius;
    double max_residual;
};

inline SphereFit fit_sphere(const std::vector<MeshVertex>& vs) {
    Eigen::MatrixXd a(static_cast<long>(vs.size()), 4);
    Eigen::VectorXd b(static_cast<long>(vs.size()));
    for (long i = 0; i < a.rows(); ++i) {
        const Vec3& p = vs[static_cast<size_t>(i)].point.position;
        a.row(i) << 2 * p.x(), 2 * p.y(), 2 * p.z(), 1.0;
        b(i) = p.squaredNorm();
    }
    Eigen::Vector4d x = a.colPivHouseholderQr().solve(b);
    SphereFit fit;
    fit.center = x.head<3>();
    fit.radius = std::sqrt(std::max(x(3) + fit.center.squaredNorm(), 0.0));
    fit.max_residual = 0;
    for (const auto& v : vs)
        fit.max_residual =
            std::max(fit.max_residual, std::abs((v.point.position - fit.center).norm() - fit.radius));
    return fit;
}

// cylinder fit: axis from the normals (they span the plane orthogonal to the
// axis), then a circle fit in that plane
struct CylinderFit {
    Vec3 axis;
    double radius;
    double max_residual;
};

inline CylinderFit fit_cylinder(const std::vector<MeshVertex>& vs) {
    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (const auto& v : vs) cov += v.point.normal * v.point.normal.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
    Vec3 axis = eig.eigenvectors().col(0);  // smallest eigenvalue
    Vec3 e1 = axis.unitOrthogonal(), e2 = axis.cross(e1);
    Eigen::MatrixXd a(static_cast<long>(vs.size()), 3);
    Eigen::VectorXd b(static_cast<long>(vs.size()));
    for (long i = 0; i < a.rows(); ++i) {
        const Vec3& p = vs[static_cast<size_t>(i)].point.position;
        double x = p.dot(e1), y = p.dot(e2);
        a.row(i) << 2 * x, 2 * y, 1.0;
        b(i) = x * x + y * y;
    }
    Eigen::Vector3d sol = a.colPivHouseholderQr().solve(b);
    double cx = sol(0), cy = sol(1);
    CylinderFit fit;
    fit.axis = axis;
    fit.radius = std::sqrt(std::max(sol(2) + cx * cx + cy * cy, 0.0));
    fit.max_residual = 0;
    for (const auto& v : vs) {
        const Vec3& p = v.point.position;
        double x = p.dot(e1) - cx, y = p.dot(e2) - cy;
        fit.max_residual = std::max(fit.max_residual, std::abs(std::hypot(x, y) - fit.radius));
    }
    return fit;
}

inline Potential make_potential(const std::string& f, const std::string& e,
                                Domain d = Domain::Plane, bool allow_zero_hopf = false) {
    auto res = validate_potential(parse_rational_map(f), parse_rational_map(e), d, allow_zero_hopf);
    if (!res.ok()) throw std::runtime_error("test potential invalid: " + f + " ; " + e);
    return *res.potential;
}

}  // namespace testsupport
