#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>

#include "cmclab/iwasawa.hpp"
#include "cmclab/loop.hpp"

namespace cmclab {

using Vec3 = Eigen::Vector3d;

// spinor representation: J(r) = -(i/2) (r1 sigma1 + r2 sigma2 + r3 sigma3)
inline Mat2 jmap(const Vec3& r) {
    Mat2 m;
    const Cd i(0, 1);
    m(0, 0) = -i * r.z() * 0.5;
    m(0, 1) = (-i * r.x() - r.y()) * 0.5;
    m(1, 0) = (-i * r.x() + r.y()) * 0.5;
    m(1, 1) = i * r.z() * 0.5;
    return m;
}

// inverse of jmap on (numerically) traceless anti-Hermitian matrices;
// returns the imaginary contamination as a diagnostic
inline Vec3 jmap_inverse(const Mat2& m, double* imag_defect = nullptr) {
    Cd x = Cd(0, 1) * (m(0, 1) + m(1, 0));
    Cd y = m(1, 0) - m(0, 1);
    Cd z = Cd(0, 2) * m(0, 0);
    if (imag_defect) *imag_defect = std::max({std::abs(x.imag()), std::abs(y.imag()), std::abs(z.imag())});
    return {x.real(), y.real(), z.real()};
}

inline Mat2 sigma3() {
    Mat2 s;
    s << 1, 0, 0, -1;
    return s;
}

struct ImmersionPoint {
    Vec3 position{0, 0, 0};
    Vec3 normal{0, 0, 1};
    double conformal_factor = 0;  // e^{u/2} estimate from |f| and the gplus gauge
    double su2_defect = 0;        // imaginary contamination in the spinor inversion
};

// Sym-Bobenko formula at lambda = e^{i theta}, mean curvature H = -1/2,
// translation constant C = 0:
//     J(Phi) = -(1/2H) (dF/dtheta F^{-1} + (i/2) F sigma3 F^{-1})
//     J(N)   = +(i/2) F sigma3 F^{-1}
// The normal comes from the frame relation J(N) = -(i/2) P sigma3 P^{-1}
// transported through G(lambda); conjugating sigma3 by G flips its sign,
// hence the + here. The theta-derivative is spectral:
// d/dtheta sum c_k e^{ik theta} = sum ik c_k e^{ik theta}. At F = I this
// normalizes Phi(0) = (0,0,-1) with outward normal N(0) = (0,0,-1).
inline ImmersionPoint sym_bobenko(const UnitaryFrame& u, double theta, double abs_f = -1.0) {
    const double h_mean = -0.5;
    const Cd lambda = std::polar(1.0, theta);
    const Cd i(0, 1);

    Mat2 f_val = Mat2::Zero(), f_dot = Mat2::Zero();
    for (int k = -u.F.trunc; k <= u.F.trunc; ++k) {
        Cd lk = std::pow(lambda, k);
        f_val += u.F.at(k) * lk;
        f_dot += u.F.at(k) * (i * static_cast<double>(k) * lk);
    }
    Mat2 f_inv = f_val.inverse();
    Mat2 x = (-1.0 / (2.0 * h_mean)) * (f_dot * f_inv + (i * 0.5) * f_val * sigma3() * f_inv);
    Mat2 nm = (i * 0.5) * f_val * sigma3() * f_inv;

    ImmersionPoint out;
    double d1 = 0, d2 = 0;
    out.position = jmap_inverse(x, &d1);
    out.normal = jmap_inverse(nm, &d2);
    out.su2_defect = std::max(d1, d2);
    if (abs_f >= 0) {
        // w^{-2} f = -(1/2) H e^{u/2} with w = a the positive diagonal gauge,
        // so e^{u/2} = |f| / (a^2 * |H|/2)
        double a = u.gplus.at(0)(0, 0).real();
        out.conformal_factor = abs_f / (a * a * std::abs(h_mean) * 0.5);
    }
    return out;
}

}  // namespace cmclab
