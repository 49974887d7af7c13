#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "cmclab/errors.hpp"
#include "cmclab/potential.hpp"

namespace cmclab {

using Mat2c = std::array<Cd, 4>;  // row-major 2x2

inline Mat2c mat2_mul(const Mat2c& a, const Mat2c& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

inline double mat2_norm(const Mat2c& a) {
    double s = 0;
    for (auto& x : a) s += std::norm(x);
    return std::sqrt(s);
}

inline Mat2c mat2_identity() { return {Cd(1), Cd(0), Cd(0), Cd(1)}; }

inline double monodromy_defect(const Mat2c& m) {
    Mat2c d = m;
    d[0] -= 1.0;
    d[3] -= 1.0;
    return mat2_norm(d);
}

struct MonodromyOptions {
    double local_tol = 1e-10;
    int min_steps = 256;
    double min_step_fraction = 1e-12;  // of the full turn
};

// Numerically transports the fundamental system of
//     y'' - (f'/f) y' - lambda^-2 E y = 0
// once around the circle |z - z0| = radius and returns the monodromy in the
// balanced basis (y, radius * y'). Both indicial roots are integers, so the
// potential is integrable at z0 iff the monodromy is the identity; a
// logarithmic second solution shows up as a unipotent defect.
//
// The caller fixes a radius small enough that no other singularity of the
// coefficients lies on or inside the circle.
inline Mat2c monodromy_oracle(const Potential& p, Cd z0, Cd lambda, double radius,
                              const MonodromyOptions& opt = {}) {
    SampledMap f(p.f);
    SampledMap fd(p.f.derivative());
    SampledMap e(p.hopf);
    const Cd mu = 1.0 / (lambda * lambda);
    const double rho = radius;

    // state Y (2x2), columns = solutions in the balanced basis
    auto rhs = [&](double t, const Mat2c& y) -> Mat2c {
        Cd z = z0 + std::polar(rho, t);
        Cd dz = Cd(0, 1) * (z - z0);  // dz/dt
        Cd logd = fd(z) / f(z);
        // A = [[0, 1/rho], [rho mu E, f'/f]] acting on (y, rho y')
        Cd a01 = dz / rho;
        Cd a10 = dz * rho * mu * e(z);
        Cd a11 = dz * logd;
        return {a01 * y[2], a01 * y[3], a10 * y[0] + a11 * y[2], a10 * y[1] + a11 * y[3]};
    };

    // Dormand-Prince 5(4)
    static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static const double a21 = 1.0 / 5;
    static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
    static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                        b6 = 11.0 / 84;
    static const double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                        e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                        e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

    auto axpy = [](Mat2c& y, double a, const Mat2c& x) {
        for (int i = 0; i < 4; ++i) y[static_cast<size_t>(i)] += a * x[static_cast<size_t>(i)];
    };

    Mat2c y = mat2_identity();
    const double t_end = 2.0 * M_PI;
    double t = 0.0;
    double h = t_end / opt.min_steps;
    const double h_max = t_end / opt.min_steps;
    const double h_min = t_end * opt.min_step_fraction;

    while (t < t_end * (1.0 - 1e-15)) {
        double hs = std::min(h, t_end - t);
        Mat2c k1 = rhs(t, y);
        Mat2c y2 = y;
        axpy(y2, hs * a21, k1);
        Mat2c k2 = rhs(t + c2 * hs, y2);
        Mat2c y3 = y;
        axpy(y3, hs * a31, k1);
        axpy(y3, hs * a32, k2);
        Mat2c k3 = rhs(t + c3 * hs, y3);
        Mat2c y4 = y;
        axpy(y4, hs * a41, k1);
        axpy(y4, hs * a42, k2);
        axpy(y4, hs * a43, k3);
        Mat2c k4 = rhs(t + c4 * hs, y4);
        Mat2c y5 = y;
        axpy(y5, hs * a51, k1);
        axpy(y5, hs * a52, k2);
        axpy(y5, hs * a53, k3);
        axpy(y5, hs * a54, k4);
        Mat2c k5 = rhs(t + c5 * hs, y5);
        Mat2c y6 = y;
        axpy(y6, hs * a61, k1);
        axpy(y6, hs * a62, k2);
        axpy(y6, hs * a63, k3);
        axpy(y6, hs * a64, k4);
        axpy(y6, hs * a65, k5);
        Mat2c k6 = rhs(t + hs, y6);
        Mat2c ynew = y;
        axpy(ynew, hs * b1, k1);
        axpy(ynew, hs * b3, k3);
        axpy(ynew, hs * b4, k4);
        axpy(ynew, hs * b5, k5);
        axpy(ynew, hs * b6, k6);
        Mat2c k7 = rhs(t + hs, ynew);
        Mat2c err{};
        axpy(err, hs * e1, k1);
        axpy(err, hs * e3, k3);
        axpy(err, hs * e4, k4);
        axpy(err, hs * e5, k5);
        axpy(err, hs * e6, k6);
        axpy(err, hs * e7, k7);
        double scale = std::max(1.0, mat2_norm(y));
        double errn = mat2_norm(err) / scale;
        bool accept = errn <= opt.local_tol;
        if (accept) {
            t += hs;
            y = ynew;
        }
        double factor = errn > 0 ? 0.9 * std::pow(opt.local_tol / errn, 0.2) : 4.0;
        factor = std::min(4.0, std::max(0.1, factor));
        h = hs * factor;
        if (h > h_max) h = h_max;
        if (!accept && h < h_min) throw StepSizeUnderflow();
    }
    return y;
}

}  // namespace cmclab
