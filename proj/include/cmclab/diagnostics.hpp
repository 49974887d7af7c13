#pragma once

#include <array>
#include <cmath>
#include <functional>

#include "cmclab/gminus.hpp"
#include "cmclab/iwasawa.hpp"
#include "cmclab/sym_bobenko.hpp"

namespace cmclab {

// Self-checks of the moving frame at a point, all computed from fresh frames
// on a finite-difference stencil:
//   band_defect     mass of F^{-1}dF outside the lambda^{-1},lambda^0,lambda^1
//                   bands, relative to the total (the frame equation shape)
//   metric_defect   |w^{-2} f| vs (|H|/2) e^{u/2} with e^u = 2 <Phi_z, Phi_zb>
//                   estimated from the immersion stencil
//   reality_defect  Im(e^{-2ib} f) / |f| with a e^{ib} the polar form of the
//                   lambda^0 upper entry of gplus (b == 0 in our gauge, which
//                   makes this meaningful for potentials with real f)
struct FrameChecks {
    double band_defect = 0;
    double metric_defect = 0;
    double reality_defect = 0;
};

namespace detail {

// fourth order central differences of loop-valued samples
inline MatrixLoop fd4(const std::array<MatrixLoop, 4>& pm, double h) {
    // pm = {f(x-2h), f(x-h), f(x+h), f(x+2h)}
    MatrixLoop out(pm[0].trunc, pm[0].twisted);
    for (int k = -out.trunc; k <= out.trunc; ++k)
        out.at(k) = (pm[0].at(k) - 8.0 * pm[1].at(k) + 8.0 * pm[2].at(k) - pm[3].at(k)) / (12.0 * h);
    return out;
}

}  // namespace detail

inline FrameChecks derivative_checks(const Potential& p, Cd z, int trunc, double h = 0.01,
                                     double theta = 0.0) {
    auto frame_at = [&](Cd zz) { return iwasawa(integrate_gminus(p, zz, trunc)); };
    UnitaryFrame center = frame_at(z);
    std::array<MatrixLoop, 4> fx{frame_at(z - 2 * h).F, frame_at(z - h).F, frame_at(z + h).F,
                                 frame_at(z + 2 * h).F};
    std::array<MatrixLoop, 4> fy{frame_at(z - 2 * h * Cd(0, 1)).F, frame_at(z - h * Cd(0, 1)).F,
                                 frame_at(z + h * Cd(0, 1)).F, frame_at(z + 2 * h * Cd(0, 1)).F};
    MatrixLoop dfx = detail::fd4(fx, h);
    MatrixLoop dfy = detail::fd4(fy, h);
    // F_z = (F_x - i F_y)/2, F_zb = (F_x + i F_y)/2
    MatrixLoop fz(dfx.trunc), fzb(dfx.trunc);
    for (int k = -dfx.trunc; k <= dfx.trunc; ++k) {
        fz.at(k) = 0.5 * (dfx.at(k) - Cd(0, 1) * dfy.at(k));
        fzb.at(k) = 0.5 * (dfx.at(k) + Cd(0, 1) * dfy.at(k));
    }
    MatrixLoop finv = inverse(center.F);
    MatrixLoop az = multiply(finv, fz);
    MatrixLoop azb = multiply(finv, fzb);

    FrameChecks out;
    double inband = 0, outband = 0;
    for (const MatrixLoop* m : {&az, &azb}) {
        for (int k = -m->trunc; k <= m->trunc; ++k) {
            double mass = m->at(k).squaredNorm();
            (std::abs(k) <= 1 ? inband : outband) += mass;
        }
    }
    out.band_defect = std::sqrt(outband / std::max(inband + outband, 1e-300));

    // metric consistency: e^u = 2 <Phi_z, Phi_zb> from the immersion stencil
    auto phi_at = [&](Cd zz) { return sym_bobenko(frame_at(zz), theta).position; };
    Vec3 px = (phi_at(z - 2 * h) - 8.0 * phi_at(z - h) + 8.0 * phi_at(z + h) - phi_at(z + 2 * h)) /
              (12.0 * h);
    Vec3 py = (phi_at(z - 2 * h * Cd(0, 1)) - 8.0 * phi_at(z - h * Cd(0, 1)) +
               8.0 * phi_at(z + h * Cd(0, 1)) - phi_at(z + 2 * h * Cd(0, 1))) /
              (12.0 * h);
    // <Phi_z, Phi_zb> = (|Phi_x|^2 + |Phi_y|^2)/4 for the complex-bilinear form
    double e_u = 0.5 * (px.squaredNorm() + py.squaredNorm());
    double a = center.gplus.at(0)(0, 0).real();
    double lhs = std::abs(p.f.eval_at(z)) / (a * a);
    double rhs = 0.25 * std::sqrt(e_u);  // |H|/2 e^{u/2} with H = -1/2
    out.metric_defect = std::abs(lhs - rhs) / std::max(rhs, 1e-300);

    // reality of e^{-2ib} f in the factorization gauge
    Cd g00 = center.gplus.at(0)(0, 0);
    double b = std::arg(g00);
    Cd fval = p.f.eval_at(z);
    out.reality_defect = std::abs((std::exp(Cd(0, -2 * b)) * fval).imag()) /
                         std::max(std::abs(fval), 1e-300);
    return out;
}

// Hopf differential consistency: Q = <Phi_zz, N> (complex bilinear) should be
// proportional to E with a z-independent factor. Returns the maximal relative
// deviation of Q/E from its sample median, over probe points with |E| above
// the umbilic guard.
struct HopfProbe {
    Cd z;
    Cd q;        // finite-difference Hopf coefficient
    Cd e;        // exact E(z)
};

inline HopfProbe hopf_probe(const Potential& p, Cd z, int trunc, double h = 0.01,
                            double theta = 0.0) {
    auto phi_at = [&](Cd zz) { return sym_bobenko(iwasawa(integrate_gminus(p, zz, trunc)), theta); };
    ImmersionPoint c = phi_at(z);
    // fourth order stencils: the 1e-4 proportionality gate needs them
    auto d2 = [&](Cd dir) {
        return (-phi_at(z - 2.0 * h * dir).position + 16.0 * phi_at(z - h * dir).position -
                30.0 * c.position + 16.0 * phi_at(z + h * dir).position -
                phi_at(z + 2.0 * h * dir).position) /
               (12 * h * h);
    };
    Vec3 pxx = d2(Cd(1, 0));
    Vec3 pyy = d2(Cd(0, 1));
    const double w4[4] = {1.0 / 12, -8.0 / 12, 8.0 / 12, -1.0 / 12};
    const double o4[4] = {-2, -1, 1, 2};
    Vec3 pxy = Vec3::Zero();
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            pxy += (w4[a] * w4[b] / (h * h)) *
                   phi_at(z + Cd(o4[a] * h, o4[b] * h)).position;
    // Phi_zz = (Phi_xx - Phi_yy)/4 - i/2 Phi_xy
    HopfProbe out;
    out.z = z;
    Vec3 re = 0.25 * (pxx - pyy);
    Vec3 im = -0.5 * pxy;
    out.q = Cd(re.dot(c.normal), im.dot(c.normal));
    out.e = p.hopf.is_zero() ? Cd(0, 0) : p.hopf.eval_at(z);
    return out;
}

inline double hopf_consistency(const Potential& p, const std::vector<Cd>& probes, int trunc,
                               double h = 0.01) {
    std::vector<Cd> ratios;
    for (Cd z : probes) {
        HopfProbe pr = hopf_probe(p, z, trunc, h);
        if (std::abs(pr.e) < 1e-6) continue;
        ratios.push_back(pr.q / pr.e);
    }
    if (ratios.size() < 2) return 0.0;
    Cd mean(0, 0);
    for (Cd r : ratios) mean += r;
    mean /= static_cast<double>(ratios.size());
    double dev = 0;
    for (Cd r : ratios) dev = std::max(dev, std::abs(r - mean) / std::max(std::abs(mean), 1e-300));
    return dev;
}

}  // namespace cmclab
