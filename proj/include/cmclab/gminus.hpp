#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "cmclab/errors.hpp"
#include "cmclab/loop.hpp"
#include "cmclab/potential.hpp"
#include "cmclab/roots.hpp"

namespace cmclab {

// A piecewise-linear integration path in the z-plane.
using Path = std::vector<Cd>;

struct HolomorphicFrame {
    Cd z{0, 0};
    MatrixLoop gminus;      // class MinusStar, band [-N, 0]
    double tail_mass = 0.0;  // truncation diagnostic
};

// Singular locations of the connection coefficients f and E/f.
inline std::vector<Cd> potential_singularities(const Potential& p) {
    std::vector<Cd> out;
    auto add = [&out](const QPoly& poly) {
        if (poly.degree() <= 0) return;
        RootSet rs = find_roots(poly);
        for (auto& [r, m] : rs.exact) {
            (void)m;
            out.push_back(to_cd(r));
        }
        for (auto& [r, m] : rs.numeric) {
            (void)m;
            out.push_back(r);
        }
    };
    add(p.f.num);
    add(p.f.den);
    add(p.hopf.den);
    return out;
}

inline double path_clearance(const Path& path, const std::vector<Cd>& points, Cd* worst = nullptr) {
    double best = 1e300;
    for (size_t i = 0; i + 1 < path.size(); ++i) {
        Cd a = path[i], b = path[i + 1];
        Cd ab = b - a;
        double len2 = std::norm(ab);
        for (Cd s : points) {
            double t = len2 > 0 ? std::clamp(((s - a) / ab).real(), 0.0, 1.0) : 0.0;
            // projection parameter onto the segment, computed via the real part
            // of (s-a)/ab which equals <s-a, ab>/|ab|^2
            double d = std::abs(s - (a + t * ab));
            if (d < best) {
                best = d;
                if (worst) *worst = s;
            }
        }
    }
    return best;
}

// Straight segment 0 -> z with a circular detour arc around each singularity
// the segment passes too close to. The arc keeps distance delta and takes the
// shorter way around; for integrable potentials any admissible path yields
// the same frame, so the side does not matter.
inline Path default_path(const Potential& p, Cd z, double delta_floor = 1e-2) {
    std::vector<Cd> sing = potential_singularities(p);
    auto radius_of = [&](Cd s) {
        double delta = delta_floor;
        for (Cd other : sing)
            if (std::abs(other - s) > 1e-12) delta = std::min(delta, std::abs(other - s) / 3.0);
        // never swallow an endpoint of the path
        delta = std::min(delta, 0.9 * std::abs(s));
        delta = std::min(delta, 0.9 * std::abs(s - z));
        return std::max(delta, 1e-6);
    };

    Path path{Cd(0, 0), z};
    for (int round = 0; round < 16; ++round) {
        bool changed = false;
        for (size_t i = 0; i + 1 < path.size() && !changed; ++i) {
            Cd a = path[i], b = path[i + 1];
            Cd ab = b - a;
            double len = std::abs(ab);
            if (len < 1e-14) continue;
            for (Cd s : sing) {
                double delta = radius_of(s);
                double t = std::clamp(((s - a) / ab).real(), 0.0, 1.0);
                double d = std::abs(s - (a + t * ab));
                if (d >= 0.98 * delta) continue;
                if (std::abs(s - a) < delta || std::abs(s - b) < delta) continue;  // already detoured here
                double dt = std::sqrt(std::max(delta * delta - d * d, 0.0)) / len;
                double t_in = std::clamp(t - dt, 0.0, 1.0);
                double t_out = std::clamp(t + dt, 0.0, 1.0);
                Cd pin = a + t_in * ab, pout = a + t_out * ab;
                double a_in = std::arg(pin - s), a_out = std::arg(pout - s);
                double sweep = a_out - a_in;
                while (sweep <= -M_PI) sweep += 2 * M_PI;
                while (sweep > M_PI) sweep -= 2 * M_PI;
                Path next(path.begin(), path.begin() + static_cast<long>(i) + 1);
                const int arcs = 16;
                double r_in = std::abs(pin - s), r_out = std::abs(pout - s);
                next.push_back(pin);
                for (int k = 1; k < arcs; ++k) {
                    double u = static_cast<double>(k) / arcs;
                    double rad = std::max((1 - u) * r_in + u * r_out, delta);
                    next.push_back(s + std::polar(rad, a_in + sweep * u));
                }
                next.push_back(pout);
                next.insert(next.end(), path.begin() + static_cast<long>(i) + 1, path.end());
                path = std::move(next);
                changed = true;
                break;
            }
        }
        if (!changed) break;
    }
    return path;
}

struct IntegrationOptions {
    double local_tol = 1e-12;
    double clearance = 1e-3;  // minimum allowed distance to a singularity
    double tail_warn = 1e-6;
};

// Integrates the triangular hierarchy g_0 = I, g_k' = g_{k-1} Q along the
// path, where xi = lambda^{-1} Q dz and Q = (0 f; E/f 0). The coefficients
// of g_- = sum_k g_k lambda^{-k} therefore fill the band [-N, 0] and the
// twisted parity (diagonal even, off-diagonal odd) holds automatically.
inline HolomorphicFrame integrate_gminus(const Potential& p, Cd z, const Path& path, int trunc,
                                         const IntegrationOptions& opt = {}) {
    Cd worst;
    double clr = path_clearance(path, potential_singularities(p), &worst);
    if (clr < opt.clearance) throw PathTooClose(worst);

    SampledMap f(p.f);
    SampledMap g(p.hopf.is_zero() ? RationalMap::zero() : p.hopf / p.f);
    const bool hopf_zero = p.hopf.is_zero();

    const int n = trunc;
    // state: g_1..g_n as 2x2 blocks (g_0 = I is implicit)
    std::vector<Mat2> state(static_cast<size_t>(n), Mat2::Zero());
    auto rhs = [&](Cd zz, Cd dz, const std::vector<Mat2>& y, std::vector<Mat2>& out) {
        Mat2 q = Mat2::Zero();
        q(0, 1) = f(zz);
        q(1, 0) = hopf_zero ? Cd(0, 0) : g(zz);
        q *= dz;
        out[0] = q;  // g_0 = I
        for (int k = 1; k < n; ++k) out[static_cast<size_t>(k)] = y[static_cast<size_t>(k - 1)] * q;
    };

    // RK4 with fixed substeps per segment, refined by doubling until two
    // successive refinements agree. The hierarchy is linear and smooth along
    // admissible paths, so this converges fast and stays simple.
    auto integrate_segment = [&](std::vector<Mat2>& y, Cd a, Cd b) {
        double len = std::abs(b - a);
        int steps = std::max(8, static_cast<int>(len * 64));
        std::vector<Mat2> best;
        for (int attempt = 0; attempt < 7; ++attempt) {
            std::vector<Mat2> cur = y;
            Cd dz = (b - a) / static_cast<double>(steps);
            std::vector<Mat2> k1(static_cast<size_t>(n)), k2(static_cast<size_t>(n)),
                k3(static_cast<size_t>(n)), k4(static_cast<size_t>(n)), tmp(static_cast<size_t>(n));
            for (int sidx = 0; sidx < steps; ++sidx) {
                Cd z0 = a + (b - a) * (static_cast<double>(sidx) / steps);
                Cd zm = a + (b - a) * ((sidx + 0.5) / steps);
                Cd z1 = a + (b - a) * ((sidx + 1.0) / steps);
                rhs(z0, dz, cur, k1);
                for (int k = 0; k < n; ++k) tmp[static_cast<size_t>(k)] = cur[static_cast<size_t>(k)] + 0.5 * k1[static_cast<size_t>(k)];
                rhs(zm, dz, tmp, k2);
                for (int k = 0; k < n; ++k) tmp[static_cast<size_t>(k)] = cur[static_cast<size_t>(k)] + 0.5 * k2[static_cast<size_t>(k)];
                rhs(zm, dz, tmp, k3);
                for (int k = 0; k < n; ++k) tmp[static_cast<size_t>(k)] = cur[static_cast<size_t>(k)] + k3[static_cast<size_t>(k)];
                rhs(z1, dz, tmp, k4);
                for (int k = 0; k < n; ++k)
                    cur[static_cast<size_t>(k)] +=
                        (k1[static_cast<size_t>(k)] + 2.0 * k2[static_cast<size_t>(k)] +
                         2.0 * k3[static_cast<size_t>(k)] + k4[static_cast<size_t>(k)]) /
                        6.0;
            }
            if (!best.empty()) {
                double diff = 0, scale = 1.0;
                for (int k = 0; k < n; ++k) {
                    diff = std::max(diff, (cur[static_cast<size_t>(k)] - best[static_cast<size_t>(k)]).cwiseAbs().maxCoeff());
                    scale = std::max(scale, cur[static_cast<size_t>(k)].cwiseAbs().maxCoeff());
                }
                if (diff <= opt.local_tol * scale * 100) {
                    y = cur;
                    return;
                }
            }
            best = cur;
            steps *= 2;
        }
        y = best;
    };

    for (size_t i = 0; i + 1 < path.size(); ++i) integrate_segment(state, path[i], path[i + 1]);

    HolomorphicFrame frame;
    frame.z = z;
    frame.gminus = MatrixLoop(n, true);
    frame.gminus.at(0) = Mat2::Identity();
    for (int k = 1; k <= n; ++k) frame.gminus.at(-k) = state[static_cast<size_t>(k - 1)];
    frame.gminus.project_twisted();
    frame.tail_mass = tail_mass(frame.gminus);
    return frame;
}

inline HolomorphicFrame integrate_gminus(const Potential& p, Cd z, int trunc,
                                         double path_delta = 1e-2) {
    IntegrationOptions opt;
    opt.clearance = std::min(opt.clearance, 0.5 * path_delta);
    return integrate_gminus(p, z, default_path(p, z, path_delta), trunc, opt);
}

// Sup-norm difference of the frames transported along two different paths to
// the same endpoint; stays at integration-error level iff no non-integrable
// singularity separates the paths.
inline double check_path_independence(const Potential& p, Cd z, const Path& path1,
                                      const Path& path2, int trunc) {
    HolomorphicFrame a = integrate_gminus(p, z, path1, trunc);
    HolomorphicFrame b = integrate_gminus(p, z, path2, trunc);
    return sup_distance(a.gminus, b.gminus);
}

}  // namespace cmclab
