#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "cmclab/frobenius.hpp"
#include "cmclab/monodromy.hpp"
#include "cmclab/potential.hpp"
#include "cmclab/roots.hpp"

namespace cmclab {

// Per-point classification: is the potential meromorphically integrable at
// z0, does the CMC map branch there, and do the pole/zero orders admit a
// smooth immersion?
//
// Order conditions: at a pole of f of order n with E vanishing to order m,
// smoothness requires n = 2 or n = r(2m+4) or n = r(2m+4)+2 for some r >= 1;
// at a zero, n = r(2m+4) or n = r(2m+4)-2. A zero of f where E/f stays
// holomorphic forces a branch point instead.
struct SingularityVerdict {
    Cd location{0, 0};
    std::optional<ComplexRational> z0;  // set when the point is exact in Q(i)
    int f_order = 0;                    // signed order of f (k>0 zero, k<0 pole)
    int e_order = 0;                    // zero order m of E at the point
    bool integrable = false;
    bool branch = false;
    bool smooth = false;
    std::optional<int> witness_r;
    bool exact_verdict = false;  // integrability decided by exact obstruction
    std::optional<FrobeniusReport> report;

    int n() const { return f_order < 0 ? -f_order : f_order; }
    SingKind kind() const { return f_order < 0 ? SingKind::Pole : SingKind::Zero; }
};

namespace detail {

// r >= 1 with n == r(2m+4) + delta for delta in {0, +2} (pole) / {0, -2} (zero)
inline std::optional<int> order_condition_witness(int n, int m, bool pole) {
    const int period = 2 * m + 4;
    for (int delta : {0, pole ? 2 : -2}) {
        int rest = n - delta;
        if (rest >= period && rest % period == 0) return rest / period;
    }
    return std::nullopt;
}

inline bool smooth_orders(int n, int m, bool pole, std::optional<int>& witness) {
    witness.reset();
    if (pole && n == 2) return true;
    witness = order_condition_witness(n, m, pole);
    return witness.has_value();
}

// all finite points where the ODE coefficients are singular, as doubles
inline std::vector<Cd> coefficient_singularities(const Potential& p) {
    std::vector<Cd> out;
    auto add_roots = [&out](const QPoly& poly) {
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
    add_roots(p.f.num);
    add_roots(p.f.den);
    add_roots(p.hopf.den);
    return out;
}

inline double isolation_radius(const Potential& p, Cd at, double fallback = 0.5) {
    double best = fallback;
    for (Cd s : coefficient_singularities(p)) {
        double d = std::abs(s - at);
        if (d > 1e-12) best = std::min(best, 0.5 * d);
    }
    if (p.domain == Domain::UnitDisk) best = std::min(best, 0.5 * (1.0 - std::abs(at)));
    return best;
}

}  // namespace detail

// Integrability via the numeric monodromy transport at a few sampled lambda.
// Used standalone as an oracle in tests and as the decision route for
// singular points that have no exact coordinates in Q(i).
inline double monodromy_defect_max(const Potential& p, Cd z0, double radius) {
    static const Cd lambdas[] = {Cd(1, 0), Cd(0, 1), std::polar(1.0, M_PI / 5)};
    double worst = 0.0;
    for (Cd lam : lambdas)
        worst = std::max(worst, monodromy_defect(monodromy_oracle(p, z0, lam, radius)));
    return worst;
}

// Classification at an exact singular (or regular) point of f.
inline SingularityVerdict classify_singularity(const Potential& p, const ComplexRational& z0) {
    SingularityVerdict v;
    v.z0 = z0;
    v.location = to_cd(z0);
    v.f_order = p.f.is_zero() ? 0 : p.f.order_at(z0);
    v.e_order = p.hopf.is_zero() ? 0 : std::max(p.hopf.order_at(z0), 0);
    if (v.f_order == 0) {
        // not a singularity of f: nothing obstructs; umbilic iff e_order > 0
        v.integrable = true;
        v.smooth = true;
        v.exact_verdict = true;
        return v;
    }
    const bool pole = v.f_order < 0;
    v.report = frobenius_obstruction(p, z0);
    v.integrable = v.report->integrable();
    v.exact_verdict = true;
    // a zero of f with E/f holomorphic (m >= n) branches instead of smoothing
    v.branch = !pole && v.e_order >= v.n();
    v.smooth = v.integrable && !v.branch && detail::smooth_orders(v.n(), v.e_order, pole, v.witness_r);
    return v;
}

// Same decision procedure at a numerically located singular point; the orders
// (n, m) come in exactly from the factor refinement, integrability falls back
// to the monodromy transport.
inline SingularityVerdict classify_numeric(const Potential& p, Cd z0, int f_order, int e_order,
                                           double monodromy_tol = 1e-6) {
    SingularityVerdict v;
    v.location = z0;
    v.f_order = f_order;
    v.e_order = e_order;
    const bool pole = f_order < 0;
    double radius = detail::isolation_radius(p, z0);
    v.integrable = monodromy_defect_max(p, z0, radius) < monodromy_tol;
    v.exact_verdict = false;
    v.branch = !pole && e_order >= v.n();
    v.smooth = v.integrable && !v.branch && detail::smooth_orders(v.n(), v.e_order, pole, v.witness_r);
    return v;
}

// Finds every pole and zero of f, splits off the points exact in Q(i), and
// classifies each one. Points are returned sorted by location (re, then im)
// so reports are deterministic.
inline std::vector<SingularityVerdict> classify_all(const Potential& p) {
    std::vector<SingularityVerdict> out;
    if (p.f.is_zero()) return out;

    auto in_domain_exact = [&](const ComplexRational& z) {
        return p.domain == Domain::Plane || z.norm2() < 1;
    };
    auto in_domain_cd = [&](Cd z) {
        return p.domain == Domain::Plane || std::abs(z) < 1.0 - 1e-12;
    };

    auto handle_poly = [&](const QPoly& poly, bool pole) {
        for (auto& [factor, mult] : squarefree_decomposition(poly)) {
            // refine by the zero order of E so each piece carries uniform (n, m)
            std::vector<std::pair<QPoly, int>> pieces;
            QPoly rest = factor;
            if (!p.hopf.is_zero()) {
                for (auto& [ef, em] : squarefree_decomposition(p.hopf.num)) {
                    QPoly g = gcd(rest, ef);
                    if (g.degree() > 0) {
                        pieces.emplace_back(g, em);
                        rest = exact_div(rest, g);
                    }
                }
            }
            if (rest.degree() > 0) pieces.emplace_back(rest, 0);
            for (auto& [piece, m] : pieces) {
                RootSet rs = find_roots(piece);
                for (auto& [root, one] : rs.exact) {
                    (void)one;
                    if (in_domain_exact(root)) out.push_back(classify_singularity(p, root));
                }
                for (auto& [root, one] : rs.numeric) {
                    (void)one;
                    if (in_domain_cd(root)) out.push_back(classify_numeric(p, root, pole ? -mult : mult, m));
                }
            }
        }
    };
    handle_poly(p.f.num, false);
    handle_poly(p.f.den, true);

    std::sort(out.begin(), out.end(), [](const SingularityVerdict& a, const SingularityVerdict& b) {
        if (a.location.real() != b.location.real()) return a.location.real() < b.location.real();
        return a.location.imag() < b.location.imag();
    });
    return out;
}

}  // namespace cmclab
