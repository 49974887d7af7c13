#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "cmclab/polynomial.hpp"
#include "cmclab/rational.hpp"

namespace cmclab {

// Durand-Kerner on a squarefree polynomial (simple roots only; callers pass
// factors from an exact squarefree decomposition, which is what makes this
// reliable).
inline std::vector<Cd> durand_kerner(const std::vector<Cd>& monic_coeffs) {
    const int deg = static_cast<int>(monic_coeffs.size()) - 1;
    if (deg <= 0) return {};
    double bound = 0.0;
    for (int k = 0; k < deg; ++k) bound = std::max(bound, std::abs(monic_coeffs[static_cast<size_t>(k)]));
    bound = 1.0 + bound;
    auto eval = [&](Cd x) {
        Cd r(0, 0);
        for (int k = deg; k >= 0; --k) r = r * x + monic_coeffs[static_cast<size_t>(k)];
        return r;
    };
    std::vector<Cd> x(static_cast<size_t>(deg));
    Cd seed(0.4, 0.9);
    Cd cur(1.0, 0.0);
    for (auto& xi : x) {
        cur *= seed;
        xi = bound * cur;
    }
    for (int it = 0; it < 600; ++it) {
        double worst = 0.0;
        for (int i = 0; i < deg; ++i) {
            Cd denom(1, 0);
            for (int j = 0; j < deg; ++j)
                if (j != i) denom *= (x[static_cast<size_t>(i)] - x[static_cast<size_t>(j)]);
            Cd step = eval(x[static_cast<size_t>(i)]) / denom;
            x[static_cast<size_t>(i)] -= step;
            worst = std::max(worst, std::abs(step));
        }
        if (worst < 1e-14 * bound) break;
    }
    return x;
}

inline std::vector<Cd> durand_kerner(const QPoly& squarefree) {
    QPoly m = squarefree.monic();
    std::vector<Cd> cd(m.c.size());
    for (size_t i = 0; i < m.c.size(); ++i) cd[i] = to_cd(m.c[i]);
    return durand_kerner(cd);
}

// Try to identify a numeric root as an exact element of Q(i). Verification
// by exact evaluation decides; the continued-fraction snap only proposes.
inline bool snap_root(const QPoly& p, Cd approx, ComplexRational& out) {
    for (std::int64_t max_den : {std::int64_t(64), std::int64_t(100000), std::int64_t(1000000000)}) {
        ComplexRational cand(rationalize(approx.real(), max_den), rationalize(approx.imag(), max_den));
        Cd delta = to_cd(cand) - approx;
        if (std::abs(delta) > 1e-6 * (1.0 + std::abs(approx))) continue;
        if (p.eval(cand).is_zero()) {
            out = cand;
            return true;
        }
    }
    return false;
}

struct RootSet {
    std::vector<std::pair<ComplexRational, int>> exact;  // (root, multiplicity)
    std::vector<std::pair<Cd, int>> numeric;             // roots with no exact form found
};

// All roots of p with multiplicities; exact ones identified where possible.
inline RootSet find_roots(const QPoly& p) {
    RootSet out;
    if (p.degree() <= 0) return out;
    for (auto& [factor, mult] : squarefree_decomposition(p)) {
        QPoly remaining = factor;
        // peel off exact roots so the numeric pass runs on a deflated factor
        bool progress = true;
        while (progress && remaining.degree() > 0) {
            progress = false;
            for (Cd r : durand_kerner(remaining)) {
                ComplexRational ex;
                if (snap_root(remaining, r, ex)) {
                    out.exact.emplace_back(ex, mult);
                    QPoly lin;
                    lin.c = {-ex, ComplexRational(1)};
                    remaining = exact_div(remaining, lin);
                    progress = true;
                    break;
                }
            }
        }
        for (Cd r : durand_kerner(remaining)) out.numeric.emplace_back(r, mult);
    }
    auto lex_cd = [](const Cd& a, const Cd& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    };
    std::sort(out.exact.begin(), out.exact.end(),
              [](const auto& a, const auto& b) { return lex_less(a.first, b.first); });
    std::sort(out.numeric.begin(), out.numeric.end(),
              [&](const auto& a, const auto& b) { return lex_cd(a.first, b.first); });
    return out;
}

}  // namespace cmclab
