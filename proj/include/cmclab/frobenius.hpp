#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "cmclab/errors.hpp"
#include "cmclab/polynomial.hpp"
#include "cmclab/potential.hpp"
#include "cmclab/series.hpp"

namespace cmclab {

// Everything here analyses the scalar equation satisfied by the right-column
// entries of g_-:
//
//     y'' - (f'/f) y' - lambda^-2 E y = 0                               (*)
//
// around a pole or zero z0 of f of (even) order n. With w = z - z0 the
// coefficient data enters through
//     -w f'(w)/f(w) = sum_j q_j w^j      (q_0 = n at a pole, -n at a zero)
//     E(w)          = sum_k E_k w^k
// and a solution ansatz y = w^r sum_k a_k w^k obeys, with
// phi(s) = s(s-1) + q_0 s,
//
//     phi(k+r) a_k = - sum_{s<k} (s+r) q_{k-s} a_s
//                    + mu * sum_{s=2..k} E_{s-2} a_{k-s},     mu = lambda^-2.
//
// All coefficients are exact polynomials in mu over Q(i). phi(k+r2) vanishes
// exactly at the resonance k = r1-r2; the recursion's right-hand side there
// is the obstruction whose exact vanishing is equivalent to meromorphic
// integrability of the potential at z0.

enum class SingKind { Pole, Zero };

using MuPolynomial = Polynomial<ComplexRational>;

// roots of the indicial equation r(r-1) +- nr = 0, larger root first
inline std::pair<int, int> indicial_roots(SingKind kind, int n) {
    if (n < 2 || n % 2 != 0) throw OddOrderError(n);
    if (kind == SingKind::Pole) return {0, -n + 1};
    return {n + 1, 0};
}

namespace frob {

inline long phi(SingKind kind, int n, long m) {
    long q0 = (kind == SingKind::Pole) ? n : -n;
    return m * (m - 1) + q0 * m;
}

// recursion right-hand side at index k for exponent r
template <class F>
Polynomial<F> recursion_rhs(int r, const std::vector<F>& q, const std::vector<F>& e,
                            const std::vector<Polynomial<F>>& a, int k) {
    Polynomial<F> acc;
    for (int s = 0; s < k; ++s) {
        int j = k - s;
        F qj = j < static_cast<int>(q.size()) ? q[static_cast<size_t>(j)] : F(0);
        if (qj.is_zero()) continue;
        acc = acc - a[static_cast<size_t>(s)] * (qj * F(s + r));
    }
    Polynomial<F> mu_part;
    for (int s = 2; s <= k; ++s) {
        F ec = (s - 2) < static_cast<int>(e.size()) ? e[static_cast<size_t>(s - 2)] : F(0);
        if (ec.is_zero()) continue;
        mu_part = mu_part + a[static_cast<size_t>(k - s)] * ec;
    }
    return acc + shift_up(mu_part, 1);
}

// Frobenius coefficients a_0..a_{count-1} for exponent r. At the resonance
// k = r1-r2 (hit only from the lower root) the free coefficient is fixed to
// 0; any other choice changes y2 by a multiple of y1.
template <class F>
std::vector<Polynomial<F>> series(SingKind kind, int n, int r, const std::vector<F>& q,
                                  const std::vector<F>& e, int count) {
    std::vector<Polynomial<F>> a;
    a.reserve(static_cast<size_t>(count));
    a.push_back(Polynomial<F>::one());
    for (int k = 1; k < count; ++k) {
        long ph = phi(kind, n, k + r);
        Polynomial<F> rhs = recursion_rhs<F>(r, q, e, a, k);
        if (ph == 0)
            a.push_back(Polynomial<F>::zero());
        else
            a.push_back(rhs * field_inverse(F(static_cast<int>(ph))));
    }
    return a;
}

// expansion data (q_j, E_k) of a potential at an exact singular point
inline void expansions_at(const Potential& p, const ComplexRational& z0, int terms,
                          std::vector<ComplexRational>& q, std::vector<ComplexRational>& e) {
    RationalMap w{QPoly{std::vector<ComplexRational>{-z0, ComplexRational(1)}}, QPoly::one()};
    RationalMap qmap = -(w * p.f.derivative()) / p.f;
    LocalExpansion qe = qmap.local_expansion(z0, terms);
    q.assign(static_cast<size_t>(terms), ComplexRational(0));
    for (int k = 0; k < terms; ++k) q[static_cast<size_t>(k)] = qe.coeff(k);

    e.assign(static_cast<size_t>(std::max(terms - 2, 0)), ComplexRational(0));
    if (!p.hopf.is_zero()) {
        if (!p.hopf.finite_at(z0)) throw Error("E not holomorphic at the singular point");
        LocalExpansion ee = p.hopf.local_expansion(z0, terms);
        for (int k = 0; k + 2 < terms; ++k) e[static_cast<size_t>(k)] = ee.coeff(k);
    }
}

}  // namespace frob

struct FrobeniusReport {
    ComplexRational z0;
    SingKind kind = SingKind::Pole;
    int n = 0;  // pole/zero order of f (positive)
    int r1 = 0, r2 = 0;
    std::vector<ComplexRational> q;  // q_j
    std::vector<ComplexRational> e;  // E_k
    std::vector<MuPolynomial> top_series;                 // y1 = w^r1 sum a_i w^i
    std::optional<std::vector<MuPolynomial>> low_series;  // y2 = w^r2 sum a~_k w^k, when integrable
    MuPolynomial obstruction;                             // == 0  iff  integrable at z0

    bool integrable() const { return obstruction.is_zero(); }
};

// Runs the recursion at the lower indicial root up to the resonance and reads
// off the obstruction; the y1 series rides along for downstream consumers.
inline FrobeniusReport frobenius_obstruction(const Potential& p, const ComplexRational& z0) {
    FrobeniusReport rep;
    rep.z0 = z0;
    int ord = p.f.order_at(z0);
    if (ord == 0) throw NotSingularError();
    if (ord % 2 != 0) throw OddOrderError(ord);
    rep.kind = ord < 0 ? SingKind::Pole : SingKind::Zero;
    rep.n = ord < 0 ? -ord : ord;
    std::tie(rep.r1, rep.r2) = indicial_roots(rep.kind, rep.n);
    const int gap = rep.r1 - rep.r2;

    frob::expansions_at(p, z0, rep.n + gap + 6, rep.q, rep.e);

    rep.top_series =
        frob::series<ComplexRational>(rep.kind, rep.n, rep.r1, rep.q, rep.e, rep.n + 3);
    auto low = frob::series<ComplexRational>(rep.kind, rep.n, rep.r2, rep.q, rep.e, gap);
    rep.obstruction =
        -frob::recursion_rhs<ComplexRational>(rep.r2, rep.q, rep.e, low, gap);
    if (rep.obstruction.is_zero()) rep.low_series = std::move(low);
    return rep;
}

// Exact residue of f / y1^2 at z0 as a polynomial in mu; zero iff integrable.
// Cross-check partner of frobenius_obstruction via an independent route.
inline MuPolynomial residue_test(const Potential& p, const ComplexRational& z0,
                                 const FrobeniusReport* precomputed = nullptr) {
    FrobeniusReport local;
    if (!precomputed) {
        local = frobenius_obstruction(p, z0);
        precomputed = &local;
    }
    const FrobeniusReport& rep = *precomputed;
    const int need = rep.kind == SingKind::Pole ? rep.n : rep.n + 2;  // series terms of 1/y1^2
    if (static_cast<int>(rep.top_series.size()) < need) throw InsufficientTermsError();

    std::vector<MuPolynomial> a(rep.top_series.begin(), rep.top_series.begin() + need);
    std::vector<MuPolynomial> a2 = series_mul(a, a, static_cast<size_t>(need));
    std::vector<MuPolynomial> inv = series_inverse(a2, static_cast<size_t>(need));

    LocalExpansion fe = p.f.local_expansion(z0, need);
    // residue = coefficient of w^{-1} in f * w^{-2 r1} * (sum inv_j w^j)
    MuPolynomial res;
    const int target = 2 * rep.r1 - 1;
    for (int j = 0; j < need; ++j) {
        ComplexRational fj = fe.coeff(target - j);
        if (fj.is_zero()) continue;
        res = res + inv[static_cast<size_t>(j)] * fj;
    }
    return res;
}

// Coefficients a~_0 .. a~_{terms-1} of the second solution y2 = y1 * v with
// v' = f / y1^2, normalized to a~_0 = 1. Verifies that y2 satisfies (*)
// exactly through the computed order before returning.
inline std::vector<MuPolynomial> second_solution(const Potential& p, const FrobeniusReport& rep,
                                                 int terms) {
    if (!rep.integrable()) throw ObstructedError();
    const int gap = rep.r1 - rep.r2;
    const int need = terms + gap + 2;

    std::vector<ComplexRational> q, e;
    frob::expansions_at(p, rep.z0, need + 4, q, e);
    auto a = frob::series<ComplexRational>(rep.kind, rep.n, rep.r1, q, e, need);

    std::vector<MuPolynomial> a2 = series_mul(a, a, static_cast<size_t>(need));
    std::vector<MuPolynomial> inv = series_inverse(a2, static_cast<size_t>(need));
    LocalExpansion fe = p.f.local_expansion(rep.z0, need);

    // v' = f/y1^2 = sum_{t >= tlow} c_t w^t with tlow = r2 - r1 - 1;
    // c_{-1} = 0 because rep is integrable, so v integrates term by term
    const int tlow = rep.r2 - rep.r1 - 1;
    std::vector<MuPolynomial> v(static_cast<size_t>(terms + gap + 1));  // v[idx] ~ w^{tlow+1+idx}
    for (int t = tlow; t - tlow < static_cast<int>(v.size()); ++t) {
        MuPolynomial ct;
        for (int j = 0; j < need; ++j) {
            ComplexRational fj = fe.coeff(t + 2 * rep.r1 - j);
            if (fj.is_zero()) continue;
            ct = ct + inv[static_cast<size_t>(j)] * fj;
        }
        if (t == -1) {
            if (!ct.is_zero()) throw ObstructedError();
            continue;  // leave the w^0 slot at zero (integration constant)
        }
        v[static_cast<size_t>(t - tlow)] = ct * inverse(ComplexRational(t + 1));
    }

    // y2 = y1 * v = w^{r2} sum_k b_k w^k
    std::vector<MuPolynomial> b(static_cast<size_t>(terms));
    for (int k = 0; k < terms; ++k) {
        MuPolynomial acc;
        for (int i = 0; i <= k; ++i) {
            int u = rep.r2 - rep.r1 + k - i;  // exponent of v in this product term
            int vi = u - (tlow + 1);
            if (vi < 0 || vi >= static_cast<int>(v.size())) continue;
            acc = acc + a[static_cast<size_t>(i)] * v[static_cast<size_t>(vi)];
        }
        b[static_cast<size_t>(k)] = acc;
    }
    if (b.empty() || b[0].degree() != 0) throw Error("second solution lost its leading term");
    MuPolynomial lead_inv = field_inverse(b[0]);
    for (auto& bk : b) bk = bk * lead_inv;

    // exact residual check of (*) through the computed order
    for (int k = 0; k < terms; ++k) {
        MuPolynomial t =
            b[static_cast<size_t>(k)] *
            ComplexRational(static_cast<int>(frob::phi(rep.kind, rep.n, k + rep.r2)));
        t = t - frob::recursion_rhs<ComplexRational>(rep.r2, q, e, b, k);
        if (!t.is_zero()) throw Error("second solution fails the equation (internal)");
    }
    return b;
}

// True when both f(z0 + w) and E(z0 + w) are even in w; then the potential is
// integrable at z0 regardless of pole/zero kind.
inline bool symmetry_shortcut(const Potential& p, const ComplexRational& z0) {
    auto even = [&](const RationalMap& r) {
        if (r.is_zero()) return true;
        QPoly np = r.num.taylor_shift(z0);
        QPoly dp = r.den.taylor_shift(z0);
        QPoly nm = np, dm = dp;
        for (size_t i = 1; i < nm.c.size(); i += 2) nm.c[i] = -nm.c[i];
        for (size_t i = 1; i < dm.c.size(); i += 2) dm.c[i] = -dm.c[i];
        nm.normalize();
        dm.normalize();
        return np * dm == nm * dp;
    };
    return even(p.f) && even(p.hopf);
}

// Normalized-coordinates route. For f = w^{-n} (pole) or w^{n} (zero) the
// recursion collapses to a lower-triangular system B a^ = -E with
// alpha_k = -lambda^2 k(k-n+1) (pole) or -lambda^2 k(k-n-1) (zero) on the
// diagonal; the integrability condition becomes E_{n-3} - <E, Q_S E> = 0
// (pole; E_{n-1} for zeros). Returns that value, which must equal
// -mu^-1 * frobenius_obstruction on normalized inputs.
inline MuPolynomial quadratic_form_check(const std::vector<ComplexRational>& e_coeffs,
                                         SingKind kind, int n) {
    if (n < 2 || n % 2 != 0) throw OddOrderError(n);
    const int dim = kind == SingKind::Pole ? n - 3 : n - 1;  // a~_2 .. a~_{dim+1}
    auto ec = [&](int k) {
        return (k >= 0 && k < static_cast<int>(e_coeffs.size())) ? e_coeffs[static_cast<size_t>(k)]
                                                                 : ComplexRational(0);
    };
    std::vector<MuPolynomial> ahat(static_cast<size_t>(std::max(dim, 0)));
    for (int i = 1; i <= dim; ++i) {
        const int k = i + 1;
        MuPolynomial acc{ec(i - 1)};
        for (int j = 1; j <= i - 2; ++j) {
            ComplexRational bij = ec(i - j - 2);
            if (!bij.is_zero()) acc = acc + ahat[static_cast<size_t>(j - 1)] * bij;
        }
        // a^_i = -acc / alpha_k = acc * mu / (k(k-n+-1))
        long denom = kind == SingKind::Pole ? static_cast<long>(k) * (k - n + 1)
                                            : static_cast<long>(k) * (k - n - 1);
        ahat[static_cast<size_t>(i - 1)] =
            shift_up(acc, 1) * inverse(ComplexRational(static_cast<int>(denom)));
    }
    const int top = kind == SingKind::Pole ? n - 3 : n - 1;
    MuPolynomial value{ec(top)};
    for (int t = 1; t <= dim - 1; ++t) {
        ComplexRational et = ec(t - 1);
        if (et.is_zero()) continue;
        value = value + ahat[static_cast<size_t>(dim - t - 1)] * et;
    }
    return value;
}

// wrapper enforcing the normalization precondition on an actual potential
inline MuPolynomial quadratic_form_check(const Potential& p, const ComplexRational& z0) {
    int ord = p.f.order_at(z0);
    if (ord == 0) throw NotSingularError();
    SingKind kind = ord < 0 ? SingKind::Pole : SingKind::Zero;
    int n = ord < 0 ? -ord : ord;
    RationalMap w{QPoly{std::vector<ComplexRational>{-z0, ComplexRational(1)}}, QPoly::one()};
    if (p.f != pow(w, ord)) throw NotNormalizedError();
    LocalExpansion ee = p.hopf.local_expansion(z0, n + 2);
    std::vector<ComplexRational> ecoeffs;
    for (int k = 0; k <= n; ++k) ecoeffs.push_back(ee.coeff(k));
    return quadratic_form_check(ecoeffs, kind, n);
}

}  // namespace cmclab
