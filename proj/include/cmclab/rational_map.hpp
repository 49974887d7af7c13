#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cmclab/errors.hpp"
#include "cmclab/polynomial.hpp"
#include "cmclab/rational.hpp"
#include "cmclab/series.hpp"

namespace cmclab {

// Exact Laurent expansion of a rational map around a base point:
//   r(z0 + w) = sum_{k >= leading_order} coefficients[k - leading_order] * w^k.
// The first coefficient is nonzero unless the map is identically zero.
struct LocalExpansion {
    ComplexRational base_point;
    int leading_order = 0;  // negative = pole
    std::vector<ComplexRational> coefficients;

    // coefficient of w^k, zero-padded outside the stored window
    ComplexRational coeff(int k) const {
        int idx = k - leading_order;
        if (idx < 0 || idx >= static_cast<int>(coefficients.size())) return ComplexRational(0);
        return coefficients[static_cast<size_t>(idx)];
    }
};

// Quotient of two polynomials over Q(i) in normal form:
// gcd(num, den) = 1, den monic, zero map has num = 0, den = 1.
// Normal forms are unique, so equality is coefficient equality.
struct RationalMap {
    QPoly num;
    QPoly den = QPoly::one();

    RationalMap() = default;
    explicit RationalMap(ComplexRational c) : num(QPoly(std::move(c))) {}
    RationalMap(QPoly n, QPoly d) : num(std::move(n)), den(std::move(d)) { normalize(); }

    static RationalMap zero() { return {}; }
    static RationalMap one() { return RationalMap(ComplexRational(1)); }
    static RationalMap variable() { return {QPoly::monomial(ComplexRational(1), 1), QPoly::one()}; }
    static RationalMap constant(ComplexRational c) { return RationalMap(std::move(c)); }

    bool is_zero() const { return num.is_zero(); }
    bool is_constant() const { return num.degree() <= 0 && den.degree() == 0; }

    void normalize() {
        if (den.is_zero()) throw Error("rational map with zero denominator");
        if (num.is_zero()) {
            den = QPoly::one();
            return;
        }
        QPoly g = gcd(num, den);
        if (g.degree() > 0) {
            num = exact_div(num, g);
            den = exact_div(den, g);
        }
        ComplexRational lead_inv = ComplexRational(1) / den.lead();
        num = num * lead_inv;
        den = den * lead_inv;
    }

    RationalMap operator-() const {
        RationalMap r = *this;
        r.num = -r.num;
        return r;
    }

    friend RationalMap operator+(const RationalMap& a, const RationalMap& b) {
        return {a.num * b.den + b.num * a.den, a.den * b.den};
    }
    friend RationalMap operator-(const RationalMap& a, const RationalMap& b) { return a + (-b); }
    friend RationalMap operator*(const RationalMap& a, const RationalMap& b) {
        return {a.num * b.num, a.den * b.den};
    }
    friend RationalMap operator/(const RationalMap& a, const RationalMap& b) {
        if (b.is_zero()) throw Error("rational map division by zero map");
        return {a.num * b.den, a.den * b.num};
    }
    friend bool operator==(const RationalMap& a, const RationalMap& b) {
        return a.num == b.num && a.den == b.den;
    }
    friend bool operator!=(const RationalMap& a, const RationalMap& b) { return !(a == b); }

    // F(1) needed by the generic series/recursion code
    explicit RationalMap(int v) : num(QPoly(ComplexRational(v))) {}

    RationalMap derivative() const {
        return {num.derivative() * den - num * den.derivative(), den * den};
    }

    bool finite_at(const ComplexRational& z0) const { return !den.eval(z0).is_zero(); }

    ComplexRational eval(const ComplexRational& z0) const {
        ComplexRational d = den.eval(z0);
        if (d.is_zero()) {
            if (!num.eval(z0).is_zero()) throw EvalAtPoleError(to_string(z0));
            // removable only if not in normal form; normal form excludes this
            throw EvalAtPoleError(to_string(z0));
        }
        return num.eval(z0) / d;
    }

    Cd eval_at(Cd z) const { return eval_cd(num, z) / eval_cd(den, z); }

    // order of vanishing at z0: k > 0 zero of order k, k < 0 pole, 0 regular
    int order_at(const ComplexRational& z0) const {
        if (is_zero()) throw ZeroMapError();
        int up = root_multiplicity(num, z0);
        if (up > 0) return up;
        return -root_multiplicity(den, z0);
    }

    LocalExpansion local_expansion(const ComplexRational& z0, int terms) const {
        if (terms < 1) throw Error("local_expansion needs at least one term");
        if (is_zero()) throw ZeroMapError();
        QPoly n = num.taylor_shift(z0);
        QPoly d = den.taylor_shift(z0);
        size_t a = 0, b = 0;
        while (n.c[a].is_zero()) ++a;
        while (d.c[b].is_zero()) ++b;
        std::vector<ComplexRational> ns(n.c.begin() + static_cast<long>(a), n.c.end());
        std::vector<ComplexRational> ds(d.c.begin() + static_cast<long>(b), d.c.end());
        LocalExpansion ex;
        ex.base_point = z0;
        ex.leading_order = static_cast<int>(a) - static_cast<int>(b);
        ex.coefficients = series_div(ns, ds, static_cast<size_t>(terms));
        return ex;
    }

    ComplexRational residue_at(const ComplexRational& z0) const {
        if (is_zero()) return ComplexRational(0);
        int ord = order_at(z0);
        if (ord >= 0) return ComplexRational(0);
        LocalExpansion ex = local_expansion(z0, -ord);
        return ex.coeff(-1);
    }
};

// Double-precision snapshot for hot numeric loops (ODE right-hand sides);
// converting cpp_rational coefficients per evaluation would dominate runtime.
struct SampledMap {
    std::vector<Cd> num, den;

    SampledMap() = default;
    explicit SampledMap(const RationalMap& r) {
        num.reserve(r.num.c.size());
        den.reserve(r.den.c.size());
        for (auto& a : r.num.c) num.push_back(to_cd(a));
        for (auto& a : r.den.c) den.push_back(to_cd(a));
    }

    Cd operator()(Cd z) const {
        auto horner = [&](const std::vector<Cd>& c) {
            Cd v(0, 0);
            for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * z + *it;
            return v;
        };
        return horner(num) / horner(den);
    }
};

inline RationalMap pow(const RationalMap& base, int e) {
    if (e < 0) return RationalMap::one() / pow(base, -e);
    RationalMap r = RationalMap::one(), b = base;
    while (e > 0) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

inline QPoly integrate_poly(const QPoly& p) {
    QPoly r;
    if (p.is_zero()) return r;
    r.c.assign(p.c.size() + 1, ComplexRational(0));
    for (size_t i = 0; i < p.c.size(); ++i)
        r.c[i + 1] = p.c[i] / ComplexRational(static_cast<int>(i) + 1);
    r.normalize();
    return r;
}

namespace detail {

// Horowitz-Ostrogradsky: for proper A/D (deg A < deg D, gcd(A,D)=1, D monic)
// find U, W with  A/D = (U/V)' + W/S,  V = gcd(D, D'), S = D/V,
// deg U < deg V, deg W < deg S. The split always exists and is unique;
// W == 0 iff A/D has a rational antiderivative U/V.
struct OstrogradskySplit {
    QPoly u, v, w, s;
};

inline OstrogradskySplit ostrogradsky(const QPoly& a, const QPoly& d) {
    OstrogradskySplit out;
    out.v = gcd(d, d.derivative());
    if (out.v.is_zero()) out.v = QPoly::one();
    out.s = exact_div(d, out.v);
    const int nu = out.v.degree();  // unknowns in U
    const int nw = out.s.degree();  // unknowns in W
    const int n = nu + nw;          // equations: coefficients of degree < deg D
    // T = V' * S / V  (exact);  equation:  U'*S - U*T + W*V = A
    QPoly t = out.v.degree() > 0 ? exact_div(out.v.derivative() * out.s, out.v) : QPoly::zero();
    std::vector<std::vector<ComplexRational>> m(static_cast<size_t>(n),
                                                std::vector<ComplexRational>(static_cast<size_t>(n), ComplexRational(0)));
    std::vector<ComplexRational> rhs(static_cast<size_t>(n), ComplexRational(0));
    for (int r = 0; r < n; ++r) rhs[static_cast<size_t>(r)] = a.coeff(r);
    // columns 0..nu-1: coefficients of U; columns nu..nu+nw-1: coefficients of W
    for (int j = 0; j < nu; ++j) {
        // contribution of U_j x^j:  j x^(j-1) * S - x^j * T
        for (int k = 0; k <= out.s.degree(); ++k) {
            int row = j - 1 + k;
            if (j >= 1 && row < n) m[static_cast<size_t>(row)][static_cast<size_t>(j)] += out.s.coeff(k) * ComplexRational(j);
        }
        for (int k = 0; k <= t.degree(); ++k) {
            int row = j + k;
            if (row < n) m[static_cast<size_t>(row)][static_cast<size_t>(j)] -= t.coeff(k);
        }
    }
    for (int j = 0; j < nw; ++j) {
        for (int k = 0; k <= out.v.degree(); ++k) {
            int row = j + k;
            if (row < n) m[static_cast<size_t>(row)][static_cast<size_t>(nu + j)] += out.v.coeff(k);
        }
    }
    std::vector<ComplexRational> x;
    if (n > 0 && !exact_linear_solve(std::move(m), std::move(rhs), x))
        throw Error("Ostrogradsky system singular (should not happen for reduced input)");
    out.u.c.assign(x.begin(), x.begin() + nu);
    out.u.normalize();
    out.w.c.assign(x.begin() + nu, x.end());
    out.w.normalize();
    return out;
}

}  // namespace detail

// Exact antiderivative R with R' = r and R(base) = 0. Exists as a rational
// map iff r has vanishing residue at every pole; otherwise throws
// LogarithmicObstruction naming one offending pole.
inline RationalMap antiderivative(const RationalMap& r, const ComplexRational& base) {
    auto [quot, rem] = divmod(r.num, r.den);
    RationalMap result(integrate_poly(quot), QPoly::one());
    if (!rem.is_zero()) {
        auto split = detail::ostrogradsky(rem, r.den);
        if (!split.w.is_zero()) {
            // every root of S / gcd(S, W) has a nonzero residue
            QPoly bad = exact_div(split.s, gcd(split.s, split.w));
            if (bad.degree() == 0) bad = split.s;
            Cd witness;
            if (bad.degree() == 1) {
                witness = to_cd(-bad.coeff(0) / bad.coeff(1));
            } else {
                // crude Newton from a generic start; only used for the message
                Cd x(0.37, 0.19);
                for (int it = 0; it < 200; ++it) {
                    Cd f = eval_cd(bad, x), df = eval_cd(bad.derivative(), x);
                    if (std::abs(df) < 1e-300) break;
                    Cd step = f / df;
                    x -= step;
                    if (std::abs(step) < 1e-14) break;
                }
                witness = x;
            }
            throw LogarithmicObstruction(witness);
        }
        result = result + RationalMap(split.u, split.v);
    }
    ComplexRational at_base = result.eval(base);
    return result - RationalMap::constant(at_base);
}

// -- spec-facing free functions --------------------------------------------

inline int order_at(const RationalMap& r, const ComplexRational& z0) { return r.order_at(z0); }
inline ComplexRational residue(const RationalMap& r, const ComplexRational& z0) {
    return r.residue_at(z0);
}
inline LocalExpansion local_expansion(const RationalMap& r, const ComplexRational& z0, int k) {
    return r.local_expansion(z0, k);
}
inline RationalMap derivative(const RationalMap& r) { return r.derivative(); }

}  // namespace cmclab
