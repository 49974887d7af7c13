#pragma once

#include <algorithm>
#include <cassert>
#include <utility>
#include <vector>

#include "cmclab/rational.hpp"

namespace cmclab {

// Dense univariate polynomial over a field F, coefficients ascending.
// Normal form: no trailing zero coefficients; the zero polynomial has an
// empty coefficient vector and degree() == -1.
template <class F>
struct Polynomial {
    std::vector<F> c;

    Polynomial() = default;
    explicit Polynomial(F c0) {
        c.push_back(std::move(c0));
        normalize();
    }
    explicit Polynomial(std::vector<F> coeffs) : c(std::move(coeffs)) { normalize(); }

    static Polynomial zero() { return {}; }
    static Polynomial one() { return Polynomial(F(1)); }
    // the monomial a * x^k
    static Polynomial monomial(F a, int k) {
        Polynomial p;
        p.c.assign(static_cast<size_t>(k) + 1, F(0));
        p.c.back() = std::move(a);
        p.normalize();
        return p;
    }

    void normalize() {
        while (!c.empty() && c.back().is_zero()) c.pop_back();
    }

    int degree() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }

    const F& coeff(int k) const {
        static const F zero_coeff = F(0);
        if (k < 0 || k >= static_cast<int>(c.size())) return zero_coeff;
        return c[static_cast<size_t>(k)];
    }
    const F& lead() const {
        assert(!c.empty());
        return c.back();
    }

    Polynomial operator-() const {
        Polynomial r = *this;
        for (auto& x : r.c) x = -x;
        return r;
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        Polynomial r;
        r.c.resize(std::max(a.c.size(), b.c.size()), F(0));
        for (size_t i = 0; i < r.c.size(); ++i) {
            F v = (i < a.c.size() ? a.c[i] : F(0));
            if (i < b.c.size()) v += b.c[i];
            r.c[i] = std::move(v);
        }
        r.normalize();
        return r;
    }
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

    Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
    Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }
    Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.is_zero() || b.is_zero()) return {};
        Polynomial r;
        r.c.assign(a.c.size() + b.c.size() - 1, F(0));
        for (size_t i = 0; i < a.c.size(); ++i)
            for (size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
        r.normalize();
        return r;
    }
    friend Polynomial operator*(const Polynomial& a, const F& s) {
        Polynomial r = a;
        for (auto& x : r.c) x *= s;
        r.normalize();
        return r;
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c == b.c; }
    friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a.c == b.c); }

    F eval(const F& x) const {
        F r(0);
        for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * x + *it;
        return r;
    }

    Polynomial derivative() const {
        Polynomial r;
        for (size_t i = 1; i < c.size(); ++i) r.c.push_back(c[i] * F(static_cast<int>(i)));
        r.normalize();
        return r;
    }

    // p(x + a) by in-place Taylor shift.
    Polynomial taylor_shift(const F& a) const {
        Polynomial r = *this;
        int n = r.degree();
        for (int j = 0; j <= n; ++j)
            for (int k = n - 1; k >= j; --k) r.c[static_cast<size_t>(k)] += a * r.c[static_cast<size_t>(k) + 1];
        r.normalize();
        return r;
    }

    Polynomial monic() const {
        assert(!is_zero());
        F inv = F(1) / lead();
        return *this * inv;
    }
};

// multiply by x^k
template <class F>
Polynomial<F> shift_up(const Polynomial<F>& p, int k) {
    if (p.is_zero()) return p;
    Polynomial<F> r;
    r.c.assign(p.c.size() + static_cast<size_t>(k), F(0));
    for (size_t i = 0; i < p.c.size(); ++i) r.c[i + static_cast<size_t>(k)] = p.c[i];
    return r;
}

// constants are the only invertible polynomials; lets truncated power series
// run over polynomial coefficient rings (mu-polynomials)
template <class F>
Polynomial<F> field_inverse(const Polynomial<F>& p) {
    if (p.degree() != 0) throw std::domain_error("non-constant polynomial has no inverse");
    return Polynomial<F>(field_inverse(p.c[0]));
}

template <class F>
Polynomial<F> pow(const Polynomial<F>& base, int e) {
    assert(e >= 0);
    Polynomial<F> r = Polynomial<F>::one(), b = base;
    while (e > 0) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

template <class F>
std::pair<Polynomial<F>, Polynomial<F>> divmod(const Polynomial<F>& a, const Polynomial<F>& b) {
    assert(!b.is_zero());
    Polynomial<F> q, r = a;
    if (r.degree() >= b.degree()) q.c.assign(static_cast<size_t>(r.degree() - b.degree()) + 1, F(0));
    F lb_inv = F(1) / b.lead();
    while (!r.is_zero() && r.degree() >= b.degree()) {
        int d = r.degree() - b.degree();
        F f = r.lead() * lb_inv;
        q.c[static_cast<size_t>(d)] = f;
        for (int i = 0; i <= b.degree(); ++i)
            r.c[static_cast<size_t>(i + d)] -= f * b.c[static_cast<size_t>(i)];
        r.normalize();
    }
    q.normalize();
    return {q, r};
}

// exact division: asserts zero remainder
template <class F>
Polynomial<F> exact_div(const Polynomial<F>& a, const Polynomial<F>& b) {
    auto [q, r] = divmod(a, b);
    assert(r.is_zero());
    return q;
}

// monic gcd over a field; gcd(0, 0) = 0
template <class F>
Polynomial<F> gcd(Polynomial<F> a, Polynomial<F> b) {
    while (!b.is_zero()) {
        auto r = divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    if (a.is_zero()) return a;
    return a.monic();
}

// multiplicity of root x0 (0 if not a root)
template <class F>
int root_multiplicity(Polynomial<F> p, const F& x0) {
    assert(!p.is_zero());
    int m = 0;
    Polynomial<F> lin;
    lin.c = {-x0, F(1)};
    while (true) {
        auto [q, r] = divmod(p, lin);
        if (!r.is_zero()) break;
        ++m;
        p = std::move(q);
        if (p.is_zero()) break;
    }
    return m;
}

// Yun's squarefree decomposition: p = prod factors[i].first^(factors[i].second)
// with pairwise coprime squarefree monic factors (constant leading factor
// is dropped; caller keeps track of p.lead() if it matters).
template <class F>
std::vector<std::pair<Polynomial<F>, int>> squarefree_decomposition(const Polynomial<F>& p_in) {
    std::vector<std::pair<Polynomial<F>, int>> out;
    if (p_in.is_zero() || p_in.degree() == 0) return out;
    Polynomial<F> p = p_in.monic();
    Polynomial<F> d = gcd(p, p.derivative());
    if (d.degree() == 0) {
        out.emplace_back(p, 1);
        return out;
    }
    Polynomial<F> b = exact_div(p, d);
    Polynomial<F> cpoly = exact_div(p.derivative(), d);
    Polynomial<F> e = cpoly - b.derivative();
    int i = 1;
    while (b.degree() > 0) {
        Polynomial<F> a = gcd(b, e);
        if (a.degree() > 0) out.emplace_back(a, i);
        b = exact_div(b, a.degree() > 0 ? a : Polynomial<F>::one());
        e = a.degree() > 0 ? exact_div(e, a) : e;
        e = e - b.derivative();
        ++i;
    }
    return out;
}

// Solves the square system A x = rhs by Gaussian elimination over F.
// Returns false when A is singular.
template <class F>
bool exact_linear_solve(std::vector<std::vector<F>> a, std::vector<F> rhs, std::vector<F>& x) {
    const size_t n = a.size();
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && a[piv][col].is_zero()) ++piv;
        if (piv == n) return false;
        std::swap(a[piv], a[col]);
        std::swap(rhs[piv], rhs[col]);
        F inv = F(1) / a[col][col];
        for (size_t j = col; j < n; ++j) a[col][j] *= inv;
        rhs[col] *= inv;
        for (size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col].is_zero()) continue;
            F f = a[r][col];
            for (size_t j = col; j < n; ++j) a[r][j] -= f * a[col][j];
            rhs[r] -= f * rhs[col];
        }
    }
    x = std::move(rhs);
    return true;
}

using QPoly = Polynomial<ComplexRational>;

inline Cd eval_cd(const QPoly& p, Cd x) {
    Cd r(0.0, 0.0);
    for (auto it = p.c.rbegin(); it != p.c.rend(); ++it) r = r * x + to_cd(*it);
    return r;
}

}  // namespace cmclab
