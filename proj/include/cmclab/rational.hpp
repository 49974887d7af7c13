#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <cstdint>
#include <sstream>
#include <string>

namespace cmclab {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;
using Cd = std::complex<double>;

// Exact element of Q(i). All coefficient arithmetic in the exact layer runs
// over this field; floating point enters only through explicit sampling.
struct ComplexRational {
    Rational re{0};
    Rational im{0};

    ComplexRational() = default;
    ComplexRational(int v) : re(v) {}  // NOLINT: implicit by design, mirrors int literals
    ComplexRational(Rational r) : re(std::move(r)) {}
    ComplexRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }

    ComplexRational conj() const { return {re, -im}; }
    Rational norm2() const { return re * re + im * im; }

    ComplexRational operator-() const { return {-re, -im}; }

    ComplexRational& operator+=(const ComplexRational& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    ComplexRational& operator-=(const ComplexRational& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    ComplexRational& operator*=(const ComplexRational& o) {
        Rational r = re * o.re - im * o.im;
        im = re * o.im + im * o.re;
        re = std::move(r);
        return *this;
    }
    ComplexRational& operator/=(const ComplexRational& o) {
        Rational n2 = o.norm2();
        if (n2 == 0) throw std::domain_error("ComplexRational division by zero");
        Rational r = (re * o.re + im * o.im) / n2;
        im = (im * o.re - re * o.im) / n2;
        re = std::move(r);
        return *this;
    }

    friend ComplexRational operator+(ComplexRational a, const ComplexRational& b) { return a += b; }
    friend ComplexRational operator-(ComplexRational a, const ComplexRational& b) { return a -= b; }
    friend ComplexRational operator*(ComplexRational a, const ComplexRational& b) { return a *= b; }
    friend ComplexRational operator/(ComplexRational a, const ComplexRational& b) { return a /= b; }
    friend bool operator==(const ComplexRational& a, const ComplexRational& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const ComplexRational& a, const ComplexRational& b) { return !(a == b); }
};

inline ComplexRational imaginary_unit() { return {Rational(0), Rational(1)}; }

inline ComplexRational inverse(const ComplexRational& a) {
    return ComplexRational(1) / a;
}

// hook for generic series code; overloaded for richer coefficient rings
inline ComplexRational field_inverse(const ComplexRational& a) { return inverse(a); }

inline Cd to_cd(const ComplexRational& a) {
    return {static_cast<double>(a.re), static_cast<double>(a.im)};
}

// Deterministic total order (lexicographic by re, then im); used only to make
// report and plan output stable, it has no algebraic meaning.
inline bool lex_less(const ComplexRational& a, const ComplexRational& b) {
    if (a.re != b.re) return a.re < b.re;
    return a.im < b.im;
}

inline std::string to_string(const Rational& q) {
    std::ostringstream os;
    os << numerator(q);
    if (denominator(q) != 1) os << "/" << denominator(q);
    return os.str();
}

// Prints "a", "bi" or "a+bi" with exact rational parts; the expression
// parser accepts this format back.
inline std::string to_string(const ComplexRational& v) {
    if (v.im == 0) return to_string(v.re);
    std::string imag = to_string(v.im) + "i";
    if (v.im == 1) imag = "i";
    if (v.im == -1) imag = "-i";
    if (v.re == 0) return imag;
    if (v.im > 0) return to_string(v.re) + "+" + imag;
    return to_string(v.re) + imag;
}

inline ComplexRational pow(ComplexRational base, long e) {
    if (e < 0) return inverse(pow(std::move(base), -e));
    ComplexRational r(1);
    while (e > 0) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

// Nearest rational with denominator <= max_den, via continued-fraction
// convergents. Used to snap numeric roots back onto Q(i) before exact
// verification; the verification, not this, is what decides.
inline Rational rationalize(double x, std::int64_t max_den = 1000000000LL) {
    if (x == 0.0) return Rational(0);
    bool neg = x < 0;
    double v = neg ? -x : x;
    BigInt p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double frac = v;
    for (int iter = 0; iter < 64; ++iter) {
        double fl = std::floor(frac);
        if (fl > 9.2e18) break;
        BigInt a = static_cast<std::int64_t>(fl);
        BigInt p2 = a * p1 + p0, q2 = a * q1 + q0;
        if (q2 > max_den) break;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        double rem = frac - fl;
        if (rem < 1e-15) break;
        frac = 1.0 / rem;
    }
    Rational r(p1, q1 == 0 ? BigInt(1) : q1);
    return neg ? Rational(-r) : r;
}

}  // namespace cmclab
