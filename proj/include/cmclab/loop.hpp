#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <ostream>
#include <vector>

#include "cmclab/errors.hpp"
#include "cmclab/rational.hpp"

namespace cmclab {

using Mat2 = Eigen::Matrix2cd;

// 2x2 matrix Laurent polynomial in lambda, truncated to exponents [-N, N].
// Twisted loops have even diagonal and odd off-diagonal lambda-dependence,
// i.e. g(-lambda) = sigma3 g(lambda) sigma3.
struct MatrixLoop {
    int trunc = 0;             // N
    bool twisted = true;
    std::vector<Mat2> coeffs;  // index k + N, k in [-N, N]

    MatrixLoop() = default;
    explicit MatrixLoop(int n, bool tw = true)
        : trunc(n), twisted(tw), coeffs(static_cast<size_t>(2 * n + 1), Mat2::Zero()) {}

    static MatrixLoop identity(int n, bool tw = true) {
        MatrixLoop l(n, tw);
        l.at(0) = Mat2::Identity();
        return l;
    }

    Mat2& at(int k) { return coeffs[static_cast<size_t>(k + trunc)]; }
    const Mat2& at(int k) const { return coeffs[static_cast<size_t>(k + trunc)]; }
    bool has(int k) const { return k >= -trunc && k <= trunc; }

    Mat2 sample(Cd lambda) const {
        Mat2 acc = Mat2::Zero();
        // Horner in lambda over the full band
        for (int k = trunc; k >= -trunc; --k) acc = acc * lambda + at(k);
        Cd lm = std::pow(lambda, -trunc);
        return acc * lm;
    }

    double abs_max() const {
        double m = 0;
        for (auto& c : coeffs) m = std::max(m, c.cwiseAbs().maxCoeff());
        return m;
    }

    // enforce the twisted sparsity pattern by zeroing opposite-parity entries
    void project_twisted() {
        for (int k = -trunc; k <= trunc; ++k) {
            Mat2& m = at(k);
            if ((k % 2 + 2) % 2 == 0) {
                m(0, 1) = 0;
                m(1, 0) = 0;
            } else {
                m(0, 0) = 0;
                m(1, 1) = 0;
            }
        }
    }

    double twist_defect() const {
        double d = 0;
        for (int k = -trunc; k <= trunc; ++k) {
            const Mat2& m = at(k);
            if ((k % 2 + 2) % 2 == 0)
                d = std::max({d, std::abs(m(0, 1)), std::abs(m(1, 0))});
            else
                d = std::max({d, std::abs(m(0, 0)), std::abs(m(1, 1))});
        }
        return d;
    }
};

enum class LoopClass { MinusStar, Plus, Unitary, General };

inline MatrixLoop multiply(const MatrixLoop& a, const MatrixLoop& b) {
    if (a.trunc != b.trunc || a.twisted != b.twisted) throw TruncationMismatch();
    MatrixLoop r(a.trunc, a.twisted);
    for (int i = -a.trunc; i <= a.trunc; ++i) {
        if (a.at(i).isZero(0.0)) continue;
        for (int j = -b.trunc; j <= b.trunc; ++j) {
            int k = i + j;
            if (!r.has(k)) continue;
            r.at(k) += a.at(i) * b.at(j);
        }
    }
    return r;
}

inline Cd det_sample(const MatrixLoop& a, Cd lambda) { return a.sample(lambda).determinant(); }

// Inverse through sampled adjugates: for unimodular loops the inverse is the
// adjugate up to the (numerically ~1) determinant, and a discrete Fourier
// transform projects the samples back onto the coefficient band.
inline MatrixLoop inverse(const MatrixLoop& a, double det_tol = 1e-6) {
    const int n = a.trunc;
    const int samples = 4 * n + 8;
    MatrixLoop r(n, a.twisted);
    std::vector<Mat2> inv_samples(static_cast<size_t>(samples));
    for (int j = 0; j < samples; ++j) {
        Cd lam = std::polar(1.0, 2.0 * M_PI * j / samples);
        Mat2 m = a.sample(lam);
        Cd det = m.determinant();
        if (std::abs(det) < det_tol) throw SingularLoopError();
        Mat2 adj;
        adj << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
        inv_samples[static_cast<size_t>(j)] = adj / det;
    }
    for (int k = -n; k <= n; ++k) {
        Mat2 acc = Mat2::Zero();
        for (int j = 0; j < samples; ++j) {
            Cd lam = std::polar(1.0, -2.0 * M_PI * j * k / samples);
            acc += inv_samples[static_cast<size_t>(j)] * lam;
        }
        r.at(k) = acc / static_cast<double>(samples);
    }
    if (a.twisted) r.project_twisted();
    return r;
}

// H^s norm: (sum_k (1 + k^2)^s |coeff_k|_F^2)^(1/2); the paper's topology
// needs s > 1/2, and s = 1 is the reporting default.
inline double sobolev_norm(const MatrixLoop& a, double s = 1.0) {
    if (!(s > 0.5)) throw Error("sobolev_norm needs s > 1/2");
    double acc = 0;
    for (int k = -a.trunc; k <= a.trunc; ++k)
        acc += std::pow(1.0 + static_cast<double>(k) * k, s) * a.at(k).squaredNorm();
    return std::sqrt(acc);
}

// diagnostics ---------------------------------------------------------------

inline double unitary_defect(const MatrixLoop& a, int samples = 32) {
    double d = 0;
    for (int j = 0; j < samples; ++j) {
        Mat2 m = a.sample(std::polar(1.0, 2.0 * M_PI * j / samples));
        d = std::max(d, (m * m.adjoint() - Mat2::Identity()).cwiseAbs().maxCoeff());
    }
    return d;
}

inline double unimodular_defect(const MatrixLoop& a, int samples = 32) {
    double d = 0;
    for (int j = 0; j < samples; ++j)
        d = std::max(d, std::abs(det_sample(a, std::polar(1.0, 2.0 * M_PI * j / samples)) - Cd(1, 0)));
    return d;
}

inline double sup_distance(const MatrixLoop& a, const MatrixLoop& b, int samples = 32) {
    double d = 0;
    for (int j = 0; j < samples; ++j) {
        Cd lam = std::polar(1.0, 2.0 * M_PI * j / samples);
        d = std::max(d, (a.sample(lam) - b.sample(lam)).cwiseAbs().maxCoeff());
    }
    return d;
}

// mass in the top retained bands, relative to the total; a truncation-quality
// diagnostic (no error bound is claimed at finite N)
inline double tail_mass(const MatrixLoop& a) {
    double total = 0, tail = 0;
    for (int k = -a.trunc; k <= a.trunc; ++k) {
        double m = a.at(k).squaredNorm();
        total += m;
        if (std::abs(k) >= a.trunc - 1) tail += m;
    }
    return total > 0 ? std::sqrt(tail / total) : 0.0;
}

inline bool in_class(const MatrixLoop& a, LoopClass c, double tol = 1e-8) {
    switch (c) {
        case LoopClass::MinusStar: {
            for (int k = 1; k <= a.trunc; ++k)
                if (a.at(k).cwiseAbs().maxCoeff() > tol) return false;
            return (a.at(0) - Mat2::Identity()).cwiseAbs().maxCoeff() <= tol;
        }
        case LoopClass::Plus: {
            for (int k = -a.trunc; k < 0; ++k)
                if (a.at(k).cwiseAbs().maxCoeff() > tol) return false;
            return true;
        }
        case LoopClass::Unitary:
            return unitary_defect(a) <= tol && unimodular_defect(a) <= tol;
        case LoopClass::General:
            return true;
    }
    return true;
}

// Debug dump: one line per exponent with 8 floats (row-major re/im pairs).
// No stability guarantee.
inline void dump_loop(std::ostream& os, const MatrixLoop& a) {
    for (int k = -a.trunc; k <= a.trunc; ++k) {
        const Mat2& m = a.at(k);
        os << k;
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c)
                os << " " << m(r, c).real() << " " << m(r, c).imag();
        os << "\n";
    }
}

}  // namespace cmclab
