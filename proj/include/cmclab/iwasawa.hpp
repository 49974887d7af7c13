#pragma once

#include <Eigen/Dense>

#include <vector>

#include "cmclab/errors.hpp"
#include "cmclab/gminus.hpp"
#include "cmclab/loop.hpp"

namespace cmclab {

struct UnitaryFrame {
    Cd z{0, 0};
    MatrixLoop F;      // class Unitary, twisted
    MatrixLoop gplus;  // class Plus, lambda^0 term diag(a, 1/a), a > 0
    double residual = 0;        // sup |g_- - F gplus^{-1}| over samples
    double unitary_defect = 0;  // sup |F F^dagger - I| over samples
};

struct IwasawaOptions {
    int fourier_samples = 256;
    int max_blocks = 192;
    double drift_tol = 1e-9;      // trailing-row stabilization
    double residual_tol = 1e-6;   // reconstruction quality gate
    double unimodular_tol = 1e-4;
};

// Iwasawa decomposition g_- = F gplus^{-1} through matrix spectral
// factorization: with h = g^dagger g on the circle,
//     h^{-1} = S S^dagger,  S in Lambda^+,  S(0) lower triangular positive,
// gives F = g S unitary and gplus = S. The factor S is read from the
// trailing block row of the Cholesky factor of the growing block-Toeplitz
// matrix [C_{i-j}] built from the Fourier coefficients C_k of h^{-1}
// (Bauer's method); the row stabilizes onto the factor coefficients.
//
// Twisting survives: h^{-1} is twisted, and uniqueness of the canonical
// factor forces S twisted, so the lambda^0 term is automatically diagonal
// diag(a, 1/a) with a > 0 from the Cholesky normalization. This pins the
// one-parameter diagonal gauge; the Sym-Bobenko immersion does not depend
// on that choice.
inline UnitaryFrame iwasawa(const HolomorphicFrame& frame, const IwasawaOptions& opt = {}) {
    const MatrixLoop& g = frame.gminus;
    const int n = g.trunc;
    if (unimodular_defect(g) > opt.unimodular_tol) throw NotUnimodularError();

    // Fourier coefficients of h^{-1} = (g^dagger g)^{-1} on the circle
    const int m_samp = std::max(opt.fourier_samples, 8 * n + 8);
    std::vector<Mat2> hinv(static_cast<size_t>(m_samp));
    for (int j = 0; j < m_samp; ++j) {
        Mat2 gj = g.sample(std::polar(1.0, 2.0 * M_PI * j / m_samp));
        Mat2 h = gj.adjoint() * gj;
        hinv[static_cast<size_t>(j)] = h.inverse();
    }
    const int band = 2 * n + 2;
    std::vector<Mat2> c(static_cast<size_t>(2 * band + 1));
    for (int k = -band; k <= band; ++k) {
        Mat2 acc = Mat2::Zero();
        for (int j = 0; j < m_samp; ++j)
            acc += hinv[static_cast<size_t>(j)] * std::polar(1.0, -2.0 * M_PI * j * k / m_samp);
        c[static_cast<size_t>(k + band)] = acc / static_cast<double>(m_samp);
    }
    auto coef = [&](int k) -> Mat2 {
        if (k < -band || k > band) return Mat2::Zero();
        return c[static_cast<size_t>(k + band)];
    };

    // growing block Cholesky T = L L^dagger, T_{ij} = C_{i-j}
    std::vector<std::vector<Mat2>> rows;  // rows[i][j] = L_{ij}, j <= i
    std::vector<Mat2> prev_factor(static_cast<size_t>(n) + 1, Mat2::Zero());
    bool converged = false;
    for (int i = 0; i < opt.max_blocks && !converged; ++i) {
        std::vector<Mat2> row(static_cast<size_t>(i) + 1);
        for (int j = 0; j < i; ++j) {
            Mat2 acc = coef(i - j);
            for (int s = 0; s < j; ++s)
                acc -= row[static_cast<size_t>(s)] * rows[static_cast<size_t>(j)][static_cast<size_t>(s)].adjoint();
            // solve row[j] * L_jj^dagger = acc
            Mat2 ljj_adj_inv = rows[static_cast<size_t>(j)][static_cast<size_t>(j)].adjoint().inverse();
            row[static_cast<size_t>(j)] = acc * ljj_adj_inv;
        }
        Mat2 diag = coef(0);
        for (int s = 0; s < i; ++s) diag -= row[static_cast<size_t>(s)] * row[static_cast<size_t>(s)].adjoint();
        // 2x2 Cholesky with positive diagonal
        Eigen::LLT<Mat2> llt(diag);
        if (llt.info() != Eigen::Success) throw FactorizationDiverged();
        row[static_cast<size_t>(i)] = llt.matrixL();
        rows.push_back(std::move(row));

        if (i >= n + 2) {
            double drift = 0;
            std::vector<Mat2> cur(static_cast<size_t>(n) + 1, Mat2::Zero());
            for (int u = 0; u <= n && u <= i; ++u)
                cur[static_cast<size_t>(u)] = rows[static_cast<size_t>(i)][static_cast<size_t>(i - u)];
            for (int u = 0; u <= n; ++u)
                drift = std::max(drift, (cur[static_cast<size_t>(u)] - prev_factor[static_cast<size_t>(u)]).cwiseAbs().maxCoeff());
            prev_factor = std::move(cur);
            if (drift < opt.drift_tol) converged = true;
        }
    }
    if (!converged) throw FactorizationDiverged();

    UnitaryFrame out;
    out.z = frame.z;
    out.gplus = MatrixLoop(n, true);
    for (int u = 0; u <= n; ++u) out.gplus.at(u) = prev_factor[static_cast<size_t>(u)];
    out.gplus.project_twisted();
    out.F = multiply(g, out.gplus);
    out.unitary_defect = unitary_defect(out.F);
    out.residual = sup_distance(multiply(out.F, inverse(out.gplus)), g);
    if (!(out.residual <= opt.residual_tol) || !(out.unitary_defect <= opt.residual_tol * 10))
        throw FactorizationDiverged();
    return out;
}

}  // namespace cmclab
