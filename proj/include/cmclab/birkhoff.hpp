#pragma once

#include <Eigen/Dense>

#include "cmclab/errors.hpp"
#include "cmclab/loop.hpp"

namespace cmclab {

struct BirkhoffSplit {
    MatrixLoop minus;  // in Lambda^-_* (constant term I)
    MatrixLoop plus;   // in Lambda^+
    double residual = 0;
};

// Splits x = g_- g_+ with g_- normalized to I at lambda = infinity.
//
// Writing g_-^{-1} = I + sum_{k>=1} H_k lambda^{-k}, the requirement that
// g_+ = g_-^{-1} x has no negative lambda-powers is the block-Toeplitz system
//     sum_k H_k X_{k-j} = -X_{-j},   j = 1..N,
// solved densely. A (near-)singular system signals a point of the discrete
// bad set outside the big cell.
inline BirkhoffSplit birkhoff_split(const MatrixLoop& x, double residual_tol = 1e-8) {
    const int n = x.trunc;
    const int dim = 2 * n;
    Eigen::MatrixXcd t(dim, dim);
    Eigen::MatrixXcd rhs(dim, 2);
    for (int j = 1; j <= n; ++j) {
        for (int k = 1; k <= n; ++k) {
            Mat2 block = x.has(k - j) ? x.at(k - j) : Mat2::Zero();
            // equation row j, unknown H_k, left multiplication: transpose into
            // column form T^T H^T = B^T
            t.block<2, 2>(2 * (j - 1), 2 * (k - 1)) = block.transpose();
        }
        Mat2 b = x.has(-j) ? x.at(-j) : Mat2::Zero();
        rhs.block<2, 2>(2 * (j - 1), 0) = -b.transpose();
    }
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(t);
    lu.setThreshold(1e-10);
    if (lu.rank() < dim) throw OutsideBigCell();
    Eigen::MatrixXcd h = lu.solve(rhs);

    MatrixLoop winv(n, x.twisted);  // g_-^{-1}
    winv.at(0) = Mat2::Identity();
    for (int k = 1; k <= n; ++k) winv.at(-k) = h.block<2, 2>(2 * (k - 1), 0).transpose();
    if (x.twisted) winv.project_twisted();

    BirkhoffSplit out;
    out.plus = multiply(winv, x);
    for (int k = -n; k < 0; ++k) out.plus.at(k).setZero();
    out.minus = inverse(winv);
    for (int k = 1; k <= n; ++k) out.minus.at(k).setZero();
    out.minus.at(0) = Mat2::Identity();
    out.residual = sup_distance(multiply(out.minus, out.plus), x);
    if (!(out.residual <= residual_tol)) throw OutsideBigCell();
    return out;
}

}  // namespace cmclab
