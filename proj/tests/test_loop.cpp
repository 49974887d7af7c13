#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "cmclab/birkhoff.hpp"
#include "cmclab/loop.hpp"

using namespace cmclab;

namespace {

std::mt19937 rng(2024);

Cd rand_c(double scale = 1.0) {
    std::uniform_real_distribution<double> d(-1, 1);
    return scale * Cd(d(rng), d(rng));
}

// random twisted loop with content limited to the band [-band, band],
// embedded at truncation n (band <= n keeps convolution products exact)
MatrixLoop random_twisted(int n, int band, double decay = 0.5, double scale = 0.3) {
    MatrixLoop l = MatrixLoop::identity(n);
    for (int k = -band; k <= band; ++k) {
        double mag = scale * std::pow(decay, std::abs(k));
        Mat2 m = Mat2::Zero();
        if ((k % 2 + 2) % 2 == 0) {
            m(0, 0) = rand_c(mag);
            m(1, 1) = rand_c(mag);
        } else {
            m(0, 1) = rand_c(mag);
            m(1, 0) = rand_c(mag);
        }
        l.at(k) += m;
    }
    return l;
}

// random element of Lambda^-_* with determinant exactly 1: a product of
// unipotent twisted factors I + c lambda^{-k} sigma_{+-}, odd k. This is the
// shape the holomorphic frames of the construction actually take.
MatrixLoop random_minus_star(int n, std::initializer_list<int> ks = {1, 1, 3}) {
    MatrixLoop l = MatrixLoop::identity(n);
    bool upper = true;
    for (int k : ks) {
        MatrixLoop f = MatrixLoop::identity(n);
        Cd c = rand_c(0.5);
        if (upper)
            f.at(-k)(0, 1) = c;
        else
            f.at(-k)(1, 0) = c;
        upper = !upper;
        l = multiply(l, f);
    }
    return l;
}

}  // namespace

TEST_CASE("multiply: identity, monomials, pointwise oracle") {
    MatrixLoop id = MatrixLoop::identity(8);
    MatrixLoop a = random_twisted(8, 4);
    MatrixLoop ia = multiply(id, a);
    CHECK(sup_distance(ia, a) < 1e-14);

    // (lambda sigma+) * (lambda^-1 sigma-) = sigma+ sigma- = diag(1, 0)
    MatrixLoop p(4), q(4);
    p.at(1)(0, 1) = 1;
    q.at(-1)(1, 0) = 1;
    MatrixLoop prod = multiply(p, q);
    CHECK(std::abs(prod.at(0)(0, 0) - Cd(1, 0)) < 1e-15);
    CHECK(prod.at(0).cwiseAbs().sum() == 1.0);

    // pointwise product of samples matches the coefficient convolution
    MatrixLoop b = random_twisted(8, 4);
    MatrixLoop ab = multiply(a, b);
    for (int j = 0; j < 16; ++j) {
        Cd lam = std::polar(1.0, 2 * M_PI * j / 16);
        Mat2 direct = a.sample(lam) * b.sample(lam);
        CHECK((ab.sample(lam) - direct).cwiseAbs().maxCoeff() < 1e-10);
    }
    CHECK(ab.twist_defect() < 1e-14);  // parity preserved
    CHECK_THROWS_AS(multiply(a, random_twisted(4, 2)), TruncationMismatch);
}

TEST_CASE("sample basics and twisting relation") {
    MatrixLoop id = MatrixLoop::identity(6);
    CHECK((id.sample(Cd(0.3, 0.954)) - Mat2::Identity()).norm() < 1e-14);

    MatrixLoop l(6);
    l.at(-1)(0, 1) = 1;
    l.at(1)(1, 0) = 1;
    Mat2 at1 = l.sample(Cd(1, 0));
    CHECK(std::abs(at1(0, 1) - Cd(1, 0)) < 1e-14);
    CHECK(std::abs(at1(1, 0) - Cd(1, 0)) < 1e-14);

    // g(-lambda) = sigma3 g(lambda) sigma3 for twisted loops
    MatrixLoop a = random_twisted(6, 6);
    Mat2 s3;
    s3 << 1, 0, 0, -1;
    for (Cd lam : {Cd(1, 0), Cd(0, 1), std::polar(1.0, 0.7)}) {
        Mat2 lhs = a.sample(-lam);
        Mat2 rhs = s3 * a.sample(lam) * s3;
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("inverse") {
    MatrixLoop id = MatrixLoop::identity(8);
    CHECK(sup_distance(inverse(id), id) < 1e-13);

    MatrixLoop d = MatrixLoop::identity(8);
    d.at(0) << 2, 0, 0, 0.5;
    MatrixLoop dinv = inverse(d);
    CHECK(std::abs(dinv.at(0)(0, 0) - Cd(0.5, 0)) < 1e-12);
    CHECK(std::abs(dinv.at(0)(1, 1) - Cd(2, 0)) < 1e-12);

    // unimodular loops with exact finite band invert exactly (adjugate has
    // the same band, det == 1), so only float roundoff remains
    for (int it = 0; it < 5; ++it) {
        MatrixLoop a = random_minus_star(10);
        MatrixLoop ainv = inverse(a);
        CHECK(sup_distance(multiply(a, ainv), MatrixLoop::identity(10)) < 1e-12);
        CHECK(ainv.twist_defect() < 1e-12);
    }
    // gently decaying non-unimodular content: residual measured pointwise
    for (int it = 0; it < 3; ++it) {
        MatrixLoop a = random_twisted(10, 10, 0.15, 0.08);  // frame-like superexponential decay
        MatrixLoop ainv = inverse(a);
        double worst = 0;
        for (int j = 0; j < 32; ++j) {
            Cd lam = std::polar(1.0, 2 * M_PI * j / 32);
            worst = std::max(worst,
                             (a.sample(lam) * ainv.sample(lam) - Mat2::Identity()).cwiseAbs().maxCoeff());
        }
        CHECK(worst < 1e-9);
    }
}

TEST_CASE("sobolev norm") {
    MatrixLoop z(5);
    CHECK(sobolev_norm(z) == 0.0);
    CHECK(sobolev_norm(MatrixLoop::identity(5)) == Catch::Approx(std::sqrt(2.0)));
    MatrixLoop single(5);
    single.at(2)(0, 0) = 3.0;  // |coeff|_F = 3, factor (1+4)^(1/2)
    CHECK(sobolev_norm(single, 1.0) == Catch::Approx(std::sqrt(5.0) * 3.0));
    CHECK_THROWS_AS(sobolev_norm(z, 0.3), Error);
}

TEST_CASE("unitary class check") {
    MatrixLoop f = MatrixLoop::identity(6);
    // constant unitary rotation is a unitary loop
    double th = 0.83;
    f.at(0) << Cd(std::cos(th), 0), Cd(std::sin(th), 0), Cd(-std::sin(th), 0), Cd(std::cos(th), 0);
    CHECK(in_class(f, LoopClass::Unitary, 1e-10));
    for (int j = 0; j < 32; ++j) {
        Mat2 m = f.sample(std::polar(1.0, 2 * M_PI * j / 32));
        CHECK((m * m.adjoint() - Mat2::Identity()).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("truncation consistency on the retained band") {
    // loops with true band N/2: multiplying at truncation N and then looking
    // at the [-N/2, N/2] band equals multiplying at truncation N/2
    const int n = 12;
    for (int it = 0; it < 4; ++it) {
        MatrixLoop a_half = random_twisted(n / 2, n / 2, 0.5, 0.25);
        MatrixLoop b_half = random_twisted(n / 2, n / 2, 0.5, 0.25);
        MatrixLoop a_full(n), b_full(n);
        for (int k = -n / 2; k <= n / 2; ++k) {
            a_full.at(k) = a_half.at(k);
            b_full.at(k) = b_half.at(k);
        }
        MatrixLoop big = multiply(a_full, b_full);
        MatrixLoop small = multiply(a_half, b_half);
        double d = 0;
        for (int k = -n / 2; k <= n / 2; ++k)
            d = std::max(d, (big.at(k) - small.at(k)).cwiseAbs().maxCoeff());
        CHECK(d < 1e-14);
    }
}

TEST_CASE("birkhoff split: trivial and random cases") {
    // x already in Lambda^-_*: split returns (x, I)
    MatrixLoop g = random_minus_star(10);
    BirkhoffSplit s = birkhoff_split(g);
    CHECK(sup_distance(s.minus, g) < 1e-8);
    CHECK(sup_distance(s.plus, MatrixLoop::identity(10)) < 1e-8);

    // h in Lambda^+ times g in Lambda^-_*: product resplits with small residual
    for (int it = 0; it < 5; ++it) {
        MatrixLoop h = MatrixLoop::identity(10);
        h.at(1)(1, 0) = rand_c(0.4);
        h.at(1)(0, 1) = rand_c(0.4);
        h.at(2)(0, 0) = rand_c(0.2);
        MatrixLoop x = multiply(h, random_minus_star(10));
        BirkhoffSplit sx = birkhoff_split(x);
        CHECK(sx.residual < 1e-8);
        CHECK(in_class(sx.minus, LoopClass::MinusStar, 1e-9));
        CHECK(in_class(sx.plus, LoopClass::Plus, 1e-12));
    }
}
