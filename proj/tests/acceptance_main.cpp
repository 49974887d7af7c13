// Acceptance suite. Runs the eight gate criteria and prints one line per
// criterion:   [PASS|FAIL] criterion N: <name> (<seconds>)
//
// Usage: acceptance [N ...]   (default: all)

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <iostream>
#include <random>
#include <vector>

#include "cmclab/birkhoff.hpp"
#include "cmclab/classify.hpp"
#include "cmclab/diagnostics.hpp"
#include "cmclab/dressing.hpp"
#include "cmclab/gminus.hpp"
#include "cmclab/iwasawa.hpp"
#include "cmclab/mesh.hpp"
#include "cmclab/parse.hpp"
#include "support.hpp"

using namespace cmclab;
using testsupport::fit_sphere;
using testsupport::make_potential;

namespace {

int checks_failed = 0;

#define EXPECT(cond, what)                                                       \
    do {                                                                         \
        if (!(cond)) {                                                           \
            std::cout << "       failed: " << what << " [" << #cond << "]\n"; \
            ++checks_failed;                                                     \
        }                                                                        \
    } while (0)

ComplexRational cq(const std::string& s) { return parse_complex_rational(s); }

Potential normalized_pot(const ComplexRational& z0, int ord,
                         const std::vector<ComplexRational>& ecoeffs) {
    RationalMap w{QPoly{std::vector<ComplexRational>{-z0, ComplexRational(1)}}, QPoly::one()};
    QPoly e;
    e.c = ecoeffs;
    e.normalize();
    return Potential{pow(w, ord), RationalMap{e.taylor_shift(-z0), QPoly::one()}, Domain::Plane};
}

// ---------------------------------------------------------------------------
// 1. Golden dressing identities: the one-step second-order-pole potential and
//    the two-step f-hat formula, both as exact rational normal forms.
void criterion1() {
    DressingState cyl = make_dressing_state(make_potential("1", "1"));

    ComplexRational z0 = cq("1/4");
    EXPECT(cyl.b1.eval(z0) == z0, "b1(z0) = z0 on the cylinder");
    DressingState first = t_u(cyl, -inverse(ComplexRational(z0)));
    EXPECT(first.potential.f == parse_rational_map("(1/4)^2/(1/4-z)^2"),
           "T_U(-1/b1(z0)) f equals (z0/(z0-z))^2 exactly");
    EXPECT(first.potential.hopf == parse_rational_map("1"), "E untouched");

    ComplexRational z1 = cq("-1/4");
    ComplexRational c1z1 = first.c1.eval(z1);
    EXPECT(!c1z1.is_zero(), "z1 avoids the zeros of c1");
    DressingState second = t_v(first, -inverse(c1z1));
    std::string z0s = "(1/4)", z1s = "(-1/4)";
    std::string formula = "((" + z0s + "*((" + z0s + "-" + z1s + ")^3-(" + z0s + "-z)^3))/((" +
                          z0s + "-z)*((" + z0s + "-" + z1s + ")^3-" + z0s + "^3)))^2";
    EXPECT(second.potential.f == parse_rational_map(formula),
           "two-step plan reproduces the dressed f-hat formula exactly");
    EXPECT(second.potential.hopf == parse_rational_map("1"), "E untouched after both steps");
}

// ---------------------------------------------------------------------------
// 2. Integrability table: normalized pole cases n = 2, 4, 6 and zero cases
//    n = 2, 4 against their explicit coefficient conditions, generic sweep.
void criterion2() {
    std::mt19937 rng(20240817);
    std::uniform_int_distribution<int> num(-6, 6), den(1, 5);
    auto coeffs = [&](int count) {
        std::vector<ComplexRational> e;
        for (int i = 0; i < count; ++i)
            e.push_back(ComplexRational(Rational(num(rng), den(rng)), Rational(num(rng), den(rng))));
        return e;
    };
    ComplexRational z0(Rational(1, 3), Rational(-1, 4));
    int cases = 0;
    for (int it = 0; it < 8; ++it) {
        auto e = coeffs(7);
        if (it % 2 == 0) e[1] = ComplexRational(0);
        if (it % 4 < 2) e[3] = ComplexRational(0);
        if (it % 3 == 0) e[0] = ComplexRational(0);
        if (e[0].is_zero() && e[1].is_zero() && e[2].is_zero()) e[2] = ComplexRational(1);

        {  // pole n = 2: always integrable
            Potential p = normalized_pot(z0, -2, e);
            EXPECT(frobenius_obstruction(p, z0).integrable(), "pole n=2 always integrable");
            ++cases;
        }
        {  // pole n = 4: integrable iff E_1 = 0
            Potential p = normalized_pot(z0, -4, e);
            EXPECT(frobenius_obstruction(p, z0).integrable() == e[1].is_zero(),
                   "pole n=4 condition E_1 = 0");
            ++cases;
        }
        {  // pole n = 6: integrable iff E_3 = 0 and E_0 E_1 = 0 (E_2 free)
            Potential p = normalized_pot(z0, -6, e);
            bool expect = e[3].is_zero() && (e[0] * e[1]).is_zero();
            EXPECT(frobenius_obstruction(p, z0).integrable() == expect,
                   "pole n=6 condition E_3 = E_0 E_1 = 0");
            ++cases;
        }
        {  // zero n = 2: integrable iff E_1 = 0
            Potential p = normalized_pot(z0, 2, e);
            EXPECT(frobenius_obstruction(p, z0).integrable() == e[1].is_zero(),
                   "zero n=2 condition E_1 = 0");
            ++cases;
        }
        {  // zero n = 4: integrable iff E_3 = E_0 E_1 = 0
            Potential p = normalized_pot(z0, 4, e);
            bool expect = e[3].is_zero() && (e[0] * e[1]).is_zero();
            EXPECT(frobenius_obstruction(p, z0).integrable() == expect,
                   "zero n=4 condition E_3 = E_0 E_1 = 0");
            ++cases;
        }
        // E_2 freedom at the sixth order pole: flipping E_2 never changes it
        if (it == 0) {
            auto e2 = e;
            e2[3] = ComplexRational(0);
            e2[1] = ComplexRational(0);
            Potential a = normalized_pot(z0, -6, e2);
            e2[2] = e2[2] + ComplexRational(5);
            Potential b = normalized_pot(z0, -6, e2);
            EXPECT(frobenius_obstruction(a, z0).integrable() &&
                       frobenius_obstruction(b, z0).integrable(),
                   "E_2 free at pole n=6");
        }
    }
    EXPECT(cases >= 20, "at least a 20-case sweep");
}

// ---------------------------------------------------------------------------
// 3. Triple oracle agreement on randomized potentials with orders 2..8.
void criterion3() {
    std::mt19937 rng(77);
    std::uniform_int_distribution<int> coin(0, 1), ords(1, 4), num(1, 5), den(1, 3),
        mval(0, 3), small(-3, 3);
    int done = 0, integrable_seen = 0, blocked_seen = 0;
    while (done < 30) {
        int n = 2 * ords(rng);
        bool pole = coin(rng) == 1;
        ComplexRational z0(Rational(num(rng), den(rng)), Rational(small(rng), 4));
        if (z0.is_zero()) continue;
        std::vector<ComplexRational> e;
        int style = done % 3;
        if (style == 0) {
            // even in w together with the normalized f: symmetric, integrable
            int terms = 3;
            for (int k = 0; k < 2 * terms; ++k)
                e.push_back(k % 2 == 0 ? ComplexRational(Rational(num(rng), den(rng)))
                                       : ComplexRational(0));
        } else if (style == 1) {
            // monomial Hopf coefficient w^m: integrability decided by the
            // divisibility pattern, both outcomes occur
            int m = mval(rng);
            e.assign(static_cast<size_t>(m) + 1, ComplexRational(0));
            e[static_cast<size_t>(m)] = ComplexRational(Rational(num(rng), den(rng)));
        } else {
            // generic coefficients, usually obstructed
            for (int k = 0; k < 5; ++k)
                e.push_back(ComplexRational(Rational(num(rng), den(rng)), Rational(small(rng), 2)));
        }
        Potential p = normalized_pot(z0, pole ? -n : n, e);
        if (p.hopf.is_zero()) continue;

        auto rep = frobenius_obstruction(p, z0);
        bool exact = rep.integrable();
        bool residue_zero = residue_test(p, z0, &rep).is_zero();
        double defect = monodromy_defect_max(p, to_cd(z0), detail::isolation_radius(p, to_cd(z0)));
        bool numeric = defect < 1e-6;
        EXPECT(exact == residue_zero, "obstruction and residue verdicts agree");
        EXPECT(exact == numeric, "monodromy transport agrees with the exact verdict");
        if (exact != numeric) {
            std::printf("       (defect %.3g for n=%d pole=%d style=%d)\n", defect, n, pole, style);
        }
        integrable_seen += exact ? 1 : 0;
        blocked_seen += exact ? 0 : 1;
        ++done;
    }
    EXPECT(integrable_seen >= 8, "ensemble contains integrable cases");
    EXPECT(blocked_seen >= 8, "ensemble contains obstructed cases");
}

// ---------------------------------------------------------------------------
// 4. Smoothness classifier sweep over (n, m) against the order conditions,
//    and the k(m+2) -+ 1 patterns are never integrable.
void criterion4() {
    ComplexRational z0(Rational(1, 3));
    auto monomial = [](int m) {
        std::vector<ComplexRational> e(static_cast<size_t>(m) + 1, ComplexRational(0));
        e[static_cast<size_t>(m)] = ComplexRational(1);
        return e;
    };
    for (int n = 2; n <= 16; n += 2) {
        for (int m = 0; m <= 4; ++m) {
            {
                auto v = classify_singularity(normalized_pot(z0, -n, monomial(m)), z0);
                bool order_ok = n == 2;
                for (int r = 1; r * (2 * m + 4) <= n; ++r)
                    order_ok |= n == r * (2 * m + 4) || n == r * (2 * m + 4) + 2;
                EXPECT(v.smooth == (v.integrable && order_ok), "pole order conditions");
                if (order_ok) EXPECT(v.integrable, "smooth pole patterns integrable with monomial E");
            }
            if (m < n) {
                auto v = classify_singularity(normalized_pot(z0, n, monomial(m)), z0);
                bool order_ok = false;
                for (int r = 1; r * (2 * m + 4) <= n + 2; ++r)
                    order_ok |= n == r * (2 * m + 4) || n == r * (2 * m + 4) - 2;
                EXPECT(v.smooth == (v.integrable && order_ok), "zero order conditions");
                if (order_ok) EXPECT(v.integrable, "smooth zero patterns integrable with monomial E");
            }
        }
    }
    for (int k : {1, 3, 5}) {
        for (int m : {1, 3}) {
            int nz = k * (m + 2) - 1;
            if (nz % 2 == 0 && m < nz)
                EXPECT(!classify_singularity(normalized_pot(z0, nz, monomial(m)), z0).integrable,
                       "zero n = k(m+2)-1 pattern not integrable");
            int np = k * (m + 2) + 1;
            if (np % 2 == 0)
                EXPECT(!classify_singularity(normalized_pot(z0, -np, monomial(m)), z0).integrable,
                       "pole n = k(m+2)+1 pattern not integrable");
        }
    }
}

// ---------------------------------------------------------------------------
// 5. Pipeline CMC check: cylinder at 64x64, N = 16, and the sphere fit.
void criterion5() {
    Potential cyl = make_potential("1", "1");
    DomainGrid spec;
    spec.kind = DomainGrid::Kind::Rect;
    spec.corner0 = Cd(-0.5, -0.5);
    spec.corner1 = Cd(0.5, 0.5);
    spec.nu = spec.nv = 64;
    DomainGrid grid = sample_domain(spec, cyl);
    BuildOptions opt;
    opt.jobs = 8;
    SurfaceMesh mesh = build_mesh(cyl, grid, 0.0, 16, opt);
    EXPECT(mesh.failed_vertices == 0, "every lattice point factorized");
    EXPECT(mesh.max_h_defect <= 1e-2, "cylinder |H_d + 1/2| <= 1e-2");
    EXPECT(mesh.max_conformality <= 1e-4, "conformality defect <= 1e-4");
    EXPECT(mesh.max_iwasawa_residual <= 1e-7, "Iwasawa residual <= 1e-7");

    Potential sph = make_potential("1", "0", Domain::Plane, true);
    DomainGrid sspec;
    sspec.kind = DomainGrid::Kind::Rect;
    sspec.corner0 = Cd(-0.6, -0.6);
    sspec.corner1 = Cd(0.6, 0.6);
    sspec.nu = sspec.nv = 33;
    SurfaceMesh smesh = build_mesh(sph, sample_domain(sspec, sph), 0.0, 12, opt);
    auto fit = fit_sphere(smesh.vertices);
    EXPECT(fit.max_residual <= 1e-3, "sphere mesh fits a round sphere to 1e-3");
}

// ---------------------------------------------------------------------------
// 6. Sixth-order-pole potential end to end: exact check, then a disk mesh
//    minus the end exclusion with the CMC property away from the end.
void criterion6() {
    Potential p = make_potential("(z-1/2)^-6", "z-1/2");
    auto verdicts = classify_all(p);
    EXPECT(verdicts.size() == 1, "single singular point");
    EXPECT(verdicts[0].integrable && verdicts[0].smooth, "check passes");
    EXPECT(verdicts[0].witness_r && *verdicts[0].witness_r == 1, "witness r = 1");

    DomainGrid spec;
    spec.kind = DomainGrid::Kind::Disk;
    spec.radius = 1.0;
    spec.nu = 40;
    spec.nv = 96;
    DomainGrid grid = sample_domain(spec, p);
    EXPECT(grid.excluded.size() == 1, "one exclusion disk");
    EXPECT(grid.excluded[0].near_end, "end flagged near_end");
    BuildOptions opt;
    opt.jobs = 8;
    SurfaceMesh mesh = build_mesh(p, grid, 0.0, 16, opt);
    EXPECT(mesh.vertices.size() > 3000, "mesh covers the disk");
    // "away from the end" = at least 0.3 from z0 = 1/2 at this resolution
    double worst = 0;
    int counted = 0;
    for (const auto& v : mesh.vertices) {
        if (!v.interior || !std::isfinite(v.mean_curvature)) continue;
        if (std::abs(v.z - Cd(0.5, 0)) < 0.3) continue;
        worst = std::max(worst, std::abs(v.mean_curvature + 0.5));
        ++counted;
    }
    EXPECT(counted > 1500, "enough interior vertices away from the end");
    EXPECT(worst <= 2e-2, "|H_d + 1/2| <= 2e-2 away from the end");
    std::printf("       (away-from-end H defect %.3g over %d vertices)\n", worst, counted);
}

// ---------------------------------------------------------------------------
// 7. Closed-form dressing against the numeric Birkhoff resplit on b1~ / c1~.
void criterion7() {
    Potential cyl = make_potential("1", "1");
    const int n = 16;
    std::mt19937 rng(31337);
    std::uniform_real_distribution<double> dist(-0.3, 0.3);
    double worst = 0;
    std::vector<HolomorphicFrame> frames;
    for (int s = 0; s < 20; ++s) {
        Cd z(0.15 + 0.55 * (s % 5) / 4.0, -0.3 + 0.6 * (s / 5) / 3.0);
        frames.push_back(integrate_gminus(cyl, z, n));
    }
    for (int it = 0; it < 10; ++it) {
        Cd t(dist(rng), dist(rng));
        for (const auto& fr : frames) {
            Cd b1 = fr.z;  // cylinder: b1 = c1 = z
            MatrixLoop hu = MatrixLoop::identity(n);
            hu.at(1)(1, 0) = t;
            BirkhoffSplit su = birkhoff_split(multiply(hu, fr.gminus));
            worst = std::max(worst, std::abs(su.minus.at(-1)(0, 1) - b1 / (1.0 + t * b1)));
            MatrixLoop hv = MatrixLoop::identity(n);
            hv.at(1)(0, 1) = t;
            BirkhoffSplit sv = birkhoff_split(multiply(hv, fr.gminus));
            worst = std::max(worst, std::abs(sv.minus.at(-1)(1, 0) - b1 / (1.0 + t * b1)));
        }
    }
    std::printf("       (max deviation %.3g over 20 points x 10 t)\n", worst);
    EXPECT(worst <= 1e-6, "b1~/c1~ agree with the closed forms to 1e-6");
}

// ---------------------------------------------------------------------------
// 8. Structural invariants: parity, det, gauge invariance, reality, band
//    structure, Hopf proportionality, on the cylinder and a Smyth potential.
void criterion8() {
    for (const char* etext : {"1", "z"}) {
        Potential p = make_potential("1", etext);
        Cd probe(0.3, -0.2);
        HolomorphicFrame fr = integrate_gminus(p, probe, 16);
        UnitaryFrame uf = iwasawa(fr);

        EXPECT(fr.gminus.twist_defect() < 1e-12, "g_- twisted parity");
        EXPECT(uf.F.twist_defect() < 1e-10, "F twisted parity");
        EXPECT(uf.gplus.twist_defect() < 1e-10, "gplus twisted parity");
        EXPECT(unimodular_defect(fr.gminus) < 1e-9, "det g_- = 1");
        EXPECT(unimodular_defect(uf.F) < 1e-8, "det F = 1");

        // diagonal gauge invariance of the immersion, exact up to roundoff
        ImmersionPoint a = sym_bobenko(uf, 0.0);
        UnitaryFrame rot = uf;
        Mat2 k = Mat2::Zero();
        k(0, 0) = std::polar(1.0, 1.234);
        k(1, 1) = std::polar(1.0, -1.234);
        for (int j = -rot.F.trunc; j <= rot.F.trunc; ++j) rot.F.at(j) = rot.F.at(j) * k;
        ImmersionPoint b = sym_bobenko(rot, 0.0);
        EXPECT((a.position - b.position).norm() < 1e-12, "Sym-Bobenko diagonal gauge invariance");

        FrameChecks checks = derivative_checks(p, probe, 16, 0.005);
        EXPECT(checks.band_defect <= 1e-5, "F^-1 dF band structure defect <= 1e-5");
        EXPECT(checks.reality_defect <= 1e-6, "e^{-2ib} f reality defect <= 1e-6 |f|");
        EXPECT(checks.metric_defect <= 1e-3, "w^-2 f consistent with the metric factor");

        std::vector<Cd> probes{Cd(0.3, -0.2), Cd(-0.25, 0.15), Cd(0.2, 0.3), Cd(-0.1, -0.3)};
        double hopf_dev = hopf_consistency(p, probes, 16, 0.01);
        EXPECT(hopf_dev <= 1e-4, "Q proportional to E across probe points");
        std::printf("       (E=%s: band %.2g, reality %.2g, metric %.2g, hopf %.2g)\n", etext,
                    checks.band_defect, checks.reality_defect, checks.metric_defect, hopf_dev);
    }
}

struct Criterion {
    int id;
    const char* name;
    std::function<void()> run;
};

}  // namespace

int main(int argc, char** argv) {
    std::vector<Criterion> all = {
        {1, "golden dressing identities (exact)", criterion1},
        {2, "integrability table for normalized orders (exact)", criterion2},
        {3, "triple-oracle agreement on randomized potentials", criterion3},
        {4, "smoothness classifier (n, m) sweep (exact)", criterion4},
        {5, "pipeline CMC check: cylinder 64x64 and sphere fit", criterion5},
        {6, "sixth-order pole end-to-end: check + disk mesh", criterion6},
        {7, "dressing vs numeric Birkhoff resplit", criterion7},
        {8, "structural invariants suite", criterion8},
    };
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));

    int failures = 0;
    for (auto& c : all) {
        if (!selected.empty() &&
            std::find(selected.begin(), selected.end(), c.id) == selected.end())
            continue;
        checks_failed = 0;
        auto start = std::chrono::steady_clock::now();
        try {
            c.run();
        } catch (const std::exception& e) {
            std::cout << "       exception: " << e.what() << "\n";
            ++checks_failed;
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] criterion %d: %s (%.2f s)\n", checks_failed == 0 ? "PASS" : "FAIL", c.id,
                    c.name, secs);
        failures += checks_failed == 0 ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
