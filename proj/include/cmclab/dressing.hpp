#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cmclab/errors.hpp"
#include "cmclab/frobenius.hpp"
#include "cmclab/potential.hpp"

namespace cmclab {

// The Lambda^+ dressing action worked on the level of the coefficient f.
// The three basic one-parameter flows act by
//     T_D(t) f = e^{2t} f
//     T_U(t) f = f (1 + t b1)^{-2},   b1 = int_0^z f
//     T_V(t) f = f (1 + t c1)^{2},    c1 = int_0^z E/f
// and E is invariant throughout. b1 and c1 are the lambda^{-1} entries of
// the holomorphic frame, so they exist as rational maps whenever the
// potential is meromorphically integrable.

enum class Generator { D, U, V };

inline char generator_letter(Generator g) {
    switch (g) {
        case Generator::D: return 'D';
        case Generator::U: return 'U';
        case Generator::V: return 'V';
    }
    return '?';
}

// One concrete dressing step. For U and V the parameter is the exact t.
// For D the exact datum is the scale e^{2t} (the exponential of a rational
// t is not rational, so plans carry the scale; the CLI accepts t = ln(q) to
// express exact scales q^2).
struct DressingStep {
    Generator generator = Generator::U;
    ComplexRational t;      // U, V
    ComplexRational scale;  // D: e^{2t}
};

struct DressingState {
    Potential potential;
    RationalMap b1;  // = int_0^z f,    b1(0) = 0
    RationalMap c1;  // = int_0^z E/f,  c1(0) = 0
};

// Builds the state, integrating f and E/f from the origin. Throws
// LogarithmicObstruction when either antiderivative leaves the rational
// world (which certifies the potential is not meromorphically integrable).
inline DressingState make_dressing_state(const Potential& p) {
    DressingState s{p, {}, {}};
    ComplexRational zero(0);
    s.b1 = antiderivative(p.f, zero);
    s.c1 = antiderivative(p.hopf / p.f, zero);
    return s;
}

// T_D with exact scale sigma = e^{2t}: f -> sigma f, b1 -> sigma b1,
// c1 -> c1 / sigma.
inline DressingState t_d_scale(const DressingState& s, const ComplexRational& sigma) {
    if (sigma.is_zero()) throw DegeneratePotential("T_D scale must be nonzero");
    DressingState out = s;
    RationalMap sig = RationalMap::constant(sigma);
    out.potential.f = s.potential.f * sig;
    out.b1 = s.b1 * sig;
    out.c1 = s.c1 / sig;
    return out;
}

// T_D by exponent: the scale e^{2t} is rationalized to double precision,
// exact only for t = 0. Plans that need exactness state the scale directly.
inline DressingState t_d(const DressingState& s, Cd t) {
    if (t == Cd(0, 0)) return s;
    Cd sigma = std::exp(2.0 * t);
    ComplexRational sig(rationalize(sigma.real(), 1LL << 50), rationalize(sigma.imag(), 1LL << 50));
    return t_d_scale(s, sig);
}

inline DressingState t_u(const DressingState& s, const ComplexRational& t) {
    DressingState out = s;
    if (t.is_zero()) return out;
    RationalMap denom = RationalMap::one() + RationalMap::constant(t) * s.b1;
    if (denom.is_zero()) throw DegeneratePotential("1 + t b1 vanishes identically");
    out.potential.f = s.potential.f / (denom * denom);
    out.b1 = s.b1 / denom;  // b1 transforms by the Moebius rule
    out.c1 = antiderivative(out.potential.hopf / out.potential.f, ComplexRational(0));
    return out;
}

inline DressingState t_v(const DressingState& s, const ComplexRational& t) {
    DressingState out = s;
    if (t.is_zero()) return out;
    RationalMap denom = RationalMap::one() + RationalMap::constant(t) * s.c1;
    if (denom.is_zero()) throw DegeneratePotential("1 + t c1 vanishes identically");
    out.potential.f = s.potential.f * (denom * denom);
    out.c1 = s.c1 / denom;
    out.b1 = antiderivative(out.potential.f, ComplexRational(0));
    return out;
}

inline DressingState apply_step(const DressingState& s, const DressingStep& step) {
    switch (step.generator) {
        case Generator::D: return t_d_scale(s, step.scale);
        case Generator::U: return t_u(s, step.t);
        case Generator::V: return t_v(s, step.t);
    }
    throw Error("unreachable");
}

inline DressingState apply_plan(DressingState s, const std::vector<DressingStep>& plan) {
    for (const auto& step : plan) s = apply_step(s, step);
    return s;
}

// --- order bookkeeping -------------------------------------------------------

enum class TRegime { Generic, Small, Critical };

// Predicted signed order of T(t) f at a point where f has the given signed
// order and E vanishes to order m. Cases follow the one-parameter flow
// analysis: at a zero of f (order n), U keeps the order for generic t and
// jumps to a pole of order n+2 at the critical t = -1/beta_0; at a pole, U
// always produces a zero of order n-2. V mirrors these with c1, where the
// local shape of c1 depends on the sign of m - n.
inline int predict_orders(int f_order, int m, Generator gen, TRegime regime) {
    if (gen == Generator::D) return f_order;
    const bool pole = f_order < 0;
    const int n = pole ? -f_order : f_order;
    if (gen == Generator::U) {
        if (!pole) {
            // (1a): b1 = beta_0 + beta_1 w^{n+1} + ...
            if (regime == TRegime::Critical) return -(n + 2);
            return n;
        }
        // (2a): all t != 0
        return n - 2;
    }
    // V
    if (!pole) {
        if (n == 0) {
            // regular point of f: c1 = gamma_0 + gamma_1 w^{m+1} + ...
            if (regime == TRegime::Critical) return 2 * m + 2;
            return 0;
        }
        if (m >= n)
            throw CaseUndefinedError(
                "zero of f with E/f holomorphic branches; not admissible for an immersion");
        // (1c): all t != 0
        return 2 * m + 2 - n;
    }
    // pole: (2b)
    if (regime == TRegime::Critical) return 2 * m + 2 + n;
    return -n;
}

// --- planners ---------------------------------------------------------------

struct PlanStepTemplate {
    Generator generator;
    TRegime regime;
    int expected_order;  // signed order of f at the point after the step
};

struct DressAwayPlan {
    bool feasible = false;
    std::optional<int> witness_r;
    std::vector<PlanStepTemplate> steps;
    // set when the n = k(m+2) -+ 1 obstruction pattern blocks the reduction
    bool first_order_pole_block = false;
};

// Alternating U/V reduction of a pole or zero of f at a point where E
// vanishes to order m. Feasible iff n lies in one of the windows
//     zeros:  r(2m+4) - m - 2 <= n <= r(2m+4)
//     poles:  n = 2  or  r(2m+4) - m <= n <= r(2m+4) + 2
// for some r >= 1; the blocked case surfaces a first-order pole of E/f along
// the way, which certifies the potential was never integrable.
inline DressAwayPlan dress_away_plan(int f_order, int m) {
    DressAwayPlan plan;
    if (f_order == 0 || f_order % 2 != 0) return plan;
    const bool pole = f_order < 0;
    const int n = pole ? -f_order : f_order;

    // feasibility windows
    if (pole && n == 2) {
        plan.feasible = true;
    } else {
        for (int r = 1; r * (2 * m + 4) <= n + 2 * m + 4; ++r) {
            int lo = pole ? r * (2 * m + 4) - m : r * (2 * m + 4) - m - 2;
            int hi = pole ? r * (2 * m + 4) + 2 : r * (2 * m + 4);
            if (n >= lo && n <= hi) {
                plan.feasible = true;
                plan.witness_r = r;
                break;
            }
        }
    }
    if (!plan.feasible) {
        // the corollary's blocking pattern: n = k(m+2) - 1 (zeros) or
        // n = k(m+2) + 1 (poles) with odd k
        for (int k = 1; k * (m + 2) <= n + 1; k += 2) {
            if ((!pole && n == k * (m + 2) - 1) || (pole && n == k * (m + 2) + 1))
                plan.first_order_pole_block = true;
        }
        return plan;
    }

    // Alternate U (at poles) and V (at zeros) until the potential is
    // holomorphic at the point: f order >= 0 and E/f order = m - n >= 0.
    int cur = f_order;
    int guard = 0;
    while (cur < 0 || cur > m) {
        if (++guard > 64) throw Error("dress-away reduction failed to terminate (internal)");
        Generator gen = cur < 0 ? Generator::U : Generator::V;
        int next = predict_orders(cur, m, gen, TRegime::Generic);
        plan.steps.push_back({gen, TRegime::Generic, next});
        cur = next;
    }
    return plan;
}

// --- singularity creation -----------------------------------------------------

struct CreatedSingularity {
    std::vector<DressingStep> steps;
    DressingState result;
};

// Alternating critical U/V steps at z1 produce poles of order 2, 6, 10, ...
// and zeros of order 4, 8, ... (U first) or zeros 2, 6, ... poles 4, 8, ...
// (V first). The target parity fixes which flow starts. Throws BlockedError
// when the needed antiderivative vanishes (or is singular) at z1 or when E
// vanishes there.
inline CreatedSingularity create_singularity_plan(const DressingState& start,
                                                  const ComplexRational& z1, bool target_pole,
                                                  int target_order) {
    if (target_order < 2 || target_order % 2 != 0)
        throw Error("target order must be an even positive integer");
    if (!start.potential.hopf.is_zero() &&
        (!start.potential.hopf.finite_at(z1) || start.potential.hopf.eval(z1).is_zero()))
        throw BlockedError(to_cd(z1));

    const int big_n = target_order / 2;
    const bool start_with_u = target_pole ? (big_n % 2 == 1) : (big_n % 2 == 0);
    const int steps_needed = big_n;

    CreatedSingularity out;
    out.result = start;
    bool use_u = start_with_u;
    for (int i = 0; i < steps_needed; ++i) {
        const RationalMap& anti = use_u ? out.result.b1 : out.result.c1;
        if (!anti.finite_at(z1)) throw BlockedError(to_cd(z1));
        ComplexRational val = anti.eval(z1);
        if (val.is_zero()) throw BlockedError(to_cd(z1));
        ComplexRational t = -inverse(val);
        DressingStep step;
        step.generator = use_u ? Generator::U : Generator::V;
        step.t = t;
        out.result = apply_step(out.result, step);
        out.steps.push_back(step);
        use_u = !use_u;
    }
    return out;
}

}  // namespace cmclab
