#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cmclab/rational_map.hpp"
#include "cmclab/roots.hpp"

namespace cmclab {

enum class Domain { Plane, UnitDisk };

// The data (f, E) of a meromorphic potential  xi = lambda^-1 (0 f; E/f 0) dz.
// E dz^2 is the Hopf differential up to a constant factor. Admissibility
// (see validate_potential): E holomorphic on the domain, f and E/f finite at
// z = 0, all pole/zero orders of f even, f not identically zero.
struct Potential {
    RationalMap f;
    RationalMap hopf;  // E
    Domain domain = Domain::Plane;

    RationalMap g() const { return hopf / f; }  // lower-left coefficient E/f
};

enum class ViolationCode {
    ZeroF,
    ZeroE,
    PoleAtOrigin,
    PoleOfEInDomain,
    OddOrderAt,
};

struct Violation {
    ViolationCode code;
    std::string message;
    Cd where{0.0, 0.0};
};

struct ValidationResult {
    std::optional<Potential> potential;
    std::vector<Violation> violations;
    bool ok() const { return potential.has_value(); }
};

// Checks the Potential invariants and returns either the checked value or the
// full list of violations. `allow_zero_hopf` admits E == 0 (round sphere);
// the analysis layer has nothing to say about that case but the surface
// pipeline handles it, so the CLI surface path opts in.
inline ValidationResult validate_potential(const RationalMap& f, const RationalMap& hopf,
                                           Domain domain, bool allow_zero_hopf = false) {
    ValidationResult res;
    auto& bad = res.violations;

    if (f.is_zero()) {
        bad.push_back({ViolationCode::ZeroF, "f is identically zero", {}});
        return res;
    }
    if (hopf.is_zero() && !allow_zero_hopf)
        bad.push_back({ViolationCode::ZeroE, "E is identically zero (round sphere excluded)", {}});

    ComplexRational origin(0);
    if (f.order_at(origin) < 0)
        bad.push_back({ViolationCode::PoleAtOrigin, "f has a pole at z = 0", {}});
    if (!hopf.is_zero()) {
        RationalMap g = hopf / f;
        if (!g.is_zero() && g.order_at(origin) < 0)
            bad.push_back({ViolationCode::PoleAtOrigin, "E/f has a pole at z = 0", {}});
    }

    // E holomorphic on the domain
    if (hopf.den.degree() > 0) {
        if (domain == Domain::Plane) {
            bad.push_back({ViolationCode::PoleOfEInDomain, "E has poles but the domain is the plane", {}});
        } else {
            RootSet rs = find_roots(hopf.den);
            for (auto& [r, mult] : rs.exact) {
                (void)mult;
                if (r.norm2() < 1)
                    bad.push_back({ViolationCode::PoleOfEInDomain,
                                   "E has a pole inside the unit disk at " + to_string(r), to_cd(r)});
            }
            for (auto& [r, mult] : rs.numeric) {
                (void)mult;
                if (std::abs(r) < 1.0 - 1e-10)
                    bad.push_back({ViolationCode::PoleOfEInDomain, "E has a pole inside the unit disk", r});
            }
        }
    }

    // every pole and zero of f of even order
    auto check_even = [&](const QPoly& poly, const char* what) {
        for (auto& [factor, mult] : squarefree_decomposition(poly)) {
            if (mult % 2 == 0) continue;
            RootSet rs = find_roots(factor);
            for (auto& [r, m2] : rs.exact) {
                (void)m2;
                bad.push_back({ViolationCode::OddOrderAt,
                               std::string(what) + " of odd order " + std::to_string(mult) + " at " + to_string(r),
                               to_cd(r)});
            }
            for (auto& [r, m2] : rs.numeric) {
                (void)m2;
                bad.push_back({ViolationCode::OddOrderAt,
                               std::string(what) + " of odd order " + std::to_string(mult), r});
            }
        }
    };
    check_even(f.num, "zero of f");
    check_even(f.den, "pole of f");

    if (bad.empty()) res.potential = Potential{f, hopf, domain};
    return res;
}

}  // namespace cmclab
