#pragma once

#include <cmath>
#include <vector>

#include "cmclab/classify.hpp"
#include "cmclab/potential.hpp"
#include "cmclab/roots.hpp"

namespace cmclab {

struct ExclusionDisk {
    Cd center{0, 0};
    double radius = 0;
    bool near_end = false;  // smooth singularity: the mesh approaches it
};

// Sampling specification for the parameter lattice. Disk and annulus grids
// are polar (nu radial x nv angular, angular direction wraps); rectangles is
// a cartesian nu x nv lattice.
struct DomainGrid {
    enum class Kind { Rect, Disk, Annulus } kind = Kind::Rect;
    Cd center{0, 0};             // Disk, Annulus
    double radius = 1;           // outer radius
    double inner_radius = 0;     // Annulus
    Cd corner0{-1, -1}, corner1{1, 1};
    int nu = 32, nv = 32;
    std::vector<ExclusionDisk> excluded;

    double step() const {
        switch (kind) {
            case Kind::Rect:
                return std::max(std::abs(corner1.real() - corner0.real()) / std::max(nu - 1, 1),
                                std::abs(corner1.imag() - corner0.imag()) / std::max(nv - 1, 1));
            case Kind::Disk:
                return std::max(radius / std::max(nu, 1), 2 * M_PI * radius / std::max(nv, 1));
            case Kind::Annulus:
                return std::max((radius - inner_radius) / std::max(nu - 1, 1),
                                2 * M_PI * radius / std::max(nv, 1));
        }
        return 0;
    }

    bool excludes(Cd z) const {
        for (const auto& e : excluded)
            if (std::abs(z - e.center) < e.radius) return true;
        return false;
    }
};

// Classifies the potential and inserts exclusion disks of radius
// max(10^-2, 2 * grid step) around every singular point of f. Smooth
// singularities keep the near_end flag so the mesh walks up to them;
// non-smooth or branch ones are plain holes. Umbilics (zeros of E alone) are
// sampled normally.
inline DomainGrid sample_domain(DomainGrid spec, const Potential& p) {
    spec.excluded.clear();
    const double delta = std::max(1e-2, 2.0 * spec.step());
    for (const auto& v : classify_all(p)) {
        ExclusionDisk d;
        d.center = v.location;
        d.radius = delta;
        d.near_end = v.smooth;
        spec.excluded.push_back(d);
    }
    // poles of E (possible outside the domain of validity, but the lattice
    // may still touch them on rectangles): keep the integrator away
    if (p.hopf.den.degree() > 0) {
        RootSet rs = find_roots(p.hopf.den);
        for (auto& [r, m] : rs.exact) {
            (void)m;
            spec.excluded.push_back({to_cd(r), delta, false});
        }
        for (auto& [r, m] : rs.numeric) {
            (void)m;
            spec.excluded.push_back({r, delta, false});
        }
    }
    return spec;
}

}  // namespace cmclab
