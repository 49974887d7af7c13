#pragma once

#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>
#include <vector>

#include "cmclab/diagnostics.hpp"
#include "cmclab/grid.hpp"
#include "cmclab/gminus.hpp"
#include "cmclab/iwasawa.hpp"
#include "cmclab/sym_bobenko.hpp"

namespace cmclab {

struct MeshVertex {
    Cd z{0, 0};
    ImmersionPoint point;
    double mean_curvature = std::numeric_limits<double>::quiet_NaN();  // NaN on the lattice boundary
    double conformality_defect = std::numeric_limits<double>::quiet_NaN();
    double iwasawa_residual = 0;
    bool near_umbilic = false;
    bool near_end = false;
    bool interior = false;  // full finite-difference stencil available
};

struct SurfaceMesh {
    DomainGrid grid;
    double theta = 0;
    int trunc = 16;
    std::vector<MeshVertex> vertices;
    std::vector<std::array<int, 4>> faces;  // quads; {a,b,c,-1} are triangles

    // summary diagnostics over interior vertices
    double max_h_defect = 0;        // max |H_d + 1/2|
    double max_conformality = 0;    // max conformality defect
    double away_h_defect = 0;       // same, excluding near_end vertices
    double away_conformality = 0;
    double max_iwasawa_residual = 0;
    double max_tail_mass = 0;
    int failed_vertices = 0;        // factorization failures (excluded from mesh)
};

namespace meshdetail {

struct Lattice {
    int nu, nv;
    bool wrap_v = false;
    bool has_center = false;  // disk grids carry the center point separately
    std::vector<Cd> points;   // nu * nv, row-major (i * nv + j)
    std::vector<char> valid;
    Cd center{0, 0};
    double du = 0, dv = 0;
};

inline Lattice build_lattice(const DomainGrid& g) {
    Lattice lat;
    lat.nu = g.nu;
    lat.nv = g.nv;
    lat.points.resize(static_cast<size_t>(g.nu) * static_cast<size_t>(g.nv));
    lat.valid.assign(lat.points.size(), 1);
    switch (g.kind) {
        case DomainGrid::Kind::Rect: {
            lat.du = (g.corner1.real() - g.corner0.real()) / std::max(g.nu - 1, 1);
            lat.dv = (g.corner1.imag() - g.corner0.imag()) / std::max(g.nv - 1, 1);
            for (int i = 0; i < g.nu; ++i)
                for (int j = 0; j < g.nv; ++j)
                    lat.points[static_cast<size_t>(i) * g.nv + j] =
                        Cd(g.corner0.real() + i * lat.du, g.corner0.imag() + j * lat.dv);
            break;
        }
        case DomainGrid::Kind::Disk: {
            lat.wrap_v = true;
            lat.has_center = true;
            lat.center = g.center;
            lat.du = g.radius / g.nu;
            lat.dv = 2 * M_PI / g.nv;
            for (int i = 0; i < g.nu; ++i)
                for (int j = 0; j < g.nv; ++j)
                    lat.points[static_cast<size_t>(i) * g.nv + j] =
                        g.center + std::polar((i + 1) * lat.du, j * lat.dv);
            break;
        }
        case DomainGrid::Kind::Annulus: {
            lat.wrap_v = true;
            lat.du = (g.radius - g.inner_radius) / std::max(g.nu - 1, 1);
            lat.dv = 2 * M_PI / g.nv;
            for (int i = 0; i < g.nu; ++i)
                for (int j = 0; j < g.nv; ++j)
                    lat.points[static_cast<size_t>(i) * g.nv + j] =
                        g.center + std::polar(g.inner_radius + i * lat.du, j * lat.dv);
            break;
        }
    }
    for (size_t idx = 0; idx < lat.points.size(); ++idx)
        if (g.excludes(lat.points[idx])) lat.valid[idx] = 0;
    return lat;
}

// first/second fundamental forms in lattice parameters; H is
// parametrization invariant so lattice coordinates are as good as any
inline double mean_curvature_fd(const Vec3& pu, const Vec3& pv, const Vec3& puu, const Vec3& puv,
                                const Vec3& pvv, const Vec3& n) {
    double e1 = pu.dot(pu), f1 = pu.dot(pv), g1 = pv.dot(pv);
    double l2 = puu.dot(n), m2 = puv.dot(n), n2 = pvv.dot(n);
    double denom = 2 * (e1 * g1 - f1 * f1);
    if (std::abs(denom) < 1e-300) return std::numeric_limits<double>::quiet_NaN();
    return (e1 * n2 - 2 * f1 * m2 + g1 * l2) / denom;
}

}  // namespace meshdetail

struct BuildOptions {
    int jobs = 1;
    double umbilic_radius_steps = 2.0;  // flag vertices within this many steps of a zero of E
    double path_delta = 0;              // detour radius for paths; 0 = from the exclusions
    IwasawaOptions iwasawa;
};

// Runs integrate -> iwasawa -> sym_bobenko on every admissible lattice point
// and assembles faces between valid neighbours. Vertices whose factorization
// fails are dropped (counted in failed_vertices) rather than aborting the
// whole mesh; that only happens next to exclusion boundaries.
inline SurfaceMesh build_mesh(const Potential& p, const DomainGrid& grid, double theta, int trunc,
                              const BuildOptions& opt = {}) {
    SurfaceMesh mesh;
    mesh.grid = grid;
    mesh.theta = theta;
    mesh.trunc = trunc;

    meshdetail::Lattice lat = meshdetail::build_lattice(grid);
    size_t total = lat.points.size();
    bool any_valid = lat.has_center;
    for (char v : lat.valid) any_valid |= (v != 0);
    if (!any_valid) throw EmptyGridError();

    std::vector<Cd> umbilics;
    if (!p.hopf.is_zero() && p.hopf.num.degree() > 0) {
        RootSet rs = find_roots(p.hopf.num);
        for (auto& [r, m] : rs.exact) {
            (void)m;
            umbilics.push_back(to_cd(r));
        }
        for (auto& [r, m] : rs.numeric) {
            (void)m;
            umbilics.push_back(r);
        }
    }

    double path_delta = opt.path_delta;
    if (path_delta <= 0) {
        path_delta = 1e-2;
        for (const auto& e : grid.excluded) path_delta = std::max(path_delta, 0.9 * e.radius);
    }

    struct Slot {
        ImmersionPoint point;
        double residual = 0, tail = 0;
        bool ok = false;
    };
    std::vector<Slot> slots(total);
    Slot center_slot;

    std::atomic<size_t> cursor{0};
    std::atomic<int> failures{0};
    auto worker = [&]() {
        while (true) {
            size_t idx = cursor.fetch_add(1);
            if (idx > total) break;
            bool is_center = idx == total;  // one extra work item for the disk center
            if (is_center && !lat.has_center) continue;
            if (!is_center && !lat.valid[idx]) continue;
            Cd z = is_center ? lat.center : lat.points[idx];
            Slot& slot = is_center ? center_slot : slots[idx];
            try {
                HolomorphicFrame fr = integrate_gminus(p, z, trunc, path_delta);
                UnitaryFrame uf = iwasawa(fr, opt.iwasawa);
                slot.point = sym_bobenko(uf, theta, std::abs(p.f.eval_at(z)));
                slot.residual = uf.residual;
                slot.tail = fr.tail_mass;
                slot.ok = true;
            } catch (const Error&) {
                failures.fetch_add(1);
            }
        }
    };
    int jobs = std::max(1, opt.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    mesh.failed_vertices = failures.load();

    // vertex table in deterministic lattice order
    std::vector<int> vindex(total, -1);
    auto near_any = [&](Cd z, const std::vector<Cd>& pts, double r) {
        for (Cd q : pts)
            if (std::abs(z - q) <= r) return true;
        return false;
    };
    std::vector<Cd> end_centers;
    for (const auto& e : grid.excluded)
        if (e.near_end) end_centers.push_back(e.center);

    const double step = grid.step();
    for (size_t idx = 0; idx < total; ++idx) {
        if (!slots[idx].ok) continue;
        MeshVertex v;
        v.z = lat.points[idx];
        v.point = slots[idx].point;
        v.iwasawa_residual = slots[idx].residual;
        v.near_umbilic = near_any(v.z, umbilics, opt.umbilic_radius_steps * step);
        v.near_end = near_any(v.z, end_centers, 2.5 * std::max(1e-2, 2.0 * step));
        vindex[idx] = static_cast<int>(mesh.vertices.size());
        mesh.vertices.push_back(v);
        mesh.max_iwasawa_residual = std::max(mesh.max_iwasawa_residual, slots[idx].residual);
        mesh.max_tail_mass = std::max(mesh.max_tail_mass, slots[idx].tail);
    }
    int center_index = -1;
    if (lat.has_center && center_slot.ok) {
        MeshVertex v;
        v.z = lat.center;
        v.point = center_slot.point;
        v.iwasawa_residual = center_slot.residual;
        center_index = static_cast<int>(mesh.vertices.size());
        mesh.vertices.push_back(v);
    }

    // faces between valid lattice neighbours
    auto at = [&](int i, int j) -> int {
        if (lat.wrap_v) j = (j % lat.nv + lat.nv) % lat.nv;
        if (i < 0 || i >= lat.nu || j < 0 || j >= lat.nv) return -1;
        return vindex[static_cast<size_t>(i) * lat.nv + j];
    };
    int jmax = lat.wrap_v ? lat.nv : lat.nv - 1;
    for (int i = 0; i + 1 < lat.nu; ++i) {
        for (int j = 0; j < jmax; ++j) {
            int a = at(i, j), b = at(i + 1, j), c = at(i + 1, j + 1), d = at(i, j + 1);
            if (a >= 0 && b >= 0 && c >= 0 && d >= 0) mesh.faces.push_back({a, b, c, d});
        }
    }
    if (center_index >= 0) {
        for (int j = 0; j < jmax; ++j) {
            int a = at(0, j), b = at(0, j + 1);
            if (a >= 0 && b >= 0) mesh.faces.push_back({center_index, a, b, -1});
        }
    }

    // finite-difference diagnostics on the structured lattice
    auto point_of = [&](int i, int j) -> const ImmersionPoint* {
        int vi = at(i, j);
        return vi >= 0 ? &mesh.vertices[static_cast<size_t>(vi)].point : nullptr;
    };
    for (int i = 0; i < lat.nu; ++i) {
        for (int j = 0; j < lat.nv; ++j) {
            int vi = at(i, j);
            if (vi < 0) continue;
            const ImmersionPoint* xm = point_of(i - 1, j);
            const ImmersionPoint* xp = point_of(i + 1, j);
            const ImmersionPoint* ym = point_of(i, j - 1);
            const ImmersionPoint* yp = point_of(i, j + 1);
            const ImmersionPoint* pp = point_of(i + 1, j + 1);
            const ImmersionPoint* pm = point_of(i + 1, j - 1);
            const ImmersionPoint* mp = point_of(i - 1, j + 1);
            const ImmersionPoint* mm = point_of(i - 1, j - 1);
            if (!(xm && xp && ym && yp && pp && pm && mp && mm)) continue;
            MeshVertex& v = mesh.vertices[static_cast<size_t>(vi)];
            v.interior = true;
            const Vec3& c0 = v.point.position;
            Vec3 pu = (xp->position - xm->position) / (2 * lat.du);
            Vec3 pv = (yp->position - ym->position) / (2 * lat.dv);
            Vec3 puu = (xp->position - 2 * c0 + xm->position) / (lat.du * lat.du);
            Vec3 pvv = (yp->position - 2 * c0 + ym->position) / (lat.dv * lat.dv);
            Vec3 puv = (pp->position - pm->position - mp->position + mm->position) /
                       (4 * lat.du * lat.dv);
            v.mean_curvature = meshdetail::mean_curvature_fd(pu, pv, puu, puv, pvv, v.point.normal);
            if (std::isfinite(v.mean_curvature)) {
                double defect = std::abs(v.mean_curvature + 0.5);
                mesh.max_h_defect = std::max(mesh.max_h_defect, defect);
                if (!v.near_end) mesh.away_h_defect = std::max(mesh.away_h_defect, defect);
            }

            // conformality in the z coordinate needs more accurate first
            // derivatives than H does: fourth order on the wide stencil,
            // skipped (NaN) where that stencil is incomplete
            const ImmersionPoint* xm2 = point_of(i - 2, j);
            const ImmersionPoint* xp2 = point_of(i + 2, j);
            const ImmersionPoint* ym2 = point_of(i, j - 2);
            const ImmersionPoint* yp2 = point_of(i, j + 2);
            if (xm2 && xp2 && ym2 && yp2) {
                Vec3 pu4 = (xm2->position - 8 * xm->position + 8 * xp->position - xp2->position) /
                           (12 * lat.du);
                Vec3 pv4 = (ym2->position - 8 * ym->position + 8 * yp->position - yp2->position) /
                           (12 * lat.dv);
                // recover d/dx, d/dy from the lattice derivatives (identity
                // on rectangles, polar otherwise)
                Vec3 px = pu4, py = pv4;
                if (grid.kind != DomainGrid::Kind::Rect) {
                    double r = std::abs(v.z - grid.center);
                    double ang = std::arg(v.z - grid.center);
                    if (r > 1e-12) {
                        px = pu4 * std::cos(ang) - pv4 * (std::sin(ang) / r);
                        py = pu4 * std::sin(ang) + pv4 * (std::cos(ang) / r);
                    }
                }
                double a2 = px.squaredNorm(), b2 = py.squaredNorm(), ab = px.dot(py);
                double denom = 0.25 * (a2 + b2);
                double num = 0.25 * std::hypot(a2 - b2, 2 * ab);
                v.conformality_defect = denom > 1e-300 ? num / denom : 0.0;
                mesh.max_conformality = std::max(mesh.max_conformality, v.conformality_defect);
                if (!v.near_end)
                    mesh.away_conformality = std::max(mesh.away_conformality, v.conformality_defect);
            }
        }
    }
    return mesh;
}

// Standalone finite-difference mean curvature for externally supplied
// structured data; used by tests with synthetic meshes.
inline double discrete_mean_curvature(const std::array<Vec3, 9>& stencil, const Vec3& normal,
                                      double du, double dv) {
    // stencil order: center, x-, x+, y-, y+, ++, +-, -+, --
    const Vec3& c = stencil[0];
    Vec3 pu = (stencil[2] - stencil[1]) / (2 * du);
    Vec3 pv = (stencil[4] - stencil[3]) / (2 * dv);
    Vec3 puu = (stencil[2] - 2 * c + stencil[1]) / (du * du);
    Vec3 pvv = (stencil[4] - 2 * c + stencil[3]) / (dv * dv);
    Vec3 puv = (stencil[5] - stencil[6] - stencil[7] + stencil[8]) / (4 * du * dv);
    return meshdetail::mean_curvature_fd(pu, pv, puu, puv, pvv, normal);
}

}  // namespace cmclab
