#pragma once

#include <cstdio>
#include <fstream>
#include <string>

#include "cmclab/errors.hpp"
#include "cmclab/mesh.hpp"

namespace cmclab {

enum class MeshFormat { OBJ, PLY };

namespace meshio {

inline std::string fmt9(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

// split a quad along its shorter diagonal; triangles pass through
inline std::vector<std::array<int, 3>> triangulate(const SurfaceMesh& mesh) {
    std::vector<std::array<int, 3>> tris;
    tris.reserve(mesh.faces.size() * 2);
    for (const auto& f : mesh.faces) {
        if (f[3] < 0) {
            tris.push_back({f[0], f[1], f[2]});
            continue;
        }
        const Vec3& a = mesh.vertices[static_cast<size_t>(f[0])].point.position;
        const Vec3& b = mesh.vertices[static_cast<size_t>(f[1])].point.position;
        const Vec3& c = mesh.vertices[static_cast<size_t>(f[2])].point.position;
        const Vec3& d = mesh.vertices[static_cast<size_t>(f[3])].point.position;
        if ((c - a).squaredNorm() <= (d - b).squaredNorm()) {
            tris.push_back({f[0], f[1], f[2]});
            tris.push_back({f[0], f[2], f[3]});
        } else {
            tris.push_back({f[0], f[1], f[3]});
            tris.push_back({f[1], f[2], f[3]});
        }
    }
    return tris;
}

}  // namespace meshio

// OBJ: v/vn lines with 9 significant digits, faces as f i//i j//j k//k with
// 1-based indices, LF endings. PLY: ascii 1.0, float vertex properties
// x y z nx ny nz plus the triangulated face list.
inline void export_mesh(const SurfaceMesh& mesh, MeshFormat format, const std::string& path) {
    if (mesh.vertices.empty()) throw EmptyGridError();
    std::ofstream out(path, std::ios::binary);  // binary: keep LF on every platform
    if (!out) throw IoError(path);
    auto tris = meshio::triangulate(mesh);
    if (format == MeshFormat::OBJ) {
        for (const auto& v : mesh.vertices) {
            const Vec3& p = v.point.position;
            out << "v " << meshio::fmt9(p.x()) << " " << meshio::fmt9(p.y()) << " "
                << meshio::fmt9(p.z()) << "\n";
        }
        for (const auto& v : mesh.vertices) {
            const Vec3& n = v.point.normal;
            out << "vn " << meshio::fmt9(n.x()) << " " << meshio::fmt9(n.y()) << " "
                << meshio::fmt9(n.z()) << "\n";
        }
        for (const auto& t : tris)
            out << "f " << t[0] + 1 << "//" << t[0] + 1 << " " << t[1] + 1 << "//" << t[1] + 1
                << " " << t[2] + 1 << "//" << t[2] + 1 << "\n";
    } else {
        out << "ply\nformat ascii 1.0\n";
        out << "element vertex " << mesh.vertices.size() << "\n";
        out << "property float x\nproperty float y\nproperty float z\n";
        out << "property float nx\nproperty float ny\nproperty float nz\n";
        out << "element face " << tris.size() << "\n";
        out << "property list uchar int vertex_indices\n";
        out << "end_header\n";
        for (const auto& v : mesh.vertices) {
            const Vec3& p = v.point.position;
            const Vec3& n = v.point.normal;
            out << meshio::fmt9(p.x()) << " " << meshio::fmt9(p.y()) << " " << meshio::fmt9(p.z())
                << " " << meshio::fmt9(n.x()) << " " << meshio::fmt9(n.y()) << " "
                << meshio::fmt9(n.z()) << "\n";
        }
        for (const auto& t : tris) out << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
    }
    if (!out) throw IoError(path);
}

// Sidecar report with per-mesh diagnostics, deterministic key=value lines.
inline void write_mesh_report(const SurfaceMesh& mesh, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path);
    out << "vertices = " << mesh.vertices.size() << "\n";
    out << "faces = " << mesh.faces.size() << "\n";
    out << "failed_vertices = " << mesh.failed_vertices << "\n";
    out << "theta = " << meshio::fmt9(mesh.theta) << "\n";
    out << "truncation = " << mesh.trunc << "\n";
    out << "max_h_defect = " << meshio::fmt9(mesh.max_h_defect) << "\n";
    out << "max_conformality_defect = " << meshio::fmt9(mesh.max_conformality) << "\n";
    out << "away_h_defect = " << meshio::fmt9(mesh.away_h_defect) << "\n";
    out << "away_conformality_defect = " << meshio::fmt9(mesh.away_conformality) << "\n";
    out << "max_iwasawa_residual = " << meshio::fmt9(mesh.max_iwasawa_residual) << "\n";
    out << "max_tail_mass = " << meshio::fmt9(mesh.max_tail_mass) << "\n";
    int umb = 0, ends = 0;
    for (const auto& v : mesh.vertices) {
        umb += v.near_umbilic ? 1 : 0;
        ends += v.near_end ? 1 : 0;
    }
    out << "near_umbilic_vertices = " << umb << "\n";
    out << "near_end_vertices = " << ends << "\n";
}

}  // namespace cmclab
