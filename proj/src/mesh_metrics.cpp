#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "gsparse/error.hpp"
#include "gsparse/mesh.hpp"

namespace gsparse {

double mesh_area(const TriMesh& mesh) {
    double s = 0.0;
    for (const auto& t : mesh.triangles) {
        const Vec3& a = mesh.vertices[t[0]];
        s += (mesh.vertices[t[1]] - a).cross(mesh.vertices[t[2]] - a).norm();
    }
    return 0.5 * s;
}

double mesh_signed_volume(const TriMesh& mesh) {
    double s = 0.0;
    for (const auto& t : mesh.triangles) {
        const Vec3& a = mesh.vertices[t[0]];
        const Vec3& b = mesh.vertices[t[1]];
        const Vec3& c = mesh.vertices[t[2]];
        const Vec3 centroid = (a + b + c) / 3.0;
        s += (b - a).cross(c - a).dot(centroid);
    }
    return s / 6.0;
}

double mesh_volume(const TriMesh& mesh) { return std::abs(mesh_signed_volume(mesh)); }

SurfaceReport compare_meshes(const TriMesh& original, const TriMesh& ours, int samples_per_triangle,
                             const ExecPolicy& policy) {
    SurfaceReport r;
    r.area_original = mesh_area(original);
    r.area_ours = mesh_area(ours);
    r.error_area = std::abs(r.area_ours - r.area_original) / r.area_original;
    r.volume_original = mesh_volume(original);
    r.volume_ours = mesh_volume(ours);
    r.error_volume = std::abs(r.volume_ours - r.volume_original) / r.volume_original;
    r.hausdorff = hausdorff(original, ours, samples_per_triangle, policy);
    return r;
}

SurfaceReport compare_surfaces(const BatchField& original, const BatchField& ours, const Box& box, double spacing,
                               double isovalue, int samples_per_triangle, const ExecPolicy& policy) {
    const TriMesh a = extract_isosurface(original, box, spacing, isovalue);
    const TriMesh b = extract_isosurface(ours, box, spacing, isovalue);
    return compare_meshes(a, b, samples_per_triangle, policy);
}

double sparse_ratio(std::size_t n_erbf, std::size_t n_atom) {
    require(n_atom > 0, "sparse ratio needs at least one atom");
    return static_cast<double>(n_erbf) / static_cast<double>(n_atom);
}

void write_obj(std::ostream& out, const TriMesh& mesh, const std::string& header) {
    std::size_t start = 0;
    while (start < header.size()) {
        std::size_t end = header.find('\n', start);
        if (end == std::string::npos) end = header.size();
        out << "# " << header.substr(start, end - start) << '\n';
        start = end + 1;
    }
    for (const Vec3& v : mesh.vertices) out << fmt::format("v {:.17g} {:.17g} {:.17g}\n", v.x(), v.y(), v.z());
    for (const auto& t : mesh.triangles) out << fmt::format("f {} {} {}\n", t[0] + 1, t[1] + 1, t[2] + 1);
}

}  // namespace gsparse
