#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gsparse/gauss_field.hpp"
#include "gsparse/types.hpp"

namespace gsparse {

struct TriMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<std::uint32_t, 3>> triangles;

    std::size_t triangle_count() const { return triangles.size(); }
    bool empty() const { return triangles.empty(); }
};

/// Marching cubes over make_grid(box, spacing) with linear interpolation
/// along cell edges. Triangles wind so that normals point toward decreasing
/// field values. Throws EmptyMesh if the isovalue is never crossed.
TriMesh extract_isosurface(const BatchField& field, const Box& box, double spacing, double isovalue);

/// Sum of triangle areas, Å^2.
double mesh_area(const TriMesh& mesh);
/// Divergence-theorem volume; positive for outward winding.
double mesh_signed_volume(const TriMesh& mesh);
/// |signed volume|, Å^3.
double mesh_volume(const TriMesh& mesh);

inline constexpr int kDefaultHausdorffSamples = 10;

/// Symmetric Hausdorff estimate. Each mesh is sampled at its vertices plus
/// `samples_per_triangle` points per face (a nested low-discrepancy set, so a
/// larger count only adds samples); each sample's exact distance to the
/// other mesh is taken.
double hausdorff(const TriMesh& a, const TriMesh& b, int samples_per_triangle = kDefaultHausdorffSamples,
                 const ExecPolicy& policy = {});

/// Directed part: max over samples of `from` of the distance to `to`.
double directed_hausdorff(const TriMesh& from, const TriMesh& to, int samples_per_triangle = kDefaultHausdorffSamples,
                          const ExecPolicy& policy = {});

struct SurfaceReport {
    double area_original = 0.0;
    double area_ours = 0.0;
    double error_area = 0.0;
    double volume_original = 0.0;
    double volume_ours = 0.0;
    double error_volume = 0.0;
    double hausdorff = 0.0;
};

SurfaceReport compare_meshes(const TriMesh& original, const TriMesh& ours,
                             int samples_per_triangle = kDefaultHausdorffSamples, const ExecPolicy& policy = {});

/// Meshes both fields on the same grid and fills every report column.
SurfaceReport compare_surfaces(const BatchField& original, const BatchField& ours, const Box& box, double spacing,
                               double isovalue, int samples_per_triangle = kDefaultHausdorffSamples,
                               const ExecPolicy& policy = {});

/// N_ERBF / N_ATOM.
double sparse_ratio(std::size_t n_erbf, std::size_t n_atom);

/// OBJ text, 1-based face indices. `header` lines are written as comments.
void write_obj(std::ostream& out, const TriMesh& mesh, const std::string& header = {});

}  // namespace gsparse
