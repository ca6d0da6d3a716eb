#include <cmath>
#include <limits>

#include "gsparse/constraints.hpp"
#include "gsparse/error.hpp"
#include "gsparse/mesh.hpp"
#include "mc_tables.hpp"

namespace gsparse {

TriMesh extract_isosurface(const BatchField& field, const Box& box, double spacing, double isovalue) {
    const GridSpec grid = make_grid(box, spacing);
    const auto n = grid.points_per_axis();
    const std::vector<Vec3> pts = grid.points();
    std::vector<double> val(pts.size());
    field(pts, val);

    auto index = [&](std::size_t i, std::size_t j, std::size_t k) { return (i * n[1] + j) * n[2] + k; };

    TriMesh mesh;
    // One vertex per crossed grid edge, keyed by (min-corner point, axis).
    std::vector<std::uint32_t> edge_vertex(3 * pts.size(), std::numeric_limits<std::uint32_t>::max());

    auto vertex_on = [&](std::size_t p0, std::size_t p1, int axis) -> std::uint32_t {
        std::uint32_t& slot = edge_vertex[3 * p0 + axis];
        if (slot != std::numeric_limits<std::uint32_t>::max()) return slot;
        const double v0 = val[p0], v1 = val[p1];
        const double t = (v1 == v0) ? 0.5 : (isovalue - v0) / (v1 - v0);
        slot = static_cast<std::uint32_t>(mesh.vertices.size());
        mesh.vertices.push_back(pts[p0] + t * (pts[p1] - pts[p0]));
        return slot;
    };

    for (std::size_t i = 0; i + 1 < n[0]; ++i) {
        for (std::size_t j = 0; j + 1 < n[1]; ++j) {
            for (std::size_t k = 0; k + 1 < n[2]; ++k) {
                std::size_t corner[8];
                int cube = 0;
                for (int c = 0; c < 8; ++c) {
                    const auto& o = detail::kCornerOffset[c];
                    corner[c] = index(i + o[0], j + o[1], k + o[2]);
                    if (val[corner[c]] < isovalue) cube |= 1 << c;
                }
                const int edges = detail::kEdgeTable[cube];
                if (edges == 0) continue;

                std::uint32_t vid[12];
                for (int e = 0; e < 12; ++e) {
                    if (!(edges & (1 << e))) continue;
                    std::size_t a = corner[detail::kEdgeCorners[e][0]];
                    std::size_t b = corner[detail::kEdgeCorners[e][1]];
                    if (a > b) std::swap(a, b);
                    const int axis = (b - a == 1) ? 2 : (b - a == n[2]) ? 1 : 0;
                    vid[e] = vertex_on(a, b, axis);
                }
                const auto& tri = detail::kTriTable[cube];
                for (int t = 0; tri[t] != -1; t += 3) {
                    // The table winds triangles with normals toward the
                    // corners flagged as below the isovalue.
                    mesh.triangles.push_back({vid[tri[t]], vid[tri[t + 1]], vid[tri[t + 2]]});
                }
            }
        }
    }
    if (mesh.empty()) throw Error(ErrorKind::EmptyMesh, "isovalue is not crossed anywhere inside the box");
    return mesh;
}

}  // namespace gsparse
