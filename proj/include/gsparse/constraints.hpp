#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "gsparse/gauss_field.hpp"
#include "gsparse/types.hpp"

namespace gsparse {

/// Uniform grid over `box`: counts[a] intervals per axis, i.e. counts[a] + 1
/// points from box.min to box.max inclusive.
struct GridSpec {
    Box box;
    std::array<int, 3> counts{2, 2, 2};

    std::array<std::size_t, 3> points_per_axis() const {
        return {std::size_t(counts[0]) + 1, std::size_t(counts[1]) + 1, std::size_t(counts[2]) + 1};
    }
    std::size_t point_count() const {
        auto n = points_per_axis();
        return n[0] * n[1] * n[2];
    }
    double coordinate(int axis, int index) const {
        return box.min[axis] + index * ((box.max[axis] - box.min[axis]) / counts[axis]);
    }
    Vec3 point(int i, int j, int k) const { return {coordinate(0, i), coordinate(1, j), coordinate(2, k)}; }
    /// Point with flat index in (i, j, k) lexicographic order, k fastest.
    Vec3 point(std::size_t flat) const;
    /// Every grid point in lexicographic order.
    std::vector<Vec3> points() const;
};

/// counts = max(2, ceil(extent / spacing)) per axis.
GridSpec make_grid(const Box& box, double spacing);

/// Near-surface points y_k with cached targets phi(y_k).
struct ConstraintSet {
    std::vector<Vec3> points;
    std::vector<double> targets;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
};

/// Grid points with |phi(p) - isovalue| <= band, in lexicographic order.
ConstraintSet select_constraints(const GaussianField& field, const GridSpec& grid, double band,
                                 const ExecPolicy& policy = {});

/// CSV dump, one `x,y,z,phi` line per point, after an optional `# config:` line.
void write_constraints_csv(std::ostream& out, const ConstraintSet& constraints, const std::string& config_json = {});

}  // namespace gsparse
