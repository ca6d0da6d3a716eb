#include "gsparse/constraints.hpp"

#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "gsparse/error.hpp"

namespace gsparse {

Vec3 GridSpec::point(std::size_t flat) const {
    const auto n = points_per_axis();
    const std::size_t k = flat % n[2];
    const std::size_t j = (flat / n[2]) % n[1];
    const std::size_t i = flat / (n[1] * n[2]);
    return point(int(i), int(j), int(k));
}

std::vector<Vec3> GridSpec::points() const {
    std::vector<Vec3> out;
    out.reserve(point_count());
    const auto n = points_per_axis();
    for (std::size_t i = 0; i < n[0]; ++i)
        for (std::size_t j = 0; j < n[1]; ++j)
            for (std::size_t k = 0; k < n[2]; ++k) out.push_back(point(int(i), int(j), int(k)));
    return out;
}

GridSpec make_grid(const Box& box, double spacing) {
    require(spacing > 0.0 && std::isfinite(spacing), "grid spacing must be positive");
    GridSpec grid{box, {}};
    for (int a = 0; a < 3; ++a) {
        const double extent = box.max[a] - box.min[a];
        if (!(extent > 0.0) || !std::isfinite(extent))
            throw Error(ErrorKind::InvalidArgument, fmt::format("degenerate box along axis {}", a));
        // The small slack keeps exact multiples (1 / 0.5) from rounding up.
        const double cells = std::ceil(extent / spacing - 1e-9);
        if (cells > 1e6) throw Error(ErrorKind::InvalidArgument, "grid too fine");
        grid.counts[a] = std::max(2, int(cells));
    }
    return grid;
}

ConstraintSet select_constraints(const GaussianField& field, const GridSpec& grid, double band,
                                 const ExecPolicy& policy) {
    require(band > 0.0, "band must be positive");
    const std::vector<Vec3> pts = grid.points();
    const std::vector<double> phi = field(pts, policy);

    ConstraintSet out;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (std::abs(phi[i] - field.isovalue()) <= band) {
            out.points.push_back(pts[i]);
            out.targets.push_back(phi[i]);
        }
    }
    if (out.empty())
        throw Error(ErrorKind::EmptySelection,
                    "no grid point lies within the band around the isovalue; use a finer grid or a larger band");
    return out;
}

void write_constraints_csv(std::ostream& out, const ConstraintSet& constraints, const std::string& config_json) {
    if (!config_json.empty()) out << "# config: " << config_json << '\n';
    out << "x,y,z,phi\n";
    for (std::size_t k = 0; k < constraints.size(); ++k) {
        const Vec3& p = constraints.points[k];
        out << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g}\n", p.x(), p.y(), p.z(), constraints.targets[k]);
    }
}

}  // namespace gsparse
