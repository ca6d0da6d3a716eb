#include "gsparse/gauss_field.hpp"

#include <algorithm>
#include <cmath>

#include "gsparse/error.hpp"
#include "parallel.hpp"

namespace gsparse {

namespace {
constexpr double kCutoffExponent = -30.0;
}

GaussianField::GaussianField(const Molecule& molecule, double decay, double isovalue, bool kernel_cutoff)
    : decay_(decay), isovalue_(isovalue), cutoff_(kernel_cutoff) {
    require(decay > 0.0 && std::isfinite(decay), "decay must be positive");
    require(isovalue > 0.0 && std::isfinite(isovalue), "isovalue must be positive");
    centers_.reserve(molecule.size());
    radius_sq_.reserve(molecule.size());
    for (const Atom& a : molecule.atoms()) {
        centers_.push_back(a.center);
        radius_sq_.push_back(a.radius * a.radius);
    }
}

double GaussianField::operator()(const Vec3& p) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < centers_.size(); ++i) {
        const double e = -decay_ * ((p - centers_[i]).squaredNorm() - radius_sq_[i]);
        if (cutoff_ && e < kCutoffExponent) continue;
        sum += std::exp(e);
    }
    return sum;
}

std::vector<double> GaussianField::operator()(std::span<const Vec3> points, const ExecPolicy& policy) const {
    std::vector<double> out(points.size());
    detail::parallel_for(points.size(), policy, [&](std::size_t i) { out[i] = (*this)(points[i]); });
    return out;
}

BatchField GaussianField::batch(const ExecPolicy& policy) const {
    return [field = *this, policy](std::span<const Vec3> points, std::span<double> values) {
        detail::parallel_for(points.size(), policy, [&](std::size_t i) { values[i] = field(points[i]); });
    };
}

double default_padding(const Molecule& molecule) {
    double rmax = 0.0;
    for (const Atom& a : molecule.atoms()) rmax = std::max(rmax, a.radius);
    return rmax + kPaddingBeyondRadius;
}

Box bounding_box(const Molecule& molecule, double padding) {
    require(padding >= 0.0, "padding must be non-negative");
    Box box;
    box.min = Vec3::Constant(std::numeric_limits<double>::infinity());
    box.max = -box.min;
    for (const Atom& a : molecule.atoms()) {
        const Vec3 r = Vec3::Constant(a.radius + padding);
        box.min = box.min.cwiseMin(a.center - r);
        box.max = box.max.cwiseMax(a.center + r);
    }
    return box;
}

}  // namespace gsparse
