#pragma once

#include <functional>
#include <span>
#include <vector>

#include "gsparse/pqr.hpp"
#include "gsparse/types.hpp"

namespace gsparse {

/// Batch evaluator of a scalar field: writes f(points[i]) into values[i].
using BatchField = std::function<void(std::span<const Vec3> points, std::span<double> values)>;

/// phi(x) = sum_i exp(-d (|x - x_i|^2 - r_i^2)), the Gaussian molecular
/// surface is the level set phi = isovalue.
class GaussianField {
public:
    /// With `kernel_cutoff`, terms whose exponent is below -30 are skipped.
    GaussianField(const Molecule& molecule, double decay, double isovalue, bool kernel_cutoff = false);

    double decay() const { return decay_; }
    double isovalue() const { return isovalue_; }
    std::size_t atom_count() const { return centers_.size(); }

    double operator()(const Vec3& p) const;
    std::vector<double> operator()(std::span<const Vec3> points, const ExecPolicy& policy = {}) const;

    BatchField batch(const ExecPolicy& policy = {}) const;

private:
    std::vector<Vec3> centers_;
    std::vector<double> radius_sq_;
    double decay_;
    double isovalue_;
    bool cutoff_;
};

inline constexpr double kPaddingBeyondRadius = 3.0;

/// Max atom radius + 3 Å.
double default_padding(const Molecule& molecule);

/// Smallest box containing every atom sphere, grown by `padding` on all sides.
Box bounding_box(const Molecule& molecule, double padding);

}  // namespace gsparse
