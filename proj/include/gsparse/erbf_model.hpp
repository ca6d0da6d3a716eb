#pragma once

#include <span>
#include <vector>

#include "gsparse/constraints.hpp"
#include "gsparse/gauss_field.hpp"
#include "gsparse/types.hpp"

namespace gsparse {

/// Radians. Unbounded; the model is periodic in each angle.
struct RotationAngles {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
};

/// R = Rz(gamma) * Ry(beta) * Rx(alpha), where Ry carries -sin(beta) in row 0,
/// column 2 (the transpose of the usual right-handed y rotation).
Mat3 rotation_matrix(const RotationAngles& angles);

/// One anisotropic Gaussian c~^2 * exp(-sum_p d~_p^2 u_p^2), u = R (y - center).
/// The square-root variables are the optimisation unknowns, so the effective
/// weight and decays are non-negative by construction.
struct EllipsoidRbf {
    double coeff_sqrt = 0.0;
    Vec3 decay_sqrt = Vec3::Zero();
    Vec3 center = Vec3::Zero();
    RotationAngles angles;

    double weight() const { return coeff_sqrt * coeff_sqrt; }
    Vec3 decays() const { return decay_sqrt.cwiseProduct(decay_sqrt); }
};

struct RbfModel {
    std::vector<EllipsoidRbf> bases;

    std::size_t size() const { return bases.size(); }
    bool empty() const { return bases.empty(); }
};

double eval_basis(const EllipsoidRbf& basis, const Vec3& point);
double eval_model(const RbfModel& model, const Vec3& point);
std::vector<double> eval_model(const RbfModel& model, std::span<const Vec3> points, const ExecPolicy& policy = {});
BatchField model_field(const RbfModel& model, const ExecPolicy& policy = {});

// Packed layout, N bases, 10N entries:
//   [c~ (N) | d~ axis 0 (N) | d~ axis 1 (N) | d~ axis 2 (N) |
//    centers xyz-interleaved (3N) | alpha (N) | beta (N) | gamma (N)]
inline constexpr std::size_t kParamsPerBasis = 10;

std::vector<double> pack_parameters(const RbfModel& model);
RbfModel unpack_parameters(std::span<const double> packed, std::size_t basis_count);

struct ObjectiveWeights {
    double accuracy = 1.0;  // w_s
    double sparsity = 0.0;  // w_l
};

/// Gradient of w_s * E_s + w_l * E_l1 over the packed parameters.
std::vector<double> eval_model_gradient(const RbfModel& model, const ConstraintSet& constraints,
                                        ObjectiveWeights weights, const ExecPolicy& policy = {});

}  // namespace gsparse
