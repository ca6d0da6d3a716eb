#include "gsparse/erbf_model.hpp"

#include <cmath>

#include "gsparse/error.hpp"
#include "gsparse/objective.hpp"
#include "parallel.hpp"

namespace gsparse {

Mat3 rotation_matrix(const RotationAngles& angles) {
    const double ca = std::cos(angles.alpha), sa = std::sin(angles.alpha);
    const double cb = std::cos(angles.beta), sb = std::sin(angles.beta);
    const double cg = std::cos(angles.gamma), sg = std::sin(angles.gamma);
    Mat3 rx, ry, rz;
    rx << 1, 0, 0,
          0, ca, -sa,
          0, sa, ca;
    ry << cb, 0, -sb,
          0, 1, 0,
          sb, 0, cb;
    rz << cg, -sg, 0,
          sg, cg, 0,
          0, 0, 1;
    return rz * ry * rx;
}

double eval_basis(const EllipsoidRbf& basis, const Vec3& point) {
    const Vec3 u = rotation_matrix(basis.angles) * (point - basis.center);
    const double q = basis.decays().dot(u.cwiseProduct(u));
    return basis.weight() * std::exp(-q);
}

double eval_model(const RbfModel& model, const Vec3& point) {
    double sum = 0.0;
    for (const auto& b : model.bases) sum += eval_basis(b, point);
    return sum;
}

namespace {

// Per-basis quantities hoisted out of the point loop.
struct PreparedBasis {
    Mat3 rot;
    Vec3 center;
    Vec3 decays;
    double weight;
};

std::vector<PreparedBasis> prepare(const RbfModel& model) {
    std::vector<PreparedBasis> out;
    out.reserve(model.size());
    for (const auto& b : model.bases) out.push_back({rotation_matrix(b.angles), b.center, b.decays(), b.weight()});
    return out;
}

double eval_prepared(const std::vector<PreparedBasis>& bases, const Vec3& p) {
    double sum = 0.0;
    for (const auto& b : bases) {
        const Vec3 u = b.rot * (p - b.center);
        sum += b.weight * std::exp(-b.decays.dot(u.cwiseProduct(u)));
    }
    return sum;
}

}  // namespace

std::vector<double> eval_model(const RbfModel& model, std::span<const Vec3> points, const ExecPolicy& policy) {
    const auto bases = prepare(model);
    std::vector<double> out(points.size());
    detail::parallel_for(points.size(), policy, [&](std::size_t k) { out[k] = eval_prepared(bases, points[k]); });
    return out;
}

BatchField model_field(const RbfModel& model, const ExecPolicy& policy) {
    return [bases = prepare(model), policy](std::span<const Vec3> points, std::span<double> values) {
        detail::parallel_for(points.size(), policy,
                             [&](std::size_t k) { values[k] = eval_prepared(bases, points[k]); });
    };
}

std::vector<double> pack_parameters(const RbfModel& model) {
    const std::size_t n = model.size();
    std::vector<double> x(kParamsPerBasis * n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& b = model.bases[i];
        x[i] = b.coeff_sqrt;
        for (int p = 0; p < 3; ++p) x[(1 + p) * n + i] = b.decay_sqrt[p];
        for (int a = 0; a < 3; ++a) x[4 * n + 3 * i + a] = b.center[a];
        x[7 * n + i] = b.angles.alpha;
        x[8 * n + i] = b.angles.beta;
        x[9 * n + i] = b.angles.gamma;
    }
    return x;
}

RbfModel unpack_parameters(std::span<const double> x, std::size_t n) {
    require(x.size() == kParamsPerBasis * n, "packed parameter length does not match basis count");
    RbfModel model;
    model.bases.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto& b = model.bases[i];
        b.coeff_sqrt = x[i];
        for (int p = 0; p < 3; ++p) b.decay_sqrt[p] = x[(1 + p) * n + i];
        for (int a = 0; a < 3; ++a) b.center[a] = x[4 * n + 3 * i + a];
        b.angles = {x[7 * n + i], x[8 * n + i], x[9 * n + i]};
    }
    return model;
}

std::vector<double> eval_model_gradient(const RbfModel& model, const ConstraintSet& constraints,
                                        ObjectiveWeights weights, const ExecPolicy& policy) {
    require(!model.empty(), "gradient of an empty model");
    require(!constraints.empty(), "gradient over an empty constraint set");
    const auto x = pack_parameters(model);
    std::vector<double> grad(x.size());
    Objective(constraints, policy).value_and_gradient(x, model.size(), weights, grad);
    return grad;
}

}  // namespace gsparse
