#include "gsparse/objective.hpp"

#include <algorithm>
#include <cmath>

#include "gsparse/error.hpp"
#include "parallel.hpp"

namespace gsparse {

namespace {

struct BasisView {
    Mat3 rot, d_alpha, d_beta, d_gamma;
    Vec3 center;
    Vec3 decay_sqrt;
    Vec3 decays;
    double coeff_sqrt;
    double weight;
};

BasisView view(std::span<const double> x, std::size_t n, std::size_t i, bool with_derivatives) {
    BasisView b;
    b.coeff_sqrt = x[i];
    b.weight = b.coeff_sqrt * b.coeff_sqrt;
    for (int p = 0; p < 3; ++p) b.decay_sqrt[p] = x[(1 + p) * n + i];
    b.decays = b.decay_sqrt.cwiseProduct(b.decay_sqrt);
    b.center = Vec3(x[4 * n + 3 * i], x[4 * n + 3 * i + 1], x[4 * n + 3 * i + 2]);

    const double al = x[7 * n + i], be = x[8 * n + i], ga = x[9 * n + i];
    const double ca = std::cos(al), sa = std::sin(al);
    const double cb = std::cos(be), sb = std::sin(be);
    const double cg = std::cos(ga), sg = std::sin(ga);
    Mat3 rx, ry, rz;
    rx << 1, 0, 0, 0, ca, -sa, 0, sa, ca;
    ry << cb, 0, -sb, 0, 1, 0, sb, 0, cb;
    rz << cg, -sg, 0, sg, cg, 0, 0, 0, 1;
    b.rot = rz * ry * rx;
    if (with_derivatives) {
        Mat3 drx, dry, drz;
        drx << 0, 0, 0, 0, -sa, -ca, 0, ca, -sa;
        dry << -sb, 0, -cb, 0, 0, 0, cb, 0, -sb;
        drz << -sg, -cg, 0, cg, -sg, 0, 0, 0, 0;
        b.d_alpha = rz * ry * drx;
        b.d_beta = rz * dry * rx;
        b.d_gamma = drz * ry * rx;
    }
    return b;
}

std::vector<BasisView> views(std::span<const double> x, std::size_t n, bool with_derivatives) {
    require(x.size() == kParamsPerBasis * n, "packed parameter length does not match basis count");
    std::vector<BasisView> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(view(x, n, i, with_derivatives));
    return out;
}

}  // namespace

Objective::Objective(const ConstraintSet& constraints, ExecPolicy policy)
    : constraints_(&constraints), policy_(policy) {
    require(!constraints.empty(), "objective needs at least one constraint");
}

double Objective::sparsity_term(std::span<const double> x, std::size_t n) {
    double sum = 0.0;
    for (std::size_t j = 0; j < 4 * n; ++j) sum += x[j] * x[j];
    return sum;
}

Objective::Terms Objective::terms(std::span<const double> x, std::size_t n) const {
    const auto bases = views(x, n, false);
    const auto& pts = constraints_->points;
    const auto& tgt = constraints_->targets;
    const std::size_t blocks = detail::block_count(pts.size(), policy_);
    std::vector<double> sq(blocks, 0.0), mx(blocks, 0.0);
    detail::for_each_block(pts.size(), policy_, [&](std::size_t blk, std::size_t begin, std::size_t end) {
        double s = 0.0, m = 0.0;
        for (std::size_t k = begin; k < end; ++k) {
            double model = 0.0;
            for (const auto& b : bases) {
                const Vec3 u = b.rot * (pts[k] - b.center);
                model += b.weight * std::exp(-b.decays.dot(u.cwiseProduct(u)));
            }
            const double r = model - tgt[k];
            s += r * r;
            m = std::max(m, std::abs(r));
        }
        sq[blk] = s;
        mx[blk] = m;
    });
    Terms t;
    for (std::size_t b = 0; b < blocks; ++b) {
        t.accuracy += sq[b];
        t.max_error = std::max(t.max_error, mx[b]);
    }
    t.sparsity = sparsity_term(x, n);
    return t;
}

double Objective::value(std::span<const double> x, std::size_t n, ObjectiveWeights w) const {
    const Terms t = terms(x, n);
    return w.accuracy * t.accuracy + w.sparsity * t.sparsity;
}

double Objective::value_and_gradient(std::span<const double> x, std::size_t n, ObjectiveWeights w,
                                     std::span<double> grad) const {
    require(grad.size() == x.size(), "gradient buffer has the wrong length");
    const auto bases = views(x, n, true);
    const auto& pts = constraints_->points;
    const auto& tgt = constraints_->targets;
    const std::size_t blocks = detail::block_count(pts.size(), policy_);
    std::vector<std::vector<double>> partial(blocks);
    std::vector<double> sq(blocks, 0.0);

    detail::for_each_block(pts.size(), policy_, [&](std::size_t blk, std::size_t begin, std::size_t end) {
        std::vector<double> g(x.size(), 0.0);
        std::vector<Vec3> delta(n), u(n);
        std::vector<double> e(n);
        double s = 0.0;
        for (std::size_t k = begin; k < end; ++k) {
            double model = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const auto& b = bases[i];
                delta[i] = pts[k] - b.center;
                u[i] = b.rot * delta[i];
                e[i] = std::exp(-b.decays.dot(u[i].cwiseProduct(u[i])));
                model += b.weight * e[i];
            }
            const double r = model - tgt[k];
            s += r * r;
            // d(r^2)/d(basis value) = 2r
            const double dr = 2.0 * r;
            for (std::size_t i = 0; i < n; ++i) {
                const auto& b = bases[i];
                const double ge = dr * b.weight * e[i];
                g[i] += dr * 2.0 * b.coeff_sqrt * e[i];
                for (int p = 0; p < 3; ++p) g[(1 + p) * n + i] -= ge * 2.0 * b.decay_sqrt[p] * u[i][p] * u[i][p];
                // dq/du = 2 S u; du/dx = -R; du/dangle = dR * delta
                const Vec3 v = 2.0 * b.decays.cwiseProduct(u[i]);
                const Vec3 gx = ge * (b.rot.transpose() * v);
                g[4 * n + 3 * i] += gx[0];
                g[4 * n + 3 * i + 1] += gx[1];
                g[4 * n + 3 * i + 2] += gx[2];
                g[7 * n + i] -= ge * v.dot(b.d_alpha * delta[i]);
                g[8 * n + i] -= ge * v.dot(b.d_beta * delta[i]);
                g[9 * n + i] -= ge * v.dot(b.d_gamma * delta[i]);
            }
        }
        sq[blk] = s;
        partial[blk] = std::move(g);
    });

    std::fill(grad.begin(), grad.end(), 0.0);
    double es = 0.0;
    for (std::size_t blk = 0; blk < blocks; ++blk) {
        es += sq[blk];
        for (std::size_t j = 0; j < grad.size(); ++j) grad[j] += partial[blk][j];
    }
    for (double& gj : grad) gj *= w.accuracy;
    for (std::size_t j = 0; j < 4 * n; ++j) grad[j] += w.sparsity * 2.0 * x[j];
    return w.accuracy * es + w.sparsity * sparsity_term(x, n);
}

}  // namespace gsparse
