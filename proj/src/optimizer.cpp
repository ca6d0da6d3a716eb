#include "gsparse/optimizer.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "gsparse/objective.hpp"

namespace gsparse {

void OptimizerConfig::validate() const {
    require(max_iter >= 0, "max_iter must be non-negative");
    require(sparse_iter >= 0 && sparse_iter <= max_iter, "sparse_iter must lie in [0, max_iter]");
    require(prune_tol > 0.0, "prune_tol must be positive");
    require(prune_interval > 0, "prune_interval must be positive");
    require(epsilon_floor > 0.0, "epsilon_floor must be positive");
    require(max_error_cap > 0.0, "max_error_cap must be positive");
    require(line_search.armijo_c1 > 0.0 && line_search.armijo_c1 < 1.0, "Armijo constant must lie in (0, 1)");
    require(line_search.shrink > 0.0 && line_search.shrink < 1.0, "shrink factor must lie in (0, 1)");
    require(line_search.growth >= 1.0, "growth factor must be >= 1");
    require(line_search.initial_step > 0.0, "initial step must be positive");
    require(line_search.max_backtracks > 0, "max_backtracks must be positive");
}

std::size_t IterationTrace::stalls() const {
    return std::count_if(records.begin(), records.end(), [](const TraceRecord& r) { return r.stalled; });
}

EnergyTerms energy_terms(const RbfModel& model, const ConstraintSet& constraints, const ExecPolicy& policy) {
    const auto x = pack_parameters(model);
    const auto t = Objective(constraints, policy).terms(x, model.size());
    return {t.accuracy, t.sparsity};
}

ObjectiveWeights adaptive_weights(double es, double el1, double epsilon_floor) {
    require(es >= 0.0 && el1 >= 0.0, "energy terms must be non-negative");
    const double total = es + el1;
    if (total == 0.0) return {epsilon_floor, 0.0};
    return {std::max(es / total, epsilon_floor), el1 / total};
}

ObjectiveWeights iteration_weights(double es, double el1, double max_error, int iter, const OptimizerConfig& config) {
    ObjectiveWeights w = adaptive_weights(es, el1, config.epsilon_floor);
    if (max_error > config.max_error_cap) w = {1.0, 0.0};
    if (iter > config.sparse_iter) w = {1.0, 0.0};
    return w;
}

RbfModel prune(const RbfModel& model, double tol) {
    RbfModel out;
    std::copy_if(model.bases.begin(), model.bases.end(), std::back_inserter(out.bases),
                 [tol](const EllipsoidRbf& b) { return !(std::abs(b.coeff_sqrt) < tol); });
    if (out.empty())
        throw Error(ErrorKind::ModelCollapse, fmt::format("every basis fell below the pruning tolerance {}", tol));
    return out;
}

double max_pointwise_error(const RbfModel& model, const ConstraintSet& constraints, const ExecPolicy& policy) {
    const auto values = eval_model(model, constraints.points, policy);
    double m = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) m = std::max(m, std::abs(values[k] - constraints.targets[k]));
    return m;
}

LineSearchResult line_search(const std::function<double(double)>& objective_at, double f0, double grad_norm_sq,
                             double initial_tau, const LineSearchConfig& config) {
    require(grad_norm_sq > 0.0, "line search along a zero gradient");
    require(initial_tau > 0.0, "initial step must be positive");
    LineSearchResult res;
    double tau = initial_tau;
    for (int bt = 0; bt <= config.max_backtracks; ++bt) {
        const double f = objective_at(tau);
        if (std::isfinite(f) && f <= f0 - config.armijo_c1 * tau * grad_norm_sq) {
            res.tau = tau;
            res.f_new = f;
            res.backtracks = bt;
            return res;
        }
        tau *= config.shrink;
    }
    res.tau = 0.0;
    res.f_new = f0;
    res.backtracks = config.max_backtracks;
    res.stalled = true;
    return res;
}

OptimizeResult optimize(RbfModel initial, const ConstraintSet& constraints, const OptimizerConfig& config,
                        const ProgressCallback& progress) {
    config.validate();
    require(!initial.empty(), "optimizer needs a non-empty initial model");
    const Objective objective(constraints, config.exec);

    std::size_t n = initial.size();
    std::vector<double> x = pack_parameters(initial);
    std::vector<double> grad(x.size()), trial(x.size());
    IterationTrace trace;
    trace.records.reserve(config.max_iter);
    double next_tau = config.line_search.initial_step;

    auto fail = [&](ErrorKind kind, const std::string& what) {
        throw OptimizationError(kind, what, std::move(trace), unpack_parameters(x, n));
    };

    for (int iter = 1; iter <= config.max_iter; ++iter) {
        TraceRecord rec;
        rec.iter = iter;

        // Pruning stops once the accuracy phase begins.
        if (iter <= config.sparse_iter && iter % config.prune_interval == 0) {
            RbfModel current = unpack_parameters(x, n);
            RbfModel kept;
            try {
                kept = prune(current, config.prune_tol);
            } catch (const Error& e) {
                fail(ErrorKind::ModelCollapse, fmt::format("iteration {}: {}", iter, e.what()));
            }
            if (kept.size() != n) {
                n = kept.size();
                x = pack_parameters(kept);
                grad.assign(x.size(), 0.0);
                trial.assign(x.size(), 0.0);
                rec.pruned = true;
            }
        }

        const Objective::Terms terms = objective.terms(x, n);
        const ObjectiveWeights w = iteration_weights(terms.accuracy, terms.sparsity, terms.max_error, iter, config);
        const double f = objective.value_and_gradient(x, n, w, grad);
        if (!std::isfinite(f) || !std::isfinite(terms.max_error))
            fail(ErrorKind::NonFinite, fmt::format("iteration {}: objective is not finite", iter));

        double gnorm2 = 0.0;
        for (double g : grad) gnorm2 += g * g;
        if (!std::isfinite(gnorm2))
            fail(ErrorKind::NonFinite, fmt::format("iteration {}: gradient is not finite", iter));

        rec.f = f;
        rec.es = terms.accuracy;
        rec.el1 = terms.sparsity;
        rec.ws = w.accuracy;
        rec.wl = w.sparsity;
        rec.nbasis = n;
        rec.max_error = terms.max_error;
        rec.f_after = f;

        if (gnorm2 > 0.0) {
            auto at = [&](double tau) {
                for (std::size_t j = 0; j < x.size(); ++j) trial[j] = x[j] - tau * grad[j];
                return objective.value(trial, n, w);
            };
            const LineSearchResult ls = line_search(at, f, gnorm2, next_tau, config.line_search);
            if (ls.stalled) {
                rec.stalled = true;
                next_tau = std::max(next_tau * std::pow(config.line_search.shrink, ls.backtracks),
                                    std::numeric_limits<double>::min());
            } else {
                for (std::size_t j = 0; j < x.size(); ++j) x[j] -= ls.tau * grad[j];
                rec.tau = ls.tau;
                rec.f_after = ls.f_new;
                next_tau = ls.tau * config.line_search.growth;
            }
        }

        trace.records.push_back(rec);
        if (progress) progress(rec);
    }
    return {unpack_parameters(x, n), std::move(trace)};
}

}  // namespace gsparse
