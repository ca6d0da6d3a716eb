#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "gsparse/constraints.hpp"
#include "gsparse/erbf_model.hpp"
#include "gsparse/error.hpp"

namespace gsparse {

/// Armijo backtracking. The first trial step is twice the previously
/// accepted one (`initial_step` on the first iteration).
struct LineSearchConfig {
    double armijo_c1 = 1e-4;
    double shrink = 0.5;
    double growth = 2.0;
    double initial_step = 1e-3;
    int max_backtracks = 40;
};

struct OptimizerConfig {
    int max_iter = 8000;
    int sparse_iter = 6000;
    double prune_tol = 1e-3;   // on |c~|
    int prune_interval = 20;
    double epsilon_floor = 0.01;
    double max_error_cap = 0.5;
    LineSearchConfig line_search;
    ExecPolicy exec;

    void validate() const;
};

struct TraceRecord {
    int iter = 0;
    double f = 0.0;        // objective before the step, weights in force
    double es = 0.0;
    double el1 = 0.0;
    double ws = 0.0;
    double wl = 0.0;
    std::size_t nbasis = 0;
    double tau = 0.0;      // accepted step, 0 when no step was taken
    double f_after = 0.0;  // objective after the step, same weights
    double max_error = 0.0;
    bool stalled = false;
    bool pruned = false;
};

struct IterationTrace {
    std::vector<TraceRecord> records;
    std::size_t stalls() const;
};

struct EnergyTerms {
    double es = 0.0;
    double el1 = 0.0;
};

EnergyTerms energy_terms(const RbfModel& model, const ConstraintSet& constraints, const ExecPolicy& policy = {});

/// w_s = max(E_s / (E_s + E_l1), eps), w_l = E_l1 / (E_s + E_l1); (eps, 0)
/// when both terms vanish.
ObjectiveWeights adaptive_weights(double es, double el1, double epsilon_floor);

/// Weights actually used at iteration `iter` (1-based): adaptive weights,
/// overridden by (1, 0) when the max error exceeds the cap or once
/// `iter > sparse_iter`.
ObjectiveWeights iteration_weights(double es, double el1, double max_error, int iter, const OptimizerConfig& config);

/// Drops every basis with |c~| < tol, keeping survivor order. Throws
/// ModelCollapse if nothing survives.
RbfModel prune(const RbfModel& model, double tol);

double max_pointwise_error(const RbfModel& model, const ConstraintSet& constraints, const ExecPolicy& policy = {});

struct LineSearchResult {
    double tau = 0.0;
    double f_new = 0.0;
    int backtracks = 0;
    bool stalled = false;
};

/// `objective_at(tau)` evaluates f(X - tau * grad). Requires grad_norm_sq > 0.
LineSearchResult line_search(const std::function<double(double)>& objective_at, double f0, double grad_norm_sq,
                             double initial_tau, const LineSearchConfig& config);

struct OptimizeResult {
    RbfModel model;
    IterationTrace trace;
};

/// Raised on model collapse or a non-finite objective; carries the state at
/// the point of failure.
class OptimizationError : public Error {
public:
    OptimizationError(ErrorKind kind, const std::string& what, IterationTrace trace, RbfModel model)
        : Error(kind, what),
          trace_(std::make_shared<IterationTrace>(std::move(trace))),
          model_(std::make_shared<RbfModel>(std::move(model))) {}
    const IterationTrace& trace() const { return *trace_; }
    const RbfModel& model() const { return *model_; }

private:
    std::shared_ptr<IterationTrace> trace_;
    std::shared_ptr<RbfModel> model_;
};

using ProgressCallback = std::function<void(const TraceRecord&)>;

OptimizeResult optimize(RbfModel initial, const ConstraintSet& constraints, const OptimizerConfig& config,
                        const ProgressCallback& progress = {});

}  // namespace gsparse
