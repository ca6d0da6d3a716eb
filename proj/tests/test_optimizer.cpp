#include <cmath>
#include <random>

#include "doctest.h"
#include "gsparse/error.hpp"
#include "gsparse/initializer.hpp"
#include "gsparse/optimizer.hpp"
#include "gsparse/pipeline.hpp"
#include "test_support.hpp"

using namespace gsparse;
using testsupport::random_model;
using testsupport::single_atom;

namespace {

ConstraintSet field_constraints(const Molecule& mol, double spacing = 1.0) {
    const GaussianField f(mol, 0.5, 1.0);
    return select_constraints(f, make_grid(bounding_box(mol, default_padding(mol)), spacing), 1.0);
}

OptimizerConfig short_config(int iters, int sparse) {
    OptimizerConfig c;
    c.max_iter = iters;
    c.sparse_iter = sparse;
    return c;
}

}  // namespace

TEST_SUITE("sparse_optimizer") {

TEST_CASE("adaptive weights") {
    auto w = adaptive_weights(3, 1, 0.01);
    CHECK(w.accuracy == 0.75);
    CHECK(w.sparsity == 0.25);
    w = adaptive_weights(0, 5, 0.01);
    CHECK(w.accuracy == 0.01);
    CHECK(w.sparsity == 1.0);
    w = adaptive_weights(2, 2, 0.3);
    CHECK(w.accuracy == 0.5);
    CHECK(w.sparsity == 0.5);
    w = adaptive_weights(0, 0, 0.01);
    CHECK(w.accuracy == 0.01);
    CHECK(w.sparsity == 0.0);
    CHECK_THROWS_AS(adaptive_weights(-1, 1, 0.01), Error);
}

TEST_CASE("error cap and phase switch override the weights") {
    OptimizerConfig c = short_config(100, 50);
    auto w = iteration_weights(3, 1, 0.6, 10, c);
    CHECK(w.accuracy == 1.0);
    CHECK(w.sparsity == 0.0);
    w = iteration_weights(3, 1, 0.5, 10, c);
    CHECK(w.accuracy == 0.75);
    w = iteration_weights(3, 1, 0.0, 51, c);
    CHECK(w.accuracy == 1.0);
    CHECK(w.sparsity == 0.0);
    w = iteration_weights(3, 1, 0.0, 50, c);
    CHECK(w.sparsity == 0.25);
}

TEST_CASE("pruning") {
    std::mt19937_64 rng(101);
    RbfModel m = random_model(rng, 6);
    CHECK(prune(m, 1e-3).bases.size() == 6);

    const std::vector<double> cs{0.5, 0.0, -2e-4, 1e-3, -0.7, 9.99e-4};
    for (std::size_t i = 0; i < cs.size(); ++i) m.bases[i].coeff_sqrt = cs[i];
    const RbfModel kept = prune(m, 1e-3);
    std::vector<double> expect;
    for (double c : cs)
        if (std::abs(c) >= 1e-3) expect.push_back(c);
    REQUIRE(kept.size() == expect.size());
    for (std::size_t i = 0; i < kept.size(); ++i) CHECK(kept.bases[i].coeff_sqrt == expect[i]);

    for (auto& b : m.bases) b.coeff_sqrt = 0.0;
    try {
        prune(m, 1e-3);
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ModelCollapse);
    }
}

TEST_CASE("energy terms and max error") {
    const Molecule mol = single_atom(1.5);
    const ConstraintSet cs = field_constraints(mol);
    const RbfModel init = init_model(mol, 0.5);
    const EnergyTerms t = energy_terms(init, cs);
    CHECK(t.es < 1e-25);
    CHECK(max_pointwise_error(init, cs) < 1e-13);

    RbfModel zero = init;
    zero.bases[0].coeff_sqrt = 0.0;
    zero.bases[0].decay_sqrt.setZero();
    CHECK(energy_terms(zero, cs).el1 == 0.0);
    double worst = 0.0;
    for (double v : cs.targets) worst = std::max(worst, std::abs(v));
    CHECK(max_pointwise_error(zero, cs) == worst);
}

TEST_CASE("line search on a quadratic") {
    // f(t) = (1 - L t g)^2 / (2) form: f(x) = L/2 x^2 at x = 1, gradient L.
    const double L = 8.0;
    const double x0 = 1.0, g = L * x0, f0 = 0.5 * L * x0 * x0;
    auto at = [&](double tau) {
        const double x = x0 - tau * g;
        return 0.5 * L * x * x;
    };
    LineSearchConfig cfg;
    const auto r = line_search(at, f0, g * g, 1.0, cfg);
    CHECK_FALSE(r.stalled);
    CHECK(r.tau > 0.0);
    CHECK(r.tau < 2.0 / L);
    CHECK(r.f_new <= f0 - cfg.armijo_c1 * r.tau * g * g);
    CHECK(r.tau == 0.125);  // 1 -> 0.5 -> 0.25 -> 0.125 (0.25 lands at f = f0, not a decrease)
    CHECK_THROWS_AS(line_search(at, f0, 0.0, 1.0, cfg), Error);
}

TEST_CASE("line search stalls when no step decreases") {
    LineSearchConfig cfg;
    cfg.max_backtracks = 5;
    const auto r = line_search([](double) { return 2.0; }, 1.0, 1.0, 1.0, cfg);
    CHECK(r.stalled);
    CHECK(r.tau == 0.0);
    CHECK(r.f_new == 1.0);
}

TEST_CASE("config validation") {
    CHECK_NOTHROW(OptimizerConfig{}.validate());
    CHECK_THROWS_AS(short_config(10, 20).validate(), Error);
    OptimizerConfig c;
    c.prune_tol = 0.0;
    CHECK_THROWS_AS(c.validate(), Error);
    c = {};
    c.prune_interval = 0;
    CHECK_THROWS_AS(c.validate(), Error);
    c = {};
    c.epsilon_floor = -1;
    CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("pure accuracy run from the exact start stays exact") {
    std::mt19937_64 rng(103);
    const Molecule mol = testsupport::random_molecule(rng, 4);
    const ConstraintSet cs = field_constraints(mol);
    const RbfModel init = init_model(mol, 0.5);
    const auto res = optimize(init, cs, short_config(30, 0));
    CHECK(res.model.size() == init.size());
    for (const auto& r : res.trace.records) {
        CHECK(r.es <= 1e-20);
        CHECK(r.wl == 0.0);
    }
    CHECK(energy_terms(res.model, cs).es <= 1e-20);
}

TEST_CASE("decoys are pruned at the first pruning event") {
    std::mt19937_64 rng(107);
    RbfModel truth = random_model(rng, 1, 0.0);
    const GridSpec g = make_grid({Vec3::Constant(-4), Vec3::Constant(4)}, 0.8);
    ConstraintSet cs;
    for (const Vec3& p : g.points()) {
        const double v = eval_model(truth, p);
        if (std::abs(v - 1.0) <= 1.0) {
            cs.points.push_back(p);
            cs.targets.push_back(v);
        }
    }
    RbfModel start = truth;
    for (int i = 0; i < 4; ++i) {
        EllipsoidRbf d = random_model(rng, 1).bases[0];
        d.coeff_sqrt = 1e-4;
        start.bases.push_back(d);
    }
    const auto res = optimize(start, cs, short_config(60, 40));
    CHECK(res.trace.records[18].nbasis == 5);
    CHECK(res.trace.records[19].nbasis == 1);
    CHECK(res.trace.records[19].pruned);
    CHECK(res.model.size() == 1);
    CHECK(max_pointwise_error(res.model, cs) < 0.05);
}

TEST_CASE("trace invariants on a small molecule") {
    std::mt19937_64 rng(109);
    const Molecule mol = testsupport::random_molecule(rng, 6, 2.5);
    const ConstraintSet cs = field_constraints(mol);
    const OptimizerConfig cfg = short_config(400, 300);
    int progress_calls = 0;
    const auto res = optimize(init_model(mol, 0.5), cs, cfg, [&](const TraceRecord&) { ++progress_calls; });
    const auto& rec = res.trace.records;
    REQUIRE(rec.size() == 400);
    CHECK(progress_calls == 400);
    for (std::size_t i = 0; i < rec.size(); ++i) {
        CHECK(rec[i].iter == int(i) + 1);
        if (i > 0) CHECK(rec[i].nbasis <= rec[i - 1].nbasis);
        if (rec[i].tau > 0.0) CHECK(rec[i].f_after <= rec[i].f);
        CHECK(std::isfinite(rec[i].f));
        CHECK(std::isfinite(rec[i].es));
        if (rec[i].iter > cfg.sparse_iter) {
            CHECK(rec[i].wl == 0.0);
            CHECK(rec[i].nbasis == rec[cfg.sparse_iter].nbasis);
        }
    }
    for (const auto& b : res.model.bases) {
        CHECK(b.weight() >= 0.0);
        CHECK((b.decays().array() >= 0.0).all());
    }
}

TEST_CASE("collapse is reported with the partial trace") {
    // A tolerance above every |c~| forces every basis out at the first pruning event.
    const Molecule mol = single_atom(1.2);
    const ConstraintSet cs = field_constraints(mol);
    OptimizerConfig cfg = short_config(40, 40);
    cfg.prune_tol = 100.0;
    try {
        optimize(init_model(mol, 0.5), cs, cfg);
        FAIL("no error");
    } catch (const OptimizationError& e) {
        CHECK(e.kind() == ErrorKind::ModelCollapse);
        CHECK(e.trace().records.size() == 19);
        CHECK(e.model().size() == 1);
    }
}

TEST_CASE("optimisation is identical across worker counts") {
    std::mt19937_64 rng(113);
    const Molecule mol = testsupport::random_molecule(rng, 5, 2.0);
    const ConstraintSet cs = field_constraints(mol, 0.5);
    OptimizerConfig a = short_config(60, 40), b = a;
    b.exec.threads = 3;
    const auto ra = optimize(init_model(mol, 0.5), cs, a);
    const auto rb = optimize(init_model(mol, 0.5), cs, b);
    CHECK(pack_parameters(ra.model) == pack_parameters(rb.model));
    REQUIRE(ra.trace.records.size() == rb.trace.records.size());
    for (std::size_t i = 0; i < ra.trace.records.size(); ++i) CHECK(ra.trace.records[i].f == rb.trace.records[i].f);
}

TEST_CASE("single atom run keeps its one basis") {
    RunConfig cfg;
    cfg.optimizer.max_iter = 200;
    cfg.optimizer.sparse_iter = 150;
    const auto res = sparsify(single_atom(1.5), cfg);
    CHECK(res.model.size() == 1);
    CHECK(sparse_ratio(res.model.size(), 1) == 1.0);
}

}  // TEST_SUITE
