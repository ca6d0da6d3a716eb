#include "gsparse/pipeline.hpp"

#include <cmath>

#include "gsparse/gauss_field.hpp"
#include "gsparse/initializer.hpp"
#include "gsparse/objective.hpp"
#include "json.hpp"

namespace gsparse {

void RunConfig::validate() const {
    require(decay > 0.0, "decay must be positive");
    require(isovalue > 0.0, "isovalue must be positive");
    require(band > 0.0, "band must be positive");
    require(constraint_spacing > 0.0, "constraint spacing must be positive");
    require(mesh_spacing > 0.0, "mesh spacing must be positive");
    require(hausdorff_samples >= 0, "Hausdorff samples must be non-negative");
    optimizer.validate();
}

std::string RunConfig::to_json() const {
    const auto& o = optimizer;
    nlohmann::json j = {
        {"decay", decay},
        {"isovalue", isovalue},
        {"band", band},
        {"constraint_spacing", constraint_spacing},
        {"mesh_spacing", mesh_spacing},
        {"padding", padding},
        {"kernel_cutoff", kernel_cutoff},
        {"hausdorff_samples", hausdorff_samples},
        {"seed", seed},
        {"max_iter", o.max_iter},
        {"sparse_iter", o.sparse_iter},
        {"prune_tol", o.prune_tol},
        {"prune_interval", o.prune_interval},
        {"epsilon", o.epsilon_floor},
        {"error_cap", o.max_error_cap},
        {"line_search",
         {{"armijo_c1", o.line_search.armijo_c1},
          {"shrink", o.line_search.shrink},
          {"growth", o.line_search.growth},
          {"initial_step", o.line_search.initial_step},
          {"max_backtracks", o.line_search.max_backtracks}}},
        {"deterministic", o.exec.deterministic},
    };
    // The worker count is a hint and does not change deterministic output,
    // so it is left out of the recorded configuration.
    return j.dump();
}

Box run_box(const Molecule& molecule, const RunConfig& config) {
    return bounding_box(molecule, config.padding < 0.0 ? default_padding(molecule) : config.padding);
}

SparsifyResult sparsify(const Molecule& molecule, const RunConfig& config, const ProgressCallback& progress) {
    config.validate();
    const GaussianField field(molecule, config.decay, config.isovalue, config.kernel_cutoff);
    SparsifyResult out;
    out.box = run_box(molecule, config);
    out.constraints = select_constraints(field, make_grid(out.box, config.constraint_spacing), config.band,
                                         config.optimizer.exec);
    RbfModel initial = init_model(molecule, config.decay);
    OptimizeResult res = optimize(std::move(initial), out.constraints, config.optimizer, progress);
    out.model = std::move(res.model);
    out.trace = std::move(res.trace);
    const auto x = pack_parameters(out.model);
    const auto terms = Objective(out.constraints, config.optimizer.exec).terms(x, out.model.size());
    out.final_es = terms.accuracy;
    out.max_error = terms.max_error;
    return out;
}

ModelMetadata make_metadata(const Molecule& molecule, const RunConfig& config, const Box& box, int iterations) {
    ModelMetadata meta;
    meta.source = molecule.source_path();
    meta.atom_count = molecule.size();
    meta.decay = config.decay;
    meta.isovalue = config.isovalue;
    meta.iterations = iterations;
    meta.sparse_iterations = std::min(iterations, config.optimizer.sparse_iter);
    meta.box = box;
    meta.config_json = config.to_json();
    return meta;
}

SurfaceReport compare(const Molecule& molecule, const RbfModel& model, const RunConfig& config, const Box& box) {
    const GaussianField field(molecule, config.decay, config.isovalue, config.kernel_cutoff);
    return compare_surfaces(field.batch(config.optimizer.exec), model_field(model, config.optimizer.exec), box,
                            config.mesh_spacing, config.isovalue, config.hausdorff_samples, config.optimizer.exec);
}

}  // namespace gsparse
