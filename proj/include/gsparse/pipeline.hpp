#pragma once

#include <cstdint>
#include <string>

#include "gsparse/constraints.hpp"
#include "gsparse/erbf_model.hpp"
#include "gsparse/io.hpp"
#include "gsparse/mesh.hpp"
#include "gsparse/optimizer.hpp"
#include "gsparse/pqr.hpp"

namespace gsparse {

struct RunConfig {
    double decay = 0.5;
    double isovalue = 1.0;
    double band = 1.0;
    double constraint_spacing = 1.0;
    double mesh_spacing = 0.5;
    double padding = -1.0;  // negative: max radius + 3 Å
    bool kernel_cutoff = false;
    int hausdorff_samples = kDefaultHausdorffSamples;
    std::uint64_t seed = 0;  // reserved; the pipeline draws no random numbers
    OptimizerConfig optimizer;

    void validate() const;
    /// Full effective configuration as a JSON object.
    std::string to_json() const;
};

Box run_box(const Molecule& molecule, const RunConfig& config);

struct SparsifyResult {
    RbfModel model;
    IterationTrace trace;
    ConstraintSet constraints;
    Box box;
    double final_es = 0.0;
    double max_error = 0.0;
};

/// initializer -> constraint sampler -> optimizer.
SparsifyResult sparsify(const Molecule& molecule, const RunConfig& config, const ProgressCallback& progress = {});

ModelMetadata make_metadata(const Molecule& molecule, const RunConfig& config, const Box& box, int iterations);

/// Meshes phi and phi~ on the same grid over `box` and compares them.
SurfaceReport compare(const Molecule& molecule, const RbfModel& model, const RunConfig& config, const Box& box);

}  // namespace gsparse
