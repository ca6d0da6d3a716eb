#include "gsparse/gsparse.h"

#include <cstring>
#include <fstream>
#include <string>

#include <fmt/format.h>

#include "gsparse/gauss_field.hpp"
#include "gsparse/initializer.hpp"
#include "gsparse/io.hpp"
#include "gsparse/pipeline.hpp"

struct gs_molecule {
    gsparse::Molecule molecule;
};

struct gs_model {
    gsparse::RbfModel model;
    gsparse::ModelMetadata meta;
};

struct gs_trace {
    gsparse::IterationTrace trace;
};

struct gs_mesh {
    gsparse::TriMesh mesh;
};

namespace {

thread_local std::string g_last_error;

gs_status status_for(gsparse::ErrorKind kind) {
    using gsparse::ErrorKind;
    switch (kind) {
        case ErrorKind::Parse:
        case ErrorKind::Validation:
        case ErrorKind::EmptyMolecule: return GS_ERR_PARSE;
        case ErrorKind::ModelCollapse:
        case ErrorKind::NonFinite: return GS_ERR_COLLAPSE;
        case ErrorKind::EmptyMesh: return GS_ERR_MESH;
        case ErrorKind::Io: return GS_ERR_IO;
        case ErrorKind::EmptySelection: return GS_ERR_EMPTY_SELECTION;
        case ErrorKind::InvalidArgument: return GS_ERR_INVALID_ARGUMENT;
    }
    return GS_ERR_INTERNAL;
}

gs_status fail(gs_status status, std::string message) {
    g_last_error = std::move(message);
    return status;
}

template <class Fn>
gs_status guarded(Fn&& fn) {
    try {
        g_last_error.clear();
        fn();
        return GS_OK;
    } catch (const gsparse::Error& e) {
        return fail(status_for(e.kind()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(GS_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(GS_ERR_INTERNAL, e.what());
    }
}

#define GS_REQUIRE_ARG(cond)                                                             \
    do {                                                                                 \
        if (!(cond)) return fail(GS_ERR_INVALID_ARGUMENT, "invalid argument: " #cond); \
    } while (0)

gsparse::RunConfig to_run_config(const gs_config* c) {
    gsparse::RunConfig r;
    if (!c) return r;
    r.decay = c->decay;
    r.isovalue = c->isovalue;
    r.band = c->band;
    r.constraint_spacing = c->constraint_spacing;
    r.mesh_spacing = c->mesh_spacing;
    r.padding = c->padding;
    r.kernel_cutoff = c->kernel_cutoff != 0;
    r.hausdorff_samples = c->hausdorff_samples;
    r.seed = c->seed;
    auto& o = r.optimizer;
    o.max_iter = c->max_iter;
    o.sparse_iter = c->sparse_iter;
    o.prune_tol = c->prune_tol;
    o.prune_interval = c->prune_interval;
    o.epsilon_floor = c->epsilon;
    o.max_error_cap = c->error_cap;
    o.line_search.armijo_c1 = c->armijo_c1;
    o.line_search.shrink = c->ls_shrink;
    o.line_search.growth = c->ls_growth;
    o.line_search.initial_step = c->ls_initial_step;
    o.line_search.max_backtracks = c->ls_max_backtracks;
    o.exec.deterministic = c->deterministic != 0;
    o.exec.threads = c->threads;
    return r;
}

gs_trace_record to_record(const gsparse::TraceRecord& r) {
    gs_trace_record out{};
    out.iter = r.iter;
    out.f = r.f;
    out.es = r.es;
    out.el1 = r.el1;
    out.ws = r.ws;
    out.wl = r.wl;
    out.nbasis = r.nbasis;
    out.tau = r.tau;
    out.f_after = r.f_after;
    out.max_error = r.max_error;
    out.stalled = r.stalled ? 1 : 0;
    out.pruned = r.pruned ? 1 : 0;
    return out;
}

std::ofstream open_out(const char* path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw gsparse::Error(gsparse::ErrorKind::Io, fmt::format("cannot write '{}'", path));
    return out;
}

gsparse::Box make_box(const double lo[3], const double hi[3]) {
    return {gsparse::Vec3(lo[0], lo[1], lo[2]), gsparse::Vec3(hi[0], hi[1], hi[2])};
}

std::span<const gsparse::Vec3> as_points(const double* xyz, std::size_t count, std::vector<gsparse::Vec3>& buf) {
    buf.resize(count);
    for (std::size_t i = 0; i < count; ++i) buf[i] = gsparse::Vec3(xyz[3 * i], xyz[3 * i + 1], xyz[3 * i + 2]);
    return buf;
}

}  // namespace

extern "C" {

const char* gs_version(void) { return "1.0.0"; }

const char* gs_last_error(void) { return g_last_error.c_str(); }

void gs_config_default(gs_config* c) {
    if (!c) return;
    const gsparse::RunConfig r;
    const auto& o = r.optimizer;
    *c = gs_config{};
    c->decay = r.decay;
    c->isovalue = r.isovalue;
    c->band = r.band;
    c->constraint_spacing = r.constraint_spacing;
    c->mesh_spacing = r.mesh_spacing;
    c->padding = r.padding;
    c->kernel_cutoff = r.kernel_cutoff ? 1 : 0;
    c->max_iter = o.max_iter;
    c->sparse_iter = o.sparse_iter;
    c->prune_tol = o.prune_tol;
    c->prune_interval = o.prune_interval;
    c->epsilon = o.epsilon_floor;
    c->error_cap = o.max_error_cap;
    c->armijo_c1 = o.line_search.armijo_c1;
    c->ls_shrink = o.line_search.shrink;
    c->ls_growth = o.line_search.growth;
    c->ls_initial_step = o.line_search.initial_step;
    c->ls_max_backtracks = o.line_search.max_backtracks;
    c->hausdorff_samples = r.hausdorff_samples;
    c->deterministic = o.exec.deterministic ? 1 : 0;
    c->threads = o.exec.threads;
    c->seed = r.seed;
}

gs_status gs_config_to_json(const gs_config* config, char** out_json) {
    GS_REQUIRE_ARG(config && out_json);
    return guarded([&] {
        const std::string s = to_run_config(config).to_json();
        char* buf = static_cast<char*>(std::malloc(s.size() + 1));
        if (!buf) throw std::bad_alloc();
        std::memcpy(buf, s.c_str(), s.size() + 1);
        *out_json = buf;
    });
}

void gs_string_free(char* s) { std::free(s); }

gs_status gs_molecule_load(const char* path, gs_molecule** out) {
    GS_REQUIRE_ARG(path && out);
    *out = nullptr;
    return guarded([&] { *out = new gs_molecule{gsparse::load_pqr(path)}; });
}

gs_status gs_molecule_parse(const char* text, gs_molecule** out) {
    GS_REQUIRE_ARG(text && out);
    *out = nullptr;
    return guarded([&] { *out = new gs_molecule{gsparse::parse_pqr_text(text)}; });
}

void gs_molecule_free(gs_molecule* molecule) { delete molecule; }

size_t gs_molecule_atom_count(const gs_molecule* molecule) { return molecule ? molecule->molecule.size() : 0; }

gs_status gs_molecule_atom(const gs_molecule* molecule, size_t index, gs_atom* out) {
    GS_REQUIRE_ARG(molecule && out && index < molecule->molecule.size());
    const auto& a = molecule->molecule.atoms()[index];
    for (int k = 0; k < 3; ++k) out->center[k] = a.center[k];
    out->radius = a.radius;
    out->charge = a.charge;
    out->serial = a.serial;
    return GS_OK;
}

gs_status gs_molecule_bounding_box(const gs_molecule* molecule, double padding, double min[3], double max[3]) {
    GS_REQUIRE_ARG(molecule && min && max);
    return guarded([&] {
        const auto& m = molecule->molecule;
        const gsparse::Box box = gsparse::bounding_box(m, padding < 0.0 ? gsparse::default_padding(m) : padding);
        for (int k = 0; k < 3; ++k) {
            min[k] = box.min[k];
            max[k] = box.max[k];
        }
    });
}

gs_status gs_molecule_eval_phi(const gs_molecule* molecule, double decay, const double* points, size_t count,
                               double* values) {
    GS_REQUIRE_ARG(molecule && (count == 0 || (points && values)));
    return guarded([&] {
        // The isovalue plays no part in evaluation.
        const gsparse::GaussianField field(molecule->molecule, decay, 1.0);
        std::vector<gsparse::Vec3> buf;
        const auto phi = field(as_points(points, count, buf));
        std::copy(phi.begin(), phi.end(), values);
    });
}

gs_status gs_model_init(const gs_molecule* molecule, double decay, gs_model** out) {
    GS_REQUIRE_ARG(molecule && out);
    *out = nullptr;
    return guarded([&] {
        gsparse::RunConfig cfg;
        cfg.decay = decay;
        const auto& m = molecule->molecule;
        auto* h = new gs_model{gsparse::init_model(m, decay), gsparse::make_metadata(m, cfg, gsparse::run_box(m, cfg), 0)};
        *out = h;
    });
}

void gs_model_free(gs_model* model) { delete model; }

size_t gs_model_basis_count(const gs_model* model) { return model ? model->model.size() : 0; }

gs_status gs_model_basis(const gs_model* model, size_t index, gs_basis* out) {
    GS_REQUIRE_ARG(model && out && index < model->model.size());
    const auto& b = model->model.bases[index];
    out->weight = b.weight();
    const gsparse::Vec3 d = b.decays();
    for (int k = 0; k < 3; ++k) {
        out->decays[k] = d[k];
        out->center[k] = b.center[k];
    }
    out->angles[0] = b.angles.alpha;
    out->angles[1] = b.angles.beta;
    out->angles[2] = b.angles.gamma;
    return GS_OK;
}

gs_status gs_model_eval(const gs_model* model, const double* points, size_t count, double* values) {
    GS_REQUIRE_ARG(model && (count == 0 || (points && values)));
    return guarded([&] {
        std::vector<gsparse::Vec3> buf;
        const auto v = gsparse::eval_model(model->model, as_points(points, count, buf));
        std::copy(v.begin(), v.end(), values);
    });
}

gs_status gs_model_load(const char* path, gs_model** out) {
    GS_REQUIRE_ARG(path && out);
    *out = nullptr;
    return guarded([&] {
        auto [model, meta] = gsparse::load_model(path);
        *out = new gs_model{std::move(model), std::move(meta)};
    });
}

gs_status gs_model_box(const gs_model* model, double min[3], double max[3]) {
    GS_REQUIRE_ARG(model && min && max);
    if (!model->meta.box) return fail(GS_ERR_INVALID_ARGUMENT, "model carries no sampling box");
    for (int k = 0; k < 3; ++k) {
        min[k] = model->meta.box->min[k];
        max[k] = model->meta.box->max[k];
    }
    return GS_OK;
}

gs_status gs_model_save(const gs_model* model, const char* path) {
    GS_REQUIRE_ARG(model && path);
    return guarded([&] { gsparse::save_model(path, model->model, model->meta); });
}

gs_status gs_model_write_weights(const gs_model* model, const char* path) {
    GS_REQUIRE_ARG(model && path);
    return guarded([&] {
        auto out = open_out(path);
        gsparse::write_weights(out, model->model, model->meta.config_json);
    });
}

gs_status gs_sparsify(const gs_molecule* molecule, const gs_config* config, gs_progress_fn progress, void* user,
                      gs_model** out_model, gs_trace** out_trace, gs_run_summary* out_summary) {
    GS_REQUIRE_ARG(molecule && config);
    if (out_model) *out_model = nullptr;
    if (out_trace) *out_trace = nullptr;
    const gsparse::RunConfig cfg = to_run_config(config);
    const auto& mol = molecule->molecule;
    gsparse::ProgressCallback cb;
    if (progress) cb = [&](const gsparse::TraceRecord& r) {
        const gs_trace_record rec = to_record(r);
        progress(&rec, user);
    };
    gs_status status = guarded([&] {
        try {
            gsparse::SparsifyResult res = gsparse::sparsify(mol, cfg, cb);
            if (out_summary) {
                *out_summary = gs_run_summary{};
                out_summary->atom_count = mol.size();
                out_summary->basis_count = res.model.size();
                out_summary->constraint_count = res.constraints.size();
                out_summary->sparse_ratio = gsparse::sparse_ratio(res.model.size(), mol.size());
                out_summary->final_es = res.final_es;
                out_summary->max_error = res.max_error;
                for (int k = 0; k < 3; ++k) {
                    out_summary->box_min[k] = res.box.min[k];
                    out_summary->box_max[k] = res.box.max[k];
                }
            }
            const int iterations = static_cast<int>(res.trace.records.size());
            if (out_model)
                *out_model = new gs_model{std::move(res.model), gsparse::make_metadata(mol, cfg, res.box, iterations)};
            if (out_trace) *out_trace = new gs_trace{std::move(res.trace)};
        } catch (const gsparse::OptimizationError& e) {
            const int iterations = static_cast<int>(e.trace().records.size());
            if (out_model)
                *out_model = new gs_model{e.model(), gsparse::make_metadata(mol, cfg, gsparse::run_box(mol, cfg), iterations)};
            if (out_trace) *out_trace = new gs_trace{e.trace()};
            throw;
        }
    });
    return status;
}

void gs_trace_free(gs_trace* trace) { delete trace; }

size_t gs_trace_length(const gs_trace* trace) { return trace ? trace->trace.records.size() : 0; }

gs_status gs_trace_record_at(const gs_trace* trace, size_t index, gs_trace_record* out) {
    GS_REQUIRE_ARG(trace && out && index < trace->trace.records.size());
    *out = to_record(trace->trace.records[index]);
    return GS_OK;
}

gs_status gs_trace_write_csv(const gs_trace* trace, const gs_config* config, const char* path) {
    GS_REQUIRE_ARG(trace && path);
    return guarded([&] {
        auto out = open_out(path);
        gsparse::write_trace_csv(out, trace->trace, config ? to_run_config(config).to_json() : std::string{});
    });
}

gs_status gs_constraints_write_csv(const gs_molecule* molecule, const gs_config* config, const char* path) {
    GS_REQUIRE_ARG(molecule && config && path);
    return guarded([&] {
        const gsparse::RunConfig cfg = to_run_config(config);
        const auto& m = molecule->molecule;
        const gsparse::GaussianField field(m, cfg.decay, cfg.isovalue, cfg.kernel_cutoff);
        const auto set = gsparse::select_constraints(
            field, gsparse::make_grid(gsparse::run_box(m, cfg), cfg.constraint_spacing), cfg.band, cfg.optimizer.exec);
        auto out = open_out(path);
        gsparse::write_constraints_csv(out, set, cfg.to_json());
    });
}

gs_status gs_mesh_molecule(const gs_molecule* molecule, const gs_config* config, const double box_min[3],
                           const double box_max[3], gs_mesh** out) {
    GS_REQUIRE_ARG(molecule && config && out);
    *out = nullptr;
    return guarded([&] {
        const gsparse::RunConfig cfg = to_run_config(config);
        const auto& m = molecule->molecule;
        const gsparse::Box box = (box_min && box_max) ? make_box(box_min, box_max) : gsparse::run_box(m, cfg);
        const gsparse::GaussianField field(m, cfg.decay, cfg.isovalue, cfg.kernel_cutoff);
        *out = new gs_mesh{gsparse::extract_isosurface(field.batch(cfg.optimizer.exec), box, cfg.mesh_spacing,
                                                       cfg.isovalue)};
    });
}

gs_status gs_mesh_model(const gs_model* model, const gs_config* config, const double box_min[3],
                        const double box_max[3], gs_mesh** out) {
    GS_REQUIRE_ARG(model && config && out);
    *out = nullptr;
    if (!(box_min && box_max) && !model->meta.box)
        return fail(GS_ERR_INVALID_ARGUMENT, "no box given and the model carries none");
    return guarded([&] {
        const gsparse::RunConfig cfg = to_run_config(config);
        const gsparse::Box box = (box_min && box_max) ? make_box(box_min, box_max) : *model->meta.box;
        *out = new gs_mesh{gsparse::extract_isosurface(gsparse::model_field(model->model, cfg.optimizer.exec), box,
                                                       cfg.mesh_spacing, cfg.isovalue)};
    });
}

void gs_mesh_free(gs_mesh* mesh) { delete mesh; }

size_t gs_mesh_vertex_count(const gs_mesh* mesh) { return mesh ? mesh->mesh.vertices.size() : 0; }

size_t gs_mesh_triangle_count(const gs_mesh* mesh) { return mesh ? mesh->mesh.triangles.size() : 0; }

gs_status gs_mesh_vertices(const gs_mesh* mesh, double* out) {
    GS_REQUIRE_ARG(mesh && out);
    for (std::size_t i = 0; i < mesh->mesh.vertices.size(); ++i)
        for (int k = 0; k < 3; ++k) out[3 * i + k] = mesh->mesh.vertices[i][k];
    return GS_OK;
}

gs_status gs_mesh_triangles(const gs_mesh* mesh, uint32_t* out) {
    GS_REQUIRE_ARG(mesh && out);
    for (std::size_t i = 0; i < mesh->mesh.triangles.size(); ++i)
        for (int k = 0; k < 3; ++k) out[3 * i + k] = mesh->mesh.triangles[i][k];
    return GS_OK;
}

double gs_mesh_area(const gs_mesh* mesh) { return mesh ? gsparse::mesh_area(mesh->mesh) : 0.0; }

double gs_mesh_volume(const gs_mesh* mesh) { return mesh ? gsparse::mesh_volume(mesh->mesh) : 0.0; }

gs_status gs_mesh_write_obj(const gs_mesh* mesh, const gs_config* config, const char* path) {
    GS_REQUIRE_ARG(mesh && path);
    return guarded([&] {
        auto out = open_out(path);
        gsparse::write_obj(out, mesh->mesh, config ? "config: " + to_run_config(config).to_json() : std::string{});
    });
}

gs_status gs_hausdorff(const gs_mesh* a, const gs_mesh* b, int samples_per_triangle, double* out) {
    GS_REQUIRE_ARG(a && b && out);
    return guarded([&] { *out = gsparse::hausdorff(a->mesh, b->mesh, samples_per_triangle); });
}

gs_status gs_compare(const gs_molecule* molecule, const gs_model* model, const gs_config* config, gs_report* out) {
    GS_REQUIRE_ARG(molecule && model && config && out);
    return guarded([&] {
        const gsparse::RunConfig cfg = to_run_config(config);
        const auto r = gsparse::compare(molecule->molecule, model->model, cfg, gsparse::run_box(molecule->molecule, cfg));
        *out = gs_report{r.area_original, r.area_ours, r.error_area, r.volume_original,
                         r.volume_ours,   r.error_volume, r.hausdorff};
    });
}

gs_status gs_report_write_json(const gs_report* report, const gs_config* config, const char* path) {
    GS_REQUIRE_ARG(report && path);
    return guarded([&] {
        const gsparse::SurfaceReport r{report->area_original, report->area_ours,   report->error_area,
                                       report->volume_original, report->volume_ours, report->error_volume,
                                       report->hausdorff};
        auto out = open_out(path);
        out << gsparse::report_json(r, config ? to_run_config(config).to_json() : std::string{});
    });
}

double gs_sparse_ratio(size_t n_erbf, size_t n_atom) {
    return n_atom == 0 ? 0.0 : static_cast<double>(n_erbf) / static_cast<double>(n_atom);
}

}  // extern "C"
