// gsparse command-line front end. Talks to the library only through the C API.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "gsparse/gsparse.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Handles {
    std::unique_ptr<gs_molecule, decltype(&gs_molecule_free)> molecule{nullptr, gs_molecule_free};
    std::unique_ptr<gs_model, decltype(&gs_model_free)> model{nullptr, gs_model_free};
    std::unique_ptr<gs_trace, decltype(&gs_trace_free)> trace{nullptr, gs_trace_free};
    std::unique_ptr<gs_mesh, decltype(&gs_mesh_free)> mesh{nullptr, gs_mesh_free};
};

class Failure : public std::exception {
public:
    explicit Failure(gs_status s) : status(s), message(gs_last_error()) {}
    gs_status status;
    std::string message;
};

void check(gs_status s) {
    if (s != GS_OK) throw Failure(s);
}

int exit_code(gs_status s) {
    switch (s) {
        case GS_OK: return 0;
        case GS_ERR_PARSE: return 2;
        case GS_ERR_COLLAPSE: return 3;
        case GS_ERR_MESH: return 4;
        default: return 1;
    }
}

struct Options {
    gs_config config{};
    std::string input;
    std::string model_path;
    std::string out_dir = ".";
    std::string output;
    bool dump_constraints = false;
    bool verbose = false;
    bool deterministic = true;
    bool kernel_cutoff = false;
};

void add_field_options(CLI::App* cmd, Options& o) {
    auto& c = o.config;
    cmd->add_option("--decay", c.decay, "Gaussian decay d (1/A^2)")->capture_default_str();
    cmd->add_option("--isovalue", c.isovalue, "Level c")->capture_default_str();
    cmd->add_option("--mesh-spacing", c.mesh_spacing, "Marching-cubes grid spacing (A)")->capture_default_str();
    cmd->add_option("--padding", c.padding, "Box padding (A); negative means max radius + 3")->capture_default_str();
    cmd->add_option("--threads", c.threads, "Worker threads (0: all cores)")->capture_default_str();
    cmd->add_flag("--kernel-cutoff", o.kernel_cutoff, "Skip kernel terms with exponent below -30");
    cmd->add_flag("--deterministic,!--no-deterministic", o.deterministic,
                  "Fixed reduction order, output independent of thread count (default on)");
}

void add_fit_options(CLI::App* cmd, Options& o) {
    auto& c = o.config;
    cmd->add_option("--band", c.band, "Constraint band |phi - c| <= band")->capture_default_str();
    cmd->add_option("--constraint-spacing", c.constraint_spacing, "Constraint grid spacing (A)")->capture_default_str();
    cmd->add_option("--max-iter", c.max_iter, "Total iterations")->capture_default_str();
    cmd->add_option("--sparse-iter", c.sparse_iter, "Iterations with the sparsity term")->capture_default_str();
    cmd->add_option("--prune-tol", c.prune_tol, "Pruning threshold on |c~|")->capture_default_str();
    cmd->add_option("--prune-interval", c.prune_interval, "Prune every this many iterations")->capture_default_str();
    cmd->add_option("--epsilon", c.epsilon, "Floor on the accuracy weight")->capture_default_str();
    cmd->add_option("--error-cap", c.error_cap, "Max pointwise error that forces weights (1, 0)")
        ->capture_default_str();
    cmd->add_option("--armijo-c1", c.armijo_c1)->capture_default_str();
    cmd->add_option("--initial-step", c.ls_initial_step)->capture_default_str();
    cmd->add_option("--max-backtracks", c.ls_max_backtracks)->capture_default_str();
    cmd->add_option("--seed", c.seed, "Reserved; the pipeline draws no random numbers")->capture_default_str();
}

std::string config_json(const gs_config& c) {
    char* text = nullptr;
    check(gs_config_to_json(&c, &text));
    std::string s(text);
    gs_string_free(text);
    return s;
}

bool looks_like_model(const std::string& path) {
    std::ifstream in(path);
    char ch = 0;
    while (in.get(ch))
        if (!std::isspace(static_cast<unsigned char>(ch))) return ch == '{';
    return false;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

int cmd_info(const Options& o) {
    Handles h;
    gs_molecule* m = nullptr;
    check(gs_molecule_load(o.input.c_str(), &m));
    h.molecule.reset(m);
    const size_t n = gs_molecule_atom_count(m);
    double lo[3], hi[3];
    check(gs_molecule_bounding_box(m, 0.0, lo, hi));
    double rmin = 0.0, rmax = 0.0, qsum = 0.0;
    for (size_t i = 0; i < n; ++i) {
        gs_atom a;
        check(gs_molecule_atom(m, i, &a));
        if (i == 0 || a.radius < rmin) rmin = a.radius;
        if (i == 0 || a.radius > rmax) rmax = a.radius;
        qsum += a.charge;
    }
    std::printf("N=%zu\n", n);
    std::printf("box_min=%.4f %.4f %.4f\n", lo[0], lo[1], lo[2]);
    std::printf("box_max=%.4f %.4f %.4f\n", hi[0], hi[1], hi[2]);
    std::printf("radius_range=%.4f %.4f\n", rmin, rmax);
    std::printf("total_charge=%.4f\n", qsum);
    return 0;
}

void progress_printer(const gs_trace_record* r, void*) {
    if (r->iter % 100 == 0 || r->pruned)
        std::fprintf(stderr, "iter %d f=%.6g Es=%.6g El1=%.6g ws=%.3g wl=%.3g n=%zu tau=%.3g\n", r->iter, r->f, r->es,
                     r->el1, r->ws, r->wl, r->nbasis, r->tau);
}

int cmd_sparsify(const Options& o) {
    const fs::path dir(o.out_dir);
    fs::create_directories(dir);
    fs::remove(dir / "FAILED");
    const std::string cfg = config_json(o.config);

    Handles h;
    gs_molecule* m = nullptr;
    check(gs_molecule_load(o.input.c_str(), &m));
    h.molecule.reset(m);

    if (o.dump_constraints) check(gs_constraints_write_csv(m, &o.config, (dir / "constraints.csv").c_str()));

    gs_model* model = nullptr;
    gs_trace* trace = nullptr;
    gs_run_summary sum{};
    const auto t0 = std::chrono::steady_clock::now();
    const gs_status st =
        gs_sparsify(m, &o.config, o.verbose ? progress_printer : nullptr, nullptr, &model, &trace, &sum);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    h.model.reset(model);
    h.trace.reset(trace);

    if (st != GS_OK) {
        const std::string msg = gs_last_error();
        if (trace) gs_trace_write_csv(trace, &o.config, (dir / "trace.csv").c_str());
        if (model) gs_model_save(model, (dir / "model.json").c_str());
        write_text(dir / "FAILED", msg + "\n");
        std::fprintf(stderr, "error: %s\n", msg.c_str());
        return exit_code(st);
    }

    check(gs_model_save(model, (dir / "model.json").c_str()));
    check(gs_trace_write_csv(trace, &o.config, (dir / "trace.csv").c_str()));
    check(gs_model_write_weights(model, (dir / "weights.txt").c_str()));

    nlohmann::ordered_json s;
    s["config"] = nlohmann::json::parse(cfg);
    s["input"] = o.input;
    s["N_atoms"] = sum.atom_count;
    s["N_ERBF"] = sum.basis_count;
    s["S_r"] = sum.sparse_ratio;
    s["constraints"] = sum.constraint_count;
    s["final_Es"] = sum.final_es;
    s["max_error"] = sum.max_error;
    s["iterations"] = gs_trace_length(trace);
    s["wall_time_s"] = wall;
    write_text(dir / "summary.json", s.dump(2) + "\n");

    std::printf("N_atoms=%zu N_ERBF=%zu S_r=%.4f final_Es=%.6g max_error=%.6g wall_time=%.2fs\n", sum.atom_count,
                sum.basis_count, sum.sparse_ratio, sum.final_es, sum.max_error, wall);
    return 0;
}

int cmd_mesh(const Options& o) {
    Handles h;
    gs_mesh* mesh = nullptr;
    if (looks_like_model(o.input)) {
        gs_model* model = nullptr;
        check(gs_model_load(o.input.c_str(), &model));
        h.model.reset(model);
        check(gs_mesh_model(model, &o.config, nullptr, nullptr, &mesh));
    } else {
        gs_molecule* m = nullptr;
        check(gs_molecule_load(o.input.c_str(), &m));
        h.molecule.reset(m);
        check(gs_mesh_molecule(m, &o.config, nullptr, nullptr, &mesh));
    }
    h.mesh.reset(mesh);
    fs::path out = o.output.empty() ? fs::path(o.out_dir) / "mesh.obj" : fs::path(o.output);
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    check(gs_mesh_write_obj(mesh, &o.config, out.c_str()));
    std::printf("vertices=%zu triangles=%zu area=%.6f volume=%.6f\n", gs_mesh_vertex_count(mesh),
                gs_mesh_triangle_count(mesh), gs_mesh_area(mesh), gs_mesh_volume(mesh));
    return 0;
}

int cmd_compare(const Options& o) {
    Handles h;
    gs_molecule* m = nullptr;
    check(gs_molecule_load(o.input.c_str(), &m));
    h.molecule.reset(m);
    gs_model* model = nullptr;
    check(gs_model_load(o.model_path.c_str(), &model));
    h.model.reset(model);
    gs_report r{};
    check(gs_compare(m, model, &o.config, &r));
    fs::path out = o.output.empty() ? fs::path(o.out_dir) / "report.json" : fs::path(o.output);
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    check(gs_report_write_json(&r, &o.config, out.c_str()));
    std::printf("A_original=%.6f A_our=%.6f Error_A=%.6f\n", r.area_original, r.area_ours, r.error_area);
    std::printf("V_original=%.6f V_our=%.6f Error_V=%.6f\n", r.volume_original, r.volume_ours, r.error_volume);
    std::printf("H=%.6f\n", r.hausdorff);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse ellipsoid RBF fitting of Gaussian molecular surfaces"};
    app.set_version_flag("--version", gs_version());
    app.require_subcommand(1);

    Options o;
    gs_config_default(&o.config);

    auto* info = app.add_subcommand("info", "Summarise a PQR file");
    info->add_option("pqr", o.input)->required();

    auto* sparsify = app.add_subcommand("sparsify", "Fit a sparse ellipsoid RBF model to a molecule");
    sparsify->add_option("pqr", o.input)->required();
    sparsify->add_option("--out", o.out_dir, "Output directory")->capture_default_str();
    sparsify->add_flag("--dump-constraints", o.dump_constraints, "Also write constraints.csv");
    sparsify->add_flag("-v,--verbose", o.verbose, "Print progress to stderr");
    add_field_options(sparsify, o);
    add_fit_options(sparsify, o);

    auto* mesh = app.add_subcommand("mesh", "Mesh the surface of a PQR file or a model file as OBJ");
    mesh->add_option("input", o.input, "PQR or model file")->required();
    mesh->add_option("-o,--output", o.output, "OBJ path (default OUT/mesh.obj)");
    mesh->add_option("--out", o.out_dir, "Output directory")->capture_default_str();
    add_field_options(mesh, o);

    auto* compare = app.add_subcommand("compare", "Compare a model's surface with the molecule's");
    compare->add_option("pqr", o.input)->required();
    compare->add_option("model", o.model_path)->required();
    compare->add_option("-o,--output", o.output, "Report path (default OUT/report.json)");
    compare->add_option("--out", o.out_dir, "Output directory")->capture_default_str();
    compare->add_option("--hausdorff-samples", o.config.hausdorff_samples, "Samples per triangle")
        ->capture_default_str();
    add_field_options(compare, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    o.config.deterministic = o.deterministic ? 1 : 0;
    o.config.kernel_cutoff = o.kernel_cutoff ? 1 : 0;
    try {
        if (*info) return cmd_info(o);
        if (*sparsify) return cmd_sparsify(o);
        if (*mesh) return cmd_mesh(o);
        if (*compare) return cmd_compare(o);
    } catch (const Failure& f) {
        std::fprintf(stderr, "error: %s\n", f.message.c_str());
        return exit_code(f.status);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
