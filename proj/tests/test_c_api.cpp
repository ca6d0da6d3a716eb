#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "gsparse/gsparse.h"

namespace fs = std::filesystem;

namespace {

const char* kOneAtom = "ATOM 1 C ALA 1 0.0 0.0 0.0 0.0 1.5\n";

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "gsparse_capi_tests";
    fs::create_directories(dir);
    return dir / name;
}

gs_config quick_config() {
    gs_config c;
    gs_config_default(&c);
    c.max_iter = 100;
    c.sparse_iter = 80;
    return c;
}

struct MeshData {
    std::vector<double> v;
    std::vector<uint32_t> t;
};

MeshData copy_mesh(const gs_mesh* m) {
    MeshData d;
    d.v.resize(3 * gs_mesh_vertex_count(m));
    d.t.resize(3 * gs_mesh_triangle_count(m));
    REQUIRE(gs_mesh_vertices(m, d.v.data()) == GS_OK);
    REQUIRE(gs_mesh_triangles(m, d.t.data()) == GS_OK);
    return d;
}

}  // namespace

TEST_SUITE("c_api") {

TEST_CASE("defaults") {
    gs_config c;
    gs_config_default(&c);
    CHECK(c.decay == 0.5);
    CHECK(c.isovalue == 1.0);
    CHECK(c.band == 1.0);
    CHECK(c.constraint_spacing == 1.0);
    CHECK(c.mesh_spacing == 0.5);
    CHECK(c.max_iter == 8000);
    CHECK(c.sparse_iter == 6000);
    CHECK(c.prune_tol == 1e-3);
    CHECK(c.prune_interval == 20);
    CHECK(c.epsilon == 0.01);
    CHECK(c.error_cap == 0.5);
    CHECK(c.deterministic == 1);
    char* json = nullptr;
    REQUIRE(gs_config_to_json(&c, &json) == GS_OK);
    CHECK(std::string(json).find("\"max_iter\":8000") != std::string::npos);
    gs_string_free(json);
    CHECK(std::strlen(gs_version()) > 0);
}

TEST_CASE("molecule handles and errors") {
    gs_molecule* m = nullptr;
    REQUIRE(gs_molecule_parse(kOneAtom, &m) == GS_OK);
    CHECK(gs_molecule_atom_count(m) == 1);
    gs_atom a;
    REQUIRE(gs_molecule_atom(m, 0, &a) == GS_OK);
    CHECK(a.radius == 1.5);
    CHECK(gs_molecule_atom(m, 1, &a) == GS_ERR_INVALID_ARGUMENT);
    double lo[3], hi[3];
    REQUIRE(gs_molecule_bounding_box(m, -1.0, lo, hi) == GS_OK);
    CHECK(lo[0] == -6.0);  // radius 1.5 plus the default padding 1.5 + 3
    CHECK(hi[2] == 6.0);
    const double pts[6] = {0, 0, 0, 1.5, 0, 0};
    double vals[2];
    REQUIRE(gs_molecule_eval_phi(m, 0.5, pts, 2, vals) == GS_OK);
    CHECK(vals[0] == doctest::Approx(std::exp(1.125)));
    CHECK(vals[1] == 1.0);
    gs_molecule_free(m);

    gs_molecule* bad = nullptr;
    CHECK(gs_molecule_parse("ATOM 1 C ALA 1 0 0 zz 0 1\n", &bad) == GS_ERR_PARSE);
    CHECK(bad == nullptr);
    CHECK(std::string(gs_last_error()).find("line 1") != std::string::npos);
    CHECK(gs_molecule_parse("ATOM 1 C ALA 1 0 0 0 0 -1\n", &bad) == GS_ERR_PARSE);
    CHECK(gs_molecule_load("/nonexistent.pqr", &bad) == GS_ERR_IO);
    CHECK(gs_molecule_parse(nullptr, &bad) == GS_ERR_INVALID_ARGUMENT);
    gs_molecule_free(nullptr);
}

TEST_CASE("initial model equals the field") {
    gs_molecule* m = nullptr;
    REQUIRE(gs_molecule_load(GSPARSE_DATA_DIR "/diala.pqr", &m) == GS_OK);
    gs_model* model = nullptr;
    REQUIRE(gs_model_init(m, 0.5, &model) == GS_OK);
    CHECK(gs_model_basis_count(model) == 22);
    std::vector<double> pts;
    for (int i = 0; i < 300; ++i) pts.push_back(0.05 * i - 2), pts.push_back(0.03 * i), pts.push_back(-0.02 * i);
    std::vector<double> a(100), b(100);
    REQUIRE(gs_molecule_eval_phi(m, 0.5, pts.data(), 100, a.data()) == GS_OK);
    REQUIRE(gs_model_eval(model, pts.data(), 100, b.data()) == GS_OK);
    for (int i = 0; i < 100; ++i) CHECK(std::abs(a[i] - b[i]) < 1e-10);
    gs_basis basis;
    REQUIRE(gs_model_basis(model, 0, &basis) == GS_OK);
    CHECK(basis.decays[1] == doctest::Approx(0.5));
    gs_model_free(model);
    gs_molecule_free(m);
}

TEST_CASE("sparsify, persist and mesh") {
    gs_molecule* m = nullptr;
    REQUIRE(gs_molecule_parse(kOneAtom, &m) == GS_OK);
    const gs_config cfg = quick_config();
    int calls = 0;
    auto cb = [](const gs_trace_record*, void* user) { ++*static_cast<int*>(user); };
    gs_model* model = nullptr;
    gs_trace* trace = nullptr;
    gs_run_summary sum;
    REQUIRE(gs_sparsify(m, &cfg, cb, &calls, &model, &trace, &sum) == GS_OK);
    CHECK(calls == 100);
    CHECK(sum.atom_count == 1);
    CHECK(sum.basis_count == 1);
    CHECK(sum.sparse_ratio == 1.0);
    CHECK(gs_trace_length(trace) == 100);
    gs_trace_record r;
    REQUIRE(gs_trace_record_at(trace, 99, &r) == GS_OK);
    CHECK(r.iter == 100);
    CHECK(r.wl == 0.0);

    const fs::path path = scratch("one.json");
    REQUIRE(gs_model_save(model, path.c_str()) == GS_OK);
    gs_model* loaded = nullptr;
    REQUIRE(gs_model_load(path.c_str(), &loaded) == GS_OK);
    double lo[3], hi[3];
    REQUIRE(gs_model_box(loaded, lo, hi) == GS_OK);
    CHECK(lo[0] == sum.box_min[0]);
    CHECK(hi[1] == sum.box_max[1]);

    // Model-file route and in-memory route give the same mesh.
    gs_mesh* mem = nullptr;
    gs_mesh* file = nullptr;
    REQUIRE(gs_mesh_model(model, &cfg, nullptr, nullptr, &mem) == GS_OK);
    REQUIRE(gs_mesh_model(loaded, &cfg, nullptr, nullptr, &file) == GS_OK);
    const MeshData a = copy_mesh(mem), b = copy_mesh(file);
    CHECK(a.v == b.v);
    CHECK(a.t == b.t);
    CHECK(gs_mesh_area(mem) > 20.0);

    gs_mesh* mol_mesh = nullptr;
    REQUIRE(gs_mesh_molecule(m, &cfg, nullptr, nullptr, &mol_mesh) == GS_OK);
    double h = -1;
    REQUIRE(gs_hausdorff(mol_mesh, mol_mesh, 10, &h) == GS_OK);
    CHECK(h <= 1e-12);

    REQUIRE(gs_trace_write_csv(trace, &cfg, scratch("trace.csv").c_str()) == GS_OK);
    REQUIRE(gs_model_write_weights(model, scratch("w.txt").c_str()) == GS_OK);
    REQUIRE(gs_mesh_write_obj(mem, &cfg, scratch("m.obj").c_str()) == GS_OK);
    REQUIRE(gs_constraints_write_csv(m, &cfg, scratch("c.csv").c_str()) == GS_OK);
    CHECK(gs_mesh_write_obj(mem, &cfg, "/nonexistent/dir/m.obj") == GS_ERR_IO);

    gs_report rep;
    REQUIRE(gs_compare(m, model, &cfg, &rep) == GS_OK);
    CHECK(rep.error_area < 0.01);
    REQUIRE(gs_report_write_json(&rep, &cfg, scratch("r.json").c_str()) == GS_OK);

    gs_mesh_free(mem);
    gs_mesh_free(file);
    gs_mesh_free(mol_mesh);
    gs_model_free(loaded);
    gs_model_free(model);
    gs_trace_free(trace);
    gs_molecule_free(m);
}

TEST_CASE("collapse returns the partial state") {
    gs_molecule* m = nullptr;
    REQUIRE(gs_molecule_parse(kOneAtom, &m) == GS_OK);
    gs_config cfg = quick_config();
    cfg.prune_tol = 100.0;
    gs_model* model = nullptr;
    gs_trace* trace = nullptr;
    CHECK(gs_sparsify(m, &cfg, nullptr, nullptr, &model, &trace, nullptr) == GS_ERR_COLLAPSE);
    REQUIRE(trace != nullptr);
    CHECK(gs_trace_length(trace) == 19);
    REQUIRE(model != nullptr);
    CHECK(gs_model_basis_count(model) == 1);
    gs_trace_free(trace);
    gs_model_free(model);

    cfg = quick_config();
    cfg.sparse_iter = cfg.max_iter + 1;
    CHECK(gs_sparsify(m, &cfg, nullptr, nullptr, nullptr, nullptr, nullptr) == GS_ERR_INVALID_ARGUMENT);
    gs_molecule_free(m);
}

TEST_CASE("mesh and selection failures") {
    gs_molecule* m = nullptr;
    REQUIRE(gs_molecule_parse(kOneAtom, &m) == GS_OK);
    gs_config cfg = quick_config();
    cfg.isovalue = 1e6;
    gs_mesh* mesh = nullptr;
    CHECK(gs_mesh_molecule(m, &cfg, nullptr, nullptr, &mesh) == GS_ERR_MESH);
    CHECK(mesh == nullptr);

    cfg = quick_config();
    cfg.band = 1e-9;
    cfg.constraint_spacing = 2.9;
    CHECK(gs_sparsify(m, &cfg, nullptr, nullptr, nullptr, nullptr, nullptr) == GS_ERR_EMPTY_SELECTION);
    gs_molecule_free(m);
}

}  // TEST_SUITE
