/*
 * gsparse C API.
 *
 * Every function returns a gs_status; on failure a thread-local message is
 * available from gs_last_error(). Objects are opaque handles released with
 * the matching *_free function (passing NULL is allowed). Arrays of 3-vectors
 * are flat, xyz-interleaved doubles.
 */
#ifndef GSPARSE_H
#define GSPARSE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(GSPARSE_BUILDING_LIBRARY)
#    define GSPARSE_API __declspec(dllexport)
#  else
#    define GSPARSE_API __declspec(dllimport)
#  endif
#else
#  define GSPARSE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values double as CLI exit codes. */
typedef enum gs_status {
    GS_OK = 0,
    GS_ERR_INVALID_ARGUMENT = 1,
    GS_ERR_PARSE = 2,     /* malformed or invalid input file */
    GS_ERR_COLLAPSE = 3,  /* optimisation collapsed or went non-finite */
    GS_ERR_MESH = 4,      /* isovalue never crossed */
    GS_ERR_IO = 5,
    GS_ERR_EMPTY_SELECTION = 6,
    GS_ERR_INTERNAL = 7
} gs_status;

typedef struct gs_molecule gs_molecule;
typedef struct gs_model gs_model;
typedef struct gs_trace gs_trace;
typedef struct gs_mesh gs_mesh;

typedef struct gs_config {
    double decay;               /* Gaussian decay d, 1/Å^2 */
    double isovalue;            /* level c */
    double band;                /* constraint band |phi - c| <= band */
    double constraint_spacing;  /* Å */
    double mesh_spacing;        /* Å */
    double padding;             /* Å; negative selects max radius + 3 */
    int kernel_cutoff;          /* skip kernel terms with exponent < -30 */
    int max_iter;
    int sparse_iter;
    double prune_tol;
    int prune_interval;
    double epsilon;             /* floor on w_s */
    double error_cap;           /* max pointwise error forcing (w_s, w_l) = (1, 0) */
    double armijo_c1;
    double ls_shrink;
    double ls_growth;
    double ls_initial_step;
    int ls_max_backtracks;
    int hausdorff_samples;      /* per triangle */
    int deterministic;
    unsigned threads;           /* 0: hardware concurrency */
    uint64_t seed;              /* reserved */
} gs_config;

typedef struct gs_atom {
    double center[3];
    double radius;
    double charge;
    long serial;
} gs_atom;

typedef struct gs_basis {
    double weight;      /* effective weight c~^2 */
    double decays[3];   /* effective decays d~^2 */
    double center[3];
    double angles[3];   /* alpha, beta, gamma, radians */
} gs_basis;

typedef struct gs_trace_record {
    int iter;
    double f;
    double es;
    double el1;
    double ws;
    double wl;
    size_t nbasis;
    double tau;
    double f_after;
    double max_error;
    int stalled;
    int pruned;
} gs_trace_record;

typedef struct gs_report {
    double area_original;
    double area_ours;
    double error_area;
    double volume_original;
    double volume_ours;
    double error_volume;
    double hausdorff;
} gs_report;

typedef struct gs_run_summary {
    size_t atom_count;
    size_t basis_count;
    size_t constraint_count;
    double sparse_ratio;
    double final_es;
    double max_error;
    double box_min[3];
    double box_max[3];
} gs_run_summary;

/* Called after every optimiser iteration. */
typedef void (*gs_progress_fn)(const gs_trace_record* record, void* user);

GSPARSE_API const char* gs_version(void);
GSPARSE_API const char* gs_last_error(void);
GSPARSE_API void gs_config_default(gs_config* config);
/* JSON text of the effective configuration; the caller frees it with gs_string_free. */
GSPARSE_API gs_status gs_config_to_json(const gs_config* config, char** out_json);
GSPARSE_API void gs_string_free(char* s);

/* Molecules. */
GSPARSE_API gs_status gs_molecule_load(const char* path, gs_molecule** out);
GSPARSE_API gs_status gs_molecule_parse(const char* text, gs_molecule** out);
GSPARSE_API void gs_molecule_free(gs_molecule* molecule);
GSPARSE_API size_t gs_molecule_atom_count(const gs_molecule* molecule);
GSPARSE_API gs_status gs_molecule_atom(const gs_molecule* molecule, size_t index, gs_atom* out);
/* padding < 0 selects the default (max radius + 3 Å). */
GSPARSE_API gs_status gs_molecule_bounding_box(const gs_molecule* molecule, double padding, double min[3],
                                               double max[3]);
GSPARSE_API gs_status gs_molecule_eval_phi(const gs_molecule* molecule, double decay, const double* points,
                                           size_t count, double* values);

/* Models. */
GSPARSE_API gs_status gs_model_init(const gs_molecule* molecule, double decay, gs_model** out);
GSPARSE_API void gs_model_free(gs_model* model);
GSPARSE_API size_t gs_model_basis_count(const gs_model* model);
GSPARSE_API gs_status gs_model_basis(const gs_model* model, size_t index, gs_basis* out);
GSPARSE_API gs_status gs_model_eval(const gs_model* model, const double* points, size_t count, double* values);
GSPARSE_API gs_status gs_model_load(const char* path, gs_model** out);
/* Sampling box stored with the model; GS_ERR_INVALID_ARGUMENT if absent. */
GSPARSE_API gs_status gs_model_box(const gs_model* model, double min[3], double max[3]);
GSPARSE_API gs_status gs_model_save(const gs_model* model, const char* path);
/* One effective weight per line. */
GSPARSE_API gs_status gs_model_write_weights(const gs_model* model, const char* path);

/* Fitting. On GS_ERR_COLLAPSE *out_trace (if requested) still receives the
 * partial trace and *out_model the state at the failure. */
GSPARSE_API gs_status gs_sparsify(const gs_molecule* molecule, const gs_config* config, gs_progress_fn progress,
                                  void* user, gs_model** out_model, gs_trace** out_trace,
                                  gs_run_summary* out_summary);
GSPARSE_API void gs_trace_free(gs_trace* trace);
GSPARSE_API size_t gs_trace_length(const gs_trace* trace);
GSPARSE_API gs_status gs_trace_record_at(const gs_trace* trace, size_t index, gs_trace_record* out);
GSPARSE_API gs_status gs_trace_write_csv(const gs_trace* trace, const gs_config* config, const char* path);
/* Writes x,y,z,phi for every selected constraint point. */
GSPARSE_API gs_status gs_constraints_write_csv(const gs_molecule* molecule, const gs_config* config,
                                               const char* path);

/* Meshing and metrics. */
GSPARSE_API gs_status gs_mesh_molecule(const gs_molecule* molecule, const gs_config* config, const double box_min[3],
                                       const double box_max[3], gs_mesh** out);
GSPARSE_API gs_status gs_mesh_model(const gs_model* model, const gs_config* config, const double box_min[3],
                                    const double box_max[3], gs_mesh** out);
GSPARSE_API void gs_mesh_free(gs_mesh* mesh);
GSPARSE_API size_t gs_mesh_vertex_count(const gs_mesh* mesh);
GSPARSE_API size_t gs_mesh_triangle_count(const gs_mesh* mesh);
/* Copies vertices (3 doubles each) / triangles (3 indices each) out. */
GSPARSE_API gs_status gs_mesh_vertices(const gs_mesh* mesh, double* out);
GSPARSE_API gs_status gs_mesh_triangles(const gs_mesh* mesh, uint32_t* out);
GSPARSE_API double gs_mesh_area(const gs_mesh* mesh);
GSPARSE_API double gs_mesh_volume(const gs_mesh* mesh);
GSPARSE_API gs_status gs_mesh_write_obj(const gs_mesh* mesh, const gs_config* config, const char* path);
GSPARSE_API gs_status gs_hausdorff(const gs_mesh* a, const gs_mesh* b, int samples_per_triangle, double* out);
GSPARSE_API gs_status gs_compare(const gs_molecule* molecule, const gs_model* model, const gs_config* config,
                                 gs_report* out);
GSPARSE_API gs_status gs_report_write_json(const gs_report* report, const gs_config* config, const char* path);
GSPARSE_API double gs_sparse_ratio(size_t n_erbf, size_t n_atom);

#ifdef __cplusplus
}
#endif

#endif /* GSPARSE_H */
