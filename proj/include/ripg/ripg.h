/* Stream-function Stokes solver: C interface.
 *
 * All functions return a ripg_status. On failure the output arguments are
 * left untouched and ripg_last_error() describes the problem (per thread).
 * Handles are opaque and owned by the caller; release them with the
 * matching *_destroy function. Destroy functions accept NULL.
 */
#ifndef RIPG_RIPG_H
#define RIPG_RIPG_H

#include <stddef.h>
#include <stdint.h>

#if defined(RIPG_BUILDING_LIBRARY)
#define RIPG_API __attribute__((visibility("default")))
#else
#define RIPG_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ripg_status {
  RIPG_OK = 0,
  RIPG_INVALID_ARGUMENT = 1,
  RIPG_DEGENERATE_GEOMETRY = 2,
  RIPG_NOT_SPD = 3,
  RIPG_SINGULAR = 4,
  RIPG_NOT_CONVERGED = 5,
  RIPG_NON_FINITE = 6,
  RIPG_OUTSIDE_DOMAIN = 7,
  RIPG_IO = 8,
  RIPG_INTERNAL = 9
} ripg_status;

RIPG_API const char* ripg_status_string(ripg_status status);
/* Message of the last failed call on this thread ("" if none). */
RIPG_API const char* ripg_last_error(void);
RIPG_API const char* ripg_version(void);

/* Warnings (for instance a penalty scaling below the coercivity threshold)
 * go to stderr unless a callback is installed. A NULL callback silences
 * them. */
typedef void (*ripg_warning_callback)(const char* message, void* user_data);
RIPG_API void ripg_set_warning_callback(ripg_warning_callback callback, void* user_data);

/* ---- Meshes ---------------------------------------------------------- */

typedef struct ripg_mesh ripg_mesh;

/* n x n squares of the box, each split along its lower-left to upper-right
 * diagonal. */
RIPG_API ripg_status ripg_mesh_create_structured(double x0, double y0, double x1, double y1,
                                                 int n, ripg_mesh** out);
/* xy: 2 * num_vertices coordinates; cells: 3 * num_cells vertex indices
 * (counter-clockwise). */
RIPG_API ripg_status ripg_mesh_create(const double* xy, size_t num_vertices,
                                      const int32_t* cells, size_t num_cells, ripg_mesh** out);
RIPG_API void ripg_mesh_destroy(ripg_mesh* mesh);
RIPG_API ripg_status ripg_mesh_counts(const ripg_mesh* mesh, size_t* num_vertices,
                                      size_t* num_cells, size_t* num_facets);
RIPG_API ripg_status ripg_mesh_size(const ripg_mesh* mesh, double* h);
/* Writes vertices.csv and cells.csv, creating the directory if needed. */
RIPG_API ripg_status ripg_mesh_write_csv(const ripg_mesh* mesh, const char* directory);

/* ---- Manufactured solution on (-1, 1)^2 ------------------------------ */

typedef struct ripg_mms_result {
  int spd;              /* 1 when the operator factorized */
  size_t dofs;
  double h;
  double l2_stream;     /* the remaining fields are NaN when spd == 0 */
  double l2_velocity;
  double h1_velocity;
  double dg;
  double max_divergence;
  double max_normal_flux;
  double max_speed;
  double relative_residual;
} ripg_mms_result;

/* Solves on the n x n structured mesh with polynomial degree p >= 2 and
 * penalty scaling delta. An indefinite operator is reported through
 * result->spd with status RIPG_NOT_SPD. */
RIPG_API ripg_status ripg_mms_solve(int n, int degree, double delta, ripg_mms_result* result);

/* ---- Convection benchmarks ------------------------------------------- */

typedef struct ripg_case_info {
  const char* name;  /* static storage */
  double rayleigh;
  double viscosity_contrast_temperature;
  double viscosity_contrast_depth;
  double yield_stress;
  double nusselt_ref;
  double u_rms_ref;
} ripg_case_info;

RIPG_API size_t ripg_case_count(void);
RIPG_API ripg_status ripg_case_get(size_t index, ripg_case_info* info);
RIPG_API ripg_status ripg_case_find(const char* name, ripg_case_info* info);

typedef struct ripg_picard_options {
  int max_iterations;
  double relaxation;  /* <= 0: case default */
  double temperature_tolerance;
  double nusselt_tolerance;
  double delta;
} ripg_picard_options;

RIPG_API void ripg_picard_options_default(ripg_picard_options* options);

typedef struct ripg_steady ripg_steady;

/* Steady state on the n x n unit-square mesh. Returns RIPG_NOT_CONVERGED
 * with a valid handle when the iteration limit is hit; the handle then holds
 * the last iterate. */
RIPG_API ripg_status ripg_steady_solve(const char* case_name, int n, int degree,
                                       const ripg_picard_options* options, ripg_steady** out);
RIPG_API void ripg_steady_destroy(ripg_steady* state);

typedef struct ripg_functionals {
  double nusselt;
  double u_rms;
  double work;
  double dissipation;
  double balance;  /* NaN when undefined */
  int negative_work;
  size_t dofs;
  double h;
  int degree;
  double eps_nusselt;
  double eps_u_rms;
  int converged;
  int iterations;
  double relaxation;
  double max_divergence;
  double max_normal_flux;
  double max_speed;
} ripg_functionals;

RIPG_API ripg_status ripg_steady_functionals(const ripg_steady* state, ripg_functionals* out);
RIPG_API ripg_status ripg_steady_velocity(const ripg_steady* state, double x, double y,
                                          double* u);
RIPG_API ripg_status ripg_steady_write_trace(const ripg_steady* state, const char* path);
/* Nodal values x,y,value of the stream function and temperature. */
RIPG_API ripg_status ripg_steady_write_fields(const ripg_steady* state,
                                              const char* stream_path,
                                              const char* temperature_path);

/* ---- Tracers --------------------------------------------------------- */

typedef struct ripg_tracers ripg_tracers;

/* nx * ny equidistant particles in the velocity field of a steady state.
 * The tracer set keeps its own reference to the field. */
RIPG_API ripg_status ripg_tracers_create(const ripg_steady* state, int nx, int ny,
                                         ripg_tracers** out);
RIPG_API void ripg_tracers_destroy(ripg_tracers* tracers);
RIPG_API ripg_status ripg_tracers_advect(ripg_tracers* tracers, double dt, int steps,
                                         size_t* projected);
RIPG_API ripg_status ripg_tracers_stats(const ripg_tracers* tracers, double* mean,
                                        double* std);
RIPG_API ripg_status ripg_tracers_count(const ripg_tracers* tracers, size_t* count);
/* Copies min(count, capacity) positions as x,y pairs. */
RIPG_API ripg_status ripg_tracers_positions(const ripg_tracers* tracers, double* xy,
                                            size_t capacity);
RIPG_API ripg_status ripg_tracers_write_snapshot(const ripg_tracers* tracers, int step,
                                                 const char* path, int append);

/* ---- Analysis -------------------------------------------------------- */

/* Least-squares slope of log(error) against log(h) over the `levels` finest
 * levels (0 = all); *monotone is 0 when the errors do not decrease with h. */
RIPG_API ripg_status ripg_convergence_rate(const double* h, const double* errors, size_t n,
                                           size_t levels, double* slope, int* monotone);

#ifdef __cplusplus
}
#endif

#endif /* RIPG_RIPG_H */
