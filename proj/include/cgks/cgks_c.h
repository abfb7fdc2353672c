/* C interface to the compact gas-kinetic solver. */
#ifndef CGKS_C_H
#define CGKS_C_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Return codes. */
#define CGKS_OK 0
#define CGKS_ERR_CONFIG 1  /* bad configuration, mesh spec or boundary setup */
#define CGKS_ERR_ABORT 2   /* solver aborted on a non-admissible state */
#define CGKS_ERR_IO 3      /* file could not be read or written */
#define CGKS_ERR_INVALID 4 /* bad argument (null handle, size mismatch) */
#define CGKS_ERR_INTERNAL 5

typedef struct cgks_config cgks_config;
typedef struct cgks_result cgks_result;

/* Message of the last failed call on this thread ("" if none). */
const char* cgks_last_error(void);
const char* cgks_version(void);

/* Configuration: defaults, then a sectioned key = value file, then overrides. */
int cgks_config_new(cgks_config** out);
int cgks_config_load(const char* path, cgks_config** out);
/* `key` is "section.key", e.g. "solver.cfl". Unknown keys are rejected. */
int cgks_config_set(cgks_config* cfg, const char* key, const char* value);
/* Short mesh label for tables, e.g. "20^3" or "1.6 x 10^3". Returns the full length. */
size_t cgks_config_label(const cgks_config* cfg, char* buf, size_t len);
void cgks_config_free(cgks_config* cfg);

/* Progress callback, called after each step. */
typedef void (*cgks_progress_fn)(long step, double time, void* user);

/* Runs the configured case to its end time. On CGKS_ERR_ABORT a diagnostic
   checkpoint is left in the output directory and *out is not set. */
int cgks_run(const cgks_config* cfg, cgks_progress_fn progress, void* user, cgks_result** out);

size_t cgks_result_cell_count(const cgks_result* r);
long cgks_result_steps(const cgks_result* r);
double cgks_result_time(const cgks_result* r);
double cgks_result_seconds(const cgks_result* r);
long cgks_result_flux_fallbacks(const cgks_result* r);
/* Density error norms; CGKS_ERR_INVALID when the case has no exact solution. */
int cgks_result_errors(const cgks_result* r, double* l1, double* l2, double* linf);
/* Copies n = cell count values of the cell-averaged density / compression factor. */
int cgks_result_density(const cgks_result* r, double* out, size_t n);
int cgks_result_alpha(const cgks_result* r, double* out, size_t n);
void cgks_result_free(cgks_result* r);

/* Formats a convergence table; norms holds (L1, L2, Linf) per row.
   Returns the full length; writes at most len - 1 characters plus a terminator. */
size_t cgks_convergence_table(const char* const* labels, const double* norms, size_t rows, char* buf, size_t len);

/* Mesh generation. spec: "hex:N", "hex:NXxNYxNZ" or "hybrid:N" on the box
   [0, L]^3 (box_length > 0); periodic != 0 pairs opposite faces. */
int cgks_mesh_generate(const char* spec, double box_length, int periodic, const char* path, size_t* cells);

#ifdef __cplusplus
}
#endif

#endif
