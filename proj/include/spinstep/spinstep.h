/* Copyright 2026 The spinstep Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface of libspinstep. All functions are thread-safe except that a
 * handle must not be destroyed while another thread uses it. On failure a
 * function returns a non-zero status and the message is available from
 * spinstep_last_error() on the same thread. Strings returned through a
 * char** are owned by the caller and released with spinstep_string_free().
 *
 * Spin states are flat arrays of 3N doubles: s1x, s1y, s1z, s2x, ...
 */
#ifndef SPINSTEP_SPINSTEP_H_
#define SPINSTEP_SPINSTEP_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(SPINSTEP_BUILDING_LIBRARY)
#define SPINSTEP_API __declspec(dllexport)
#else
#define SPINSTEP_API __declspec(dllimport)
#endif
#else
#define SPINSTEP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum spinstep_status {
  SPINSTEP_OK = 0,
  SPINSTEP_ERR_INVALID_ARGUMENT = 1,
  SPINSTEP_ERR_CONFIG = 2,
  SPINSTEP_ERR_NO_CONVERGENCE = 3,
  SPINSTEP_ERR_DEGENERATE_MIDPOINT = 4,
  SPINSTEP_ERR_COLLISION = 5,
  SPINSTEP_ERR_IO = 6,
  SPINSTEP_ERR_INTERNAL = 7
} spinstep_status;

typedef struct spinstep_system spinstep_system;
typedef struct spinstep_trajectory spinstep_trajectory;

/* Solver settings; pass NULL for the defaults (tolerance 1e-12, 100
 * iterations, 10 reference substeps). */
typedef struct spinstep_solver_options {
  double tolerance;
  int max_iterations;
  int reference_substeps;
} spinstep_solver_options;

/* Command-line style overrides applied on top of a config or preset. */
typedef struct spinstep_overrides {
  int has_seed;
  uint64_t seed;
  const char* out_dir; /* NULL: keep */
  const char* format;  /* "csv", "jsonl" or NULL */
  int has_tolerance;
  double tolerance;
  int has_max_iterations;
  int max_iterations;
} spinstep_overrides;

SPINSTEP_API const char* spinstep_version(void);

/* Message of the last failure on this thread ("" when none). */
SPINSTEP_API const char* spinstep_last_error(void);
/* Step index attached to the last failure, or -1. */
SPINSTEP_API long spinstep_last_error_step(void);
/* Config line attached to the last failure, or -1. */
SPINSTEP_API long spinstep_last_error_line(void);

SPINSTEP_API void spinstep_string_free(char* s);

/* `params` is "key=value" entries separated by ';' (NULL or "" for
 * defaults), e.g. "inertia=1,2,4" or "n=10;boundary=open". */
SPINSTEP_API spinstep_status spinstep_system_create(const char* name, const char* params,
                                                    spinstep_system** out);
SPINSTEP_API void spinstep_system_destroy(spinstep_system* system);
/* Fixed spin count of the system, or 0 when any N >= 1 is admissible. */
SPINSTEP_API size_t spinstep_system_spin_count(const spinstep_system* system);
SPINSTEP_API spinstep_status spinstep_system_energy(const spinstep_system* system,
                                                    const double* spins, size_t n_spins,
                                                    double t, double* out);

/* Method names: "spherical", "classical", "classical-g", "euler",
 * "reference". */
SPINSTEP_API spinstep_status spinstep_step(const spinstep_system* system, const char* method,
                                           const double* spins, size_t n_spins, double t,
                                           double dt, const spinstep_solver_options* options,
                                           double* out_spins, int* out_iterations);

SPINSTEP_API spinstep_status spinstep_integrate(const spinstep_system* system, const char* method,
                                                const double* spins, size_t n_spins, double t0,
                                                double dt, long num_steps,
                                                const spinstep_solver_options* options,
                                                spinstep_trajectory** out);
SPINSTEP_API void spinstep_trajectory_destroy(spinstep_trajectory* trajectory);
/* Number of recorded states (num_steps + 1). */
SPINSTEP_API size_t spinstep_trajectory_length(const spinstep_trajectory* trajectory);
SPINSTEP_API size_t spinstep_trajectory_spin_count(const spinstep_trajectory* trajectory);
SPINSTEP_API spinstep_status spinstep_trajectory_state(const spinstep_trajectory* trajectory,
                                                       size_t index, double* out_spins,
                                                       double* out_t);
/* Solver iterations of the step that produced state `index` (0 for the
 * initial state). */
SPINSTEP_API spinstep_status spinstep_trajectory_iterations(const spinstep_trajectory* trajectory,
                                                            size_t index, int* out);
/* max_n |H(s_n) - H(s_0)|; fails for time-dependent systems. */
SPINSTEP_API spinstep_status spinstep_trajectory_max_energy_error(
    const spinstep_trajectory* trajectory, double* out);

/* Exactly one of config_path / preset must be non-NULL. */
SPINSTEP_API spinstep_status spinstep_run(const char* config_path, const char* preset,
                                          const spinstep_overrides* overrides, char** summary);
SPINSTEP_API spinstep_status spinstep_section(const char* config_path, const char* preset,
                                              const spinstep_overrides* overrides,
                                              char** summary);

/* `suites` is a comma-separated list (NULL or "" for all). Reports go to
 * out_dir unless it is NULL. *all_passed is 1 iff every check passed. */
SPINSTEP_API spinstep_status spinstep_verify(const char* suites, uint64_t seed,
                                             const char* out_dir, char** report,
                                             int* all_passed);

/* One "name<TAB>description" line per entry. */
SPINSTEP_API spinstep_status spinstep_list_presets(char** out);
SPINSTEP_API spinstep_status spinstep_list_suites(char** out);
SPINSTEP_API spinstep_status spinstep_list_systems(char** out);
/* Full text of a preset config. */
SPINSTEP_API spinstep_status spinstep_preset_text(const char* name, char** out);

#ifdef __cplusplus
}
#endif

#endif /* SPINSTEP_SPINSTEP_H_ */
