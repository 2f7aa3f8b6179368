#ifndef EMDEPHASE_H
#define EMDEPHASE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define EMD_API __declspec(dllexport)
#else
#define EMD_API __attribute__((visibility("default")))
#endif

typedef enum emd_status {
  EMD_OK = 0,
  EMD_INVALID_INPUT = 2,
  EMD_NON_CONVERGENCE = 3,
  EMD_IO = 4,
  EMD_INTERNAL = 5
} emd_status;

/* Warning bits on results. */
#define EMD_WARN_SHORT_AVERAGING 1u
#define EMD_WARN_BESSEL_UNDERFLOW 2u
#define EMD_WARN_DIRAC_REGIME 4u
#define EMD_WARN_OUTSIDE_VALIDITY 8u

typedef struct emd_params emd_params;

typedef struct emd_dephasing_result {
  double gamma_n;
  double estimated_error;
  double omega_min;
  double omega_max;
  double dominant_mode;
  uint64_t panels;
  unsigned warnings;
} emd_dephasing_result;

typedef struct emd_ensemble_result {
  double gamma_n;
  double estimated_error;
  double omega_min;
  double omega_max;
  double u_min;
  double u_max;
  unsigned warnings;
} emd_ensemble_result;

typedef struct emd_phases {
  double phi;
  double delta_phi;
} emd_phases;

typedef struct emd_witness_result {
  double witness;
  double margin;
  int detectable;
  int threshold_rule;
} emd_witness_result;

typedef struct emd_angles {
  double alpha;
  double beta;
  double theta0;
  double gamma;
  double value;
} emd_angles;

typedef struct emd_mc_result {
  double variance;
  double std_error;
  double mean;
  double mean_std_error;
  double dt;
  uint64_t realizations;
} emd_mc_result;

EMD_API const char* emd_version(void);
/* Message of the last failed call on this thread; empty when none. */
EMD_API const char* emd_last_error(void);

EMD_API emd_status emd_params_create(emd_params** out);
EMD_API void emd_params_destroy(emd_params* p);
EMD_API emd_status emd_params_load(emd_params* p, const char* path);
EMD_API emd_status emd_params_load_string(emd_params* p, const char* ini);
EMD_API emd_status emd_params_set(emd_params* p, const char* key, const char* value);
EMD_API emd_status emd_params_get_number(const emd_params* p, const char* key, double* out);
/* Copies up to len-1 bytes plus a terminator; *needed gets the full length + 1. */
EMD_API emd_status emd_params_get_string(const emd_params* p, const char* key, char* buf, size_t len,
                                         size_t* needed);
EMD_API emd_status emd_params_dump(const emd_params* p, char* buf, size_t len, size_t* needed);
/* Resolved sweep grid from sweep.values or sweep.min/max/points/scale. */
EMD_API emd_status emd_params_sweep_grid(const emd_params* p, double* buf, size_t len, size_t* needed);
EMD_API emd_status emd_params_number_list(const emd_params* p, const char* key, double* buf, size_t len,
                                          size_t* needed);

/* Single-encounter dephasing for run.channel. */
EMD_API emd_status emd_dephasing(const emd_params* p, emd_dephasing_result* out);
/* var in v, b, dx, q_int; out has n entries in grid order. */
EMD_API emd_status emd_sweep(const emd_params* p, const char* channel, const char* var,
                             const double* grid, size_t n, int threads, emd_dephasing_result* out);
/* pipeline: qgem, cnot, or a channel tag for a generic ensemble run. */
EMD_API emd_status emd_ensemble(const emd_params* p, const char* pipeline, double n_v,
                                emd_ensemble_result* out);
/* Uses witness.coupling, witness.d, witness.mass, witness.q1, witness.q2. */
EMD_API emd_status emd_entangling_phases(const emd_params* p, emd_phases* out);
EMD_API emd_status emd_witness(double delta_phi, double gamma_n, emd_witness_result* out);

/* out holds grid*grid values, row-major in alpha over [0, pi]. */
EMD_API emd_status emd_angle_map(const char* channel, double u, int grid, int threads, double* out);
EMD_API emd_status emd_optimal_angles(const char* channel, double u, emd_angles* out);

EMD_API emd_status emd_oracle_mc(const emd_params* p, uint64_t realizations, uint64_t seed, int threads,
                                 emd_mc_result* out);
EMD_API emd_status emd_periodogram_check(const emd_params* p, double record_length, double dt,
                                         double* max_deviation);

#ifdef __cplusplus
}
#endif

#endif
