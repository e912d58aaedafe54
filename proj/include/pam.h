/* Copyright 2026 The pam Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the lattice Anderson-model laboratory. All entry points
 * return a pam_status; on failure pam_last_error() describes the problem
 * for the calling thread. Handles are opaque and freed by their pair'd
 * _free function.
 */

#ifndef PAM_H
#define PAM_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  PAM_OK = 0,
  PAM_ERR_DOMAIN = 1,       /* argument outside mathematical domain */
  PAM_ERR_CONTRACT = 2,     /* API misuse */
  PAM_ERR_COVERAGE = 3,     /* query outside generated region */
  PAM_ERR_CERTIFICATION = 4,/* probabilistic certificate not reached */
  PAM_ERR_NUMERIC = 5,      /* iteration / quadrature failure */
  PAM_ERR_BUDGET = 6,       /* Monte Carlo variance budget exceeded */
  PAM_ERR_RESOURCE = 7,     /* memory / size caps */
  PAM_ERR_IO = 8,
  PAM_ERR_UNKNOWN = 9
} pam_status;

/* Message for the most recent failure on this thread. */
const char* pam_last_error(void);

/* ---- potential field ---- */

typedef struct pam_field pam_field;

pam_status pam_field_create(int d, long long radius, double gamma,
                            uint64_t seed, pam_field** out);
pam_status pam_field_load(const char* path, pam_field** out);
pam_status pam_field_save(const pam_field* field, const char* path);
void pam_field_free(pam_field* field);

pam_status pam_field_value(const pam_field* field, const long long* z,
                           double* out);
/* Pure site value: no field object required. */
pam_status pam_site_value(int d, double gamma, uint64_t seed,
                          const long long* z, double* out);
/* Top k values over the l1 ball of radius r; sites_out holds k*d coords. */
pam_status pam_order_statistics(int d, double gamma, uint64_t seed,
                                long long r, size_t k, long long* sites_out,
                                double* values_out);

/* ---- scales and localisation ---- */

typedef struct {
  double r_t;
  double a_rt;
  double d_rt;
  double theta;
} pam_scale_set;

pam_status pam_compute_scales(double gamma, int d, double t,
                              pam_scale_set* out);

/* z1_out/z2_out hold d coordinates each. */
pam_status pam_locate_maxima(int d, double gamma, uint64_t seed,
                             long long box_radius, double t, double c,
                             long long* z1_out, long long* z2_out,
                             double* psi1_out, double* psi2_out,
                             double* defect_out);
pam_status pam_locate_maxima_certified(int d, double gamma, uint64_t seed,
                                       double t, double c, double epsilon,
                                       long long* z1_out, long long* z2_out,
                                       double* psi1_out, double* psi2_out,
                                       double* defect_out,
                                       long long* box_radius_out);

/* First argmax change in (t, t+horizon]; +infinity when none. */
pam_status pam_ageing_time(int d, double gamma, uint64_t seed,
                           long long box_radius, double t, double horizon,
                           double epsilon, double* out);

/* Rescaled window points, (d+1) doubles per point: x coords then y.
 * The buffer is allocated by the library; free with pam_buffer_free. */
pam_status pam_rescale_points(int d, double gamma, uint64_t seed,
                              long long box_radius, double t, double tau,
                              double alpha, double** points_out,
                              size_t* count_out);
void pam_buffer_free(double* buffer);

/* ---- solver ---- */

typedef struct pam_solve_result pam_solve_result;

pam_status pam_solve_pde(int d, double gamma, uint64_t seed,
                         long long box_radius, const double* t_grid,
                         size_t n_times, double rel_tol,
                         pam_solve_result** out);
void pam_solve_result_free(pam_solve_result* result);

size_t pam_solve_num_times(const pam_solve_result* result);
size_t pam_solve_num_sites(const pam_solve_result* result);
double pam_solve_log_mass(const pam_solve_result* result, size_t time_index);
void pam_solve_site(const pam_solve_result* result, size_t site_index,
                    long long* coords_out);
double pam_solve_mass(const pam_solve_result* result, size_t time_index,
                      size_t site_index);
void pam_solve_argmax(const pam_solve_result* result, size_t time_index,
                      long long* coords_out);

/* box_radius < 0 walks the unrestricted lattice. targets may be NULL. */
pam_status pam_feynman_kac(int d, double gamma, uint64_t seed,
                           long long box_radius, double t,
                           const long long* targets, size_t n_targets,
                           size_t n_paths, uint64_t mc_seed,
                           double* total_out, double* total_err_out,
                           double* mass_out, double* mass_err_out);

pam_status pam_path_mass_split(int d, double gamma, uint64_t seed, double t,
                               const long long* z1, long long ball_radius,
                               size_t n_paths, uint64_t mc_seed,
                               double* u1_out, double* u1_err_out,
                               double* u2_out, double* u2_err_out);

pam_status pam_principal_eigen(int d, double gamma, uint64_t seed,
                               long long box_radius, double tol,
                               double* lambda1_out, double* lambda2_out,
                               double* residual_out, double* potential_gap_out);

/* ---- limit laws ---- */

pam_status pam_intensity_tail(double gamma, int d, double y, double* out);
pam_status pam_density_p1(double gamma, int d, double abs_x, double* out);
pam_status pam_density_joint(double gamma, int d, double abs_x1, double y1,
                             double abs_x2, double y2, double* out);
/* w_is_inf != 0 selects the infinite-stretch flag (result +infinity). */
pam_status pam_nu_dw(double gamma, int d, double abs_x, double y, double w,
                     int w_is_inf, double* out);
pam_status pam_ageing_cdf(double gamma, int d, double w, double quad_tol,
                          double* out);

/* ---- limit-process simulation ---- */

pam_status pam_ageing_survival_mc(double gamma, int d, double w,
                                  size_t n_samples, uint64_t seed,
                                  double* estimate_out, double* stderr_out,
                                  double* certified_rate_out);

/* x1 gets d coords, then y1; likewise the rank-2 point. */
pam_status pam_sample_top_two(double gamma, int d, uint64_t seed,
                              double* x1_out, double* y1_out,
                              double* x2_out, double* y2_out);

/* ---- experiments ---- */

/* all_pass_out: 1 when every statistical verdict passed. */
pam_status pam_run_experiment(const char* config_path, int* all_pass_out);

#ifdef __cplusplus
}
#endif

#endif /* PAM_H */
