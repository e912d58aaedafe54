// Copyright 2026 The pam Authors
// SPDX-License-Identifier: Apache-2.0

#include "pam.h"

#include <cstring>
#include <limits>
#include <new>
#include <string>

#include "pam/experiments.hpp"
#include "pam/field.hpp"
#include "pam/limit_laws.hpp"
#include "pam/poisson_sim.hpp"
#include "pam/scales.hpp"
#include "pam/solver.hpp"

namespace {

thread_local std::string g_last_error;

pam_status fail(pam_status code, const char* what) {
  g_last_error = what ? what : "unknown error";
  return code;
}

// Run `fn`, translating C++ exceptions to status codes.
template <typename Fn>
pam_status guarded(Fn&& fn) {
  try {
    fn();
    return PAM_OK;
  } catch (const pam::DomainError& e) {
    return fail(PAM_ERR_DOMAIN, e.what());
  } catch (const pam::CoverageError& e) {
    return fail(PAM_ERR_COVERAGE, e.what());
  } catch (const pam::CertificationError& e) {
    return fail(PAM_ERR_CERTIFICATION, e.what());
  } catch (const pam::BudgetError& e) {
    return fail(PAM_ERR_BUDGET, e.what());
  } catch (const pam::NumericError& e) {
    return fail(PAM_ERR_NUMERIC, e.what());
  } catch (const pam::ResourceError& e) {
    return fail(PAM_ERR_RESOURCE, e.what());
  } catch (const pam::IoError& e) {
    return fail(PAM_ERR_IO, e.what());
  } catch (const pam::ContractError& e) {
    return fail(PAM_ERR_CONTRACT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(PAM_ERR_RESOURCE, "out of memory");
  } catch (const std::exception& e) {
    return fail(PAM_ERR_UNKNOWN, e.what());
  } catch (...) {
    return fail(PAM_ERR_UNKNOWN, nullptr);
  }
}

pam_status require(bool ok, const char* what) {
  return ok ? PAM_OK : fail(PAM_ERR_CONTRACT, what);
}

pam::Site to_site(const long long* z, int d) {
  return pam::Site(z, z + d);
}

}  // namespace

struct pam_field {
  pam::PotentialField field;
};

struct pam_solve_result {
  pam::SolveResult result;
};

extern "C" {

const char* pam_last_error(void) { return g_last_error.c_str(); }

pam_status pam_field_create(int d, long long radius, double gamma,
                            uint64_t seed, pam_field** out) {
  if (pam_status s = require(out != nullptr, "null output pointer")) return s;
  return guarded([&] {
    *out = new pam_field{pam::sample_field(d, radius, gamma, seed)};
  });
}

pam_status pam_field_load(const char* path, pam_field** out) {
  if (pam_status s = require(out && path, "null argument")) return s;
  return guarded([&] {
    *out = new pam_field{pam::PotentialField::load(path)};
  });
}

pam_status pam_field_save(const pam_field* field, const char* path) {
  if (pam_status s = require(field && path, "null argument")) return s;
  return guarded([&] { field->field.save(path); });
}

void pam_field_free(pam_field* field) { delete field; }

pam_status pam_field_value(const pam_field* field, const long long* z,
                           double* out) {
  if (pam_status s = require(field && z && out, "null argument")) return s;
  return guarded([&] {
    *out = field->field.value(to_site(z, field->field.dimension()));
  });
}

pam_status pam_site_value(int d, double gamma, uint64_t seed,
                          const long long* z, double* out) {
  if (pam_status s = require(z && out, "null argument")) return s;
  return guarded([&] {
    pam::FieldParams fp{d, gamma, seed};
    if (d < 1) throw pam::DomainError("d must be >= 1");
    *out = pam::field_value(fp, z);
  });
}

pam_status pam_order_statistics(int d, double gamma, uint64_t seed,
                                long long r, size_t k, long long* sites_out,
                                double* values_out) {
  if (pam_status s = require(sites_out && values_out, "null argument")) return s;
  return guarded([&] {
    pam::FieldParams fp{d, gamma, seed};
    auto top = pam::order_statistics(fp, r, k);
    for (size_t i = 0; i < top.size(); ++i) {
      std::memcpy(sites_out + i * static_cast<size_t>(d), top[i].first.data(),
                  sizeof(long long) * static_cast<size_t>(d));
      values_out[i] = top[i].second;
    }
  });
}

pam_status pam_compute_scales(double gamma, int d, double t,
                              pam_scale_set* out) {
  if (pam_status s = require(out != nullptr, "null output pointer")) return s;
  return guarded([&] {
    pam::ScaleSet sc = pam::compute_scales(gamma, d, t);
    out->r_t = sc.r_t;
    out->a_rt = sc.a_rt;
    out->d_rt = sc.d_rt;
    out->theta = sc.theta;
  });
}

pam_status pam_locate_maxima(int d, double gamma, uint64_t seed,
                             long long box_radius, double t, double c,
                             long long* z1_out, long long* z2_out,
                             double* psi1_out, double* psi2_out,
                             double* defect_out) {
  if (pam_status s = require(z1_out && z2_out && psi1_out && psi2_out &&
                                 defect_out,
                             "null argument"))
    return s;
  return guarded([&] {
    pam::FieldParams fp{d, gamma, seed};
    pam::PsiMaxima m = pam::locate_maxima(fp, box_radius, t, c);
    std::memcpy(z1_out, m.z1.data(), sizeof(long long) * static_cast<size_t>(d));
    std::memcpy(z2_out, m.z2.data(), sizeof(long long) * static_cast<size_t>(d));
    *psi1_out = m.psi1;
    *psi2_out = m.psi2;
    *defect_out = m.coverage_defect;
  });
}

pam_status pam_locate_maxima_certified(int d, double gamma, uint64_t seed,
                                       double t, double c, double epsilon,
                                       long long* z1_out, long long* z2_out,
                                       double* psi1_out, double* psi2_out,
                                       double* defect_out,
                                       long long* box_radius_out) {
  if (pam_status s = require(z1_out && z2_out && psi1_out && psi2_out &&
                                 defect_out && box_radius_out,
                             "null argument"))
    return s;
  return guarded([&] {
    pam::FieldParams fp{d, gamma, seed};
    pam::BoxPolicy pol;
    pol.epsilon = epsilon;
    pam::PsiMaxima m = pam::locate_maxima_certified(fp, t, c, pol);
    std::memcpy(z1_out, m.z1.data(), sizeof(long long) * static_cast<size_t>(d));
    std::memcpy(z2_out, m.z2.data(), sizeof(long long) * static_cast<size_t>(d));
    *psi1_out = m.psi1;
    *psi2_out = m.psi2;
    *defect_out = m.coverage_defect;
    *box_radius_out = m.box_radius;
  });
}

pam_status pam_ageing_time(int d, double gamma, uint64_t seed,
                           long long box_radius, double t, double horizon,
                           double epsilon, double* out) {
  if (pam_status s = require(out != nullptr, "null output pointer")) return s;
  return guarded([&] {
    pam::FieldParams fp{d, gamma, seed};
    *out = pam::ageing_time(fp, box_radius, t, horizon, epsilon);
  });
}

pam_status pam_rescale_points(int d, double gamma, uint64_t seed,
                              long long box_radius, double t, double tau,
                              double alpha, double** points_out,
                              size_t* count_out) {
  if (pam_status s = require(points_out && count_out, "null argument")) return s;
  return guarded([&] {
    pam::FieldParams fp{d, gamma, seed};
    auto pts = pam::rescale_points(fp, box_radius, t, tau, alpha);
    size_t stride = static_cast<size_t>(d) + 1;
    double* buf = pts.empty() ? nullptr : new double[pts.size() * stride];
    for (size_t i = 0; i < pts.size(); ++i) {
      for (int j = 0; j < d; ++j)
        buf[i * stride + static_cast<size_t>(j)] = pts[i].x[static_cast<size_t>(j)];
      buf[i * stride + static_cast<size_t>(d)] = pts[i].y;
    }
    *points_out = buf;
    *count_out = pts.size();
  });
}

void pam_buffer_free(double* buffer) { delete[] buffer; }

pam_status pam_solve_pde(int d, double gamma, uint64_t seed,
                         long long box_radius, const double* t_grid,
                         size_t n_times, double rel_tol,
                         pam_solve_result** out) {
  if (pam_status s = require(out && t_grid && n_times > 0, "null argument"))
    return s;
  return guarded([&] {
    pam::FieldParams fp{d, gamma, seed};
    std::vector<double> grid(t_grid, t_grid + n_times);
    *out = new pam_solve_result{pam::solve_pde(fp, box_radius, grid, rel_tol)};
  });
}

void pam_solve_result_free(pam_solve_result* result) { delete result; }

size_t pam_solve_num_times(const pam_solve_result* r) {
  return r ? r->result.times.size() : 0;
}

size_t pam_solve_num_sites(const pam_solve_result* r) {
  return r ? r->result.sites.size() : 0;
}

double pam_solve_log_mass(const pam_solve_result* r, size_t time_index) {
  if (!r || time_index >= r->result.log_total_mass.size())
    return std::numeric_limits<double>::quiet_NaN();
  return r->result.log_total_mass[time_index];
}

void pam_solve_site(const pam_solve_result* r, size_t site_index,
                    long long* coords_out) {
  if (!r || !coords_out || site_index >= r->result.sites.size()) return;
  const pam::Site& z = r->result.sites[site_index];
  std::memcpy(coords_out, z.data(), sizeof(long long) * z.size());
}

double pam_solve_mass(const pam_solve_result* r, size_t time_index,
                      size_t site_index) {
  if (!r || time_index >= r->result.profiles.size() ||
      site_index >= r->result.sites.size())
    return std::numeric_limits<double>::quiet_NaN();
  return r->result.profiles[time_index][site_index];
}

void pam_solve_argmax(const pam_solve_result* r, size_t time_index,
                      long long* coords_out) {
  if (!r || !coords_out || time_index >= r->result.argmax_site.size()) return;
  const pam::Site& z = r->result.argmax_site[time_index];
  std::memcpy(coords_out, z.data(), sizeof(long long) * z.size());
}

pam_status pam_feynman_kac(int d, double gamma, uint64_t seed,
                           long long box_radius, double t,
                           const long long* targets, size_t n_targets,
                           size_t n_paths, uint64_t mc_seed,
                           double* total_out, double* total_err_out,
                           double* mass_out, double* mass_err_out) {
  if (pam_status s = require(total_out && total_err_out, "null argument"))
    return s;
  if (pam_status s = require(n_targets == 0 || (targets && mass_out && mass_err_out),
                             "target buffers missing"))
    return s;
  return guarded([&] {
    pam::FieldParams fp{d, gamma, seed};
    std::vector<pam::Site> tg;
    for (size_t i = 0; i < n_targets; ++i)
      tg.push_back(to_site(targets + i * static_cast<size_t>(d), d));
    std::optional<pam::Coord> box;
    if (box_radius >= 0) box = box_radius;
    pam::FkResult r = pam::feynman_kac_mc(fp, box, t, tg, n_paths, mc_seed);
    *total_out = r.total_mass;
    *total_err_out = r.total_mass_err;
    for (size_t i = 0; i < n_targets; ++i) {
      mass_out[i] = r.mass[i];
      mass_err_out[i] = r.mass_err[i];
    }
  });
}

pam_status pam_path_mass_split(int d, double gamma, uint64_t seed, double t,
                               const long long* z1, long long ball_radius,
                               size_t n_paths, uint64_t mc_seed,
                               double* u1_out, double* u1_err_out,
                               double* u2_out, double* u2_err_out) {
  if (pam_status s = require(z1 && u1_out && u1_err_out && u2_out && u2_err_out,
                             "null argument"))
    return s;
  return guarded([&] {
    pam::FieldParams fp{d, gamma, seed};
    pam::PathSplit r = pam::path_mass_split(fp, t, to_site(z1, d), ball_radius,
                                            n_paths, mc_seed);
    *u1_out = r.u1;
    *u1_err_out = r.u1_err;
    *u2_out = r.u2;
    *u2_err_out = r.u2_err;
  });
}

pam_status pam_principal_eigen(int d, double gamma, uint64_t seed,
                               long long box_radius, double tol,
                               double* lambda1_out, double* lambda2_out,
                               double* residual_out, double* potential_gap_out) {
  if (pam_status s = require(lambda1_out != nullptr, "null output pointer"))
    return s;
  return guarded([&] {
    pam::FieldParams fp{d, gamma, seed};
    pam::SpectralResult r = pam::principal_eigen(fp, box_radius, tol);
    *lambda1_out = r.lambda1;
    if (lambda2_out) *lambda2_out = r.lambda2;
    if (residual_out) *residual_out = r.residual;
    if (potential_gap_out) *potential_gap_out = r.potential_gap;
  });
}

pam_status pam_intensity_tail(double gamma, int d, double y, double* out) {
  if (pam_status s = require(out != nullptr, "null output pointer")) return s;
  return guarded([&] {
    *out = pam::intensity_tail(y, pam::make_limit_params(gamma, d));
  });
}

pam_status pam_density_p1(double gamma, int d, double abs_x, double* out) {
  if (pam_status s = require(out != nullptr, "null output pointer")) return s;
  return guarded([&] {
    *out = pam::density_p1_radial(abs_x, pam::make_limit_params(gamma, d));
  });
}

pam_status pam_density_joint(double gamma, int d, double abs_x1, double y1,
                             double abs_x2, double y2, double* out) {
  if (pam_status s = require(out != nullptr, "null output pointer")) return s;
  return guarded([&] {
    *out = pam::density_joint(abs_x1, y1, abs_x2, y2,
                              pam::make_limit_params(gamma, d));
  });
}

pam_status pam_nu_dw(double gamma, int d, double abs_x, double y, double w,
                     int w_is_inf, double* out) {
  if (pam_status s = require(out != nullptr, "null output pointer")) return s;
  return guarded([&] {
    double weff = w_is_inf ? std::numeric_limits<double>::infinity() : w;
    *out = pam::nu_Dw(abs_x, y, weff, pam::make_limit_params(gamma, d));
  });
}

pam_status pam_ageing_cdf(double gamma, int d, double w, double quad_tol,
                          double* out) {
  if (pam_status s = require(out != nullptr, "null output pointer")) return s;
  return guarded([&] {
    *out = pam::ageing_cdf(w, pam::make_limit_params(gamma, d), quad_tol);
  });
}

pam_status pam_ageing_survival_mc(double gamma, int d, double w,
                                  size_t n_samples, uint64_t seed,
                                  double* estimate_out, double* stderr_out,
                                  double* certified_rate_out) {
  if (pam_status s = require(estimate_out && stderr_out, "null argument"))
    return s;
  return guarded([&] {
    pam::McEstimate r = pam::ageing_survival_mc(pam::make_limit_params(gamma, d),
                                                w, n_samples, seed);
    *estimate_out = r.estimate;
    *stderr_out = r.stderr_;
    if (certified_rate_out) *certified_rate_out = r.certified_rate;
  });
}

pam_status pam_sample_top_two(double gamma, int d, uint64_t seed,
                              double* x1_out, double* y1_out,
                              double* x2_out, double* y2_out) {
  if (pam_status s = require(x1_out && y1_out && x2_out && y2_out,
                             "null argument"))
    return s;
  return guarded([&] {
    pam::TopTwoSample t = pam::sample_top_two(pam::make_limit_params(gamma, d),
                                              seed);
    for (int i = 0; i < d; ++i) {
      x1_out[i] = t.x1[static_cast<size_t>(i)];
      x2_out[i] = t.x2[static_cast<size_t>(i)];
    }
    *y1_out = t.y1;
    *y2_out = t.y2;
  });
}

pam_status pam_run_experiment(const char* config_path, int* all_pass_out) {
  if (pam_status s = require(config_path && all_pass_out, "null argument"))
    return s;
  return guarded([&] {
    pam::ExperimentConfig cfg = pam::load_config(config_path);
    pam::ExperimentResult res = pam::run_experiment(cfg);
    *all_pass_out = res.all_pass ? 1 : 0;
  });
}

}  // extern "C"
