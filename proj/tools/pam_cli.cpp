// Copyright 2026 The pam Authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. Links against the shared C API only.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pam.h"

namespace {

int die(pam_status status) {
  std::fprintf(stderr, "error (%d): %s\n", static_cast<int>(status),
               pam_last_error());
  return 1;
}

struct FieldArgs {
  int d = 1;
  double gamma = 1.0;
  std::uint64_t seed = 0;
};

void add_field_args(CLI::App* cmd, FieldArgs& fa) {
  cmd->add_option("--d", fa.d, "lattice dimension")->check(CLI::PositiveNumber);
  cmd->add_option("--gamma", fa.gamma, "Weibull shape")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", fa.seed, "field seed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lattice Anderson-model laboratory"};
  app.require_subcommand(1);

  // ---- field ----
  FieldArgs f_fa;
  long long f_radius = 10;
  std::string f_out;
  std::vector<long long> f_at;
  auto* c_field = app.add_subcommand("field", "sample or query a potential field");
  add_field_args(c_field, f_fa);
  c_field->add_option("--radius", f_radius, "cube radius");
  c_field->add_option("--out", f_out, "write the field to this file");
  c_field->add_option("--at", f_at, "print the value at these coordinates");

  // ---- locate ----
  FieldArgs l_fa;
  double l_t = 100.0, l_c = 0.0, l_eps = 1e-3;
  long long l_radius = -1;
  auto* c_locate = app.add_subcommand("locate", "top two of the concentration functional");
  add_field_args(c_locate, l_fa);
  c_locate->add_option("--t", l_t, "time")->required();
  c_locate->add_option("--c", l_c, "tilt constant");
  c_locate->add_option("--radius", l_radius, "fixed box radius (default: auto-grow)");
  c_locate->add_option("--epsilon", l_eps, "certification level");

  // ---- points ----
  FieldArgs p_fa;
  double p_t = 0, p_tau = -2.0, p_alpha = 1.0;
  long long p_radius = 0;
  auto* c_points = app.add_subcommand("points", "rescaled window point cloud (CSV)");
  add_field_args(c_points, p_fa);
  c_points->add_option("--t", p_t, "time")->required();
  c_points->add_option("--radius", p_radius, "scan radius")->required();
  c_points->add_option("--tau", p_tau, "window offset");
  c_points->add_option("--alpha", p_alpha, "window slope");

  // ---- ageing-time ----
  FieldArgs a_fa;
  double a_t = 0, a_horizon = 0, a_eps = 1e-3;
  long long a_radius = 0;
  auto* c_ageing = app.add_subcommand("ageing-time", "first argmax change after t");
  add_field_args(c_ageing, a_fa);
  c_ageing->add_option("--t", a_t, "time")->required();
  c_ageing->add_option("--horizon", a_horizon, "search horizon")->required();
  c_ageing->add_option("--radius", a_radius, "box radius")->required();
  c_ageing->add_option("--epsilon", a_eps, "certification level");

  // ---- solve ----
  FieldArgs s_fa;
  std::vector<double> s_grid;
  long long s_radius = 0;
  double s_rtol = 1e-8;
  bool s_profile = false;
  auto* c_solve = app.add_subcommand("solve", "Dirichlet-box Cauchy problem");
  add_field_args(c_solve, s_fa);
  c_solve->add_option("--t-grid", s_grid, "output times")->required();
  c_solve->add_option("--radius", s_radius, "box radius")->required();
  c_solve->add_option("--rel-tol", s_rtol, "integrator tolerance");
  c_solve->add_flag("--emit-profile", s_profile, "print the final mass profile");

  // ---- fk ----
  FieldArgs k_fa;
  double k_t = 0;
  std::size_t k_paths = 10000;
  long long k_radius = -1;
  std::uint64_t k_mc_seed = 1;
  std::vector<long long> k_target;
  auto* c_fk = app.add_subcommand("fk", "Feynman-Kac Monte Carlo oracle");
  add_field_args(c_fk, k_fa);
  c_fk->add_option("--t", k_t, "time")->required();
  c_fk->add_option("--paths", k_paths, "walk count");
  c_fk->add_option("--radius", k_radius, "kill outside this ball (-1: free)");
  c_fk->add_option("--mc-seed", k_mc_seed, "walk seed");
  c_fk->add_option("--target", k_target, "report u(t,z) at these coordinates");

  // ---- eigen ----
  FieldArgs e_fa;
  long long e_radius = 0;
  double e_tol = 1e-10;
  auto* c_eigen = app.add_subcommand("eigen", "principal eigenpair diagnostics");
  add_field_args(c_eigen, e_fa);
  c_eigen->add_option("--radius", e_radius, "box radius")->required();
  c_eigen->add_option("--tol", e_tol, "residual tolerance");

  // ---- limits ----
  std::string m_mode;
  double m_gamma = 1.0, m_x = 0, m_y = 0, m_x2 = 0, m_y2 = 0, m_w = 1.0,
         m_tol = 1e-8;
  int m_d = 1;
  bool m_w_inf = false;
  auto* c_limits = app.add_subcommand("limits", "closed-form limit laws");
  c_limits->add_option("mode", m_mode, "p1|joint|nu-tail|nu-dw|ageing-cdf")
      ->required();
  c_limits->add_option("--gamma", m_gamma)->check(CLI::PositiveNumber);
  c_limits->add_option("--d", m_d)->check(CLI::PositiveNumber);
  c_limits->add_option("--x", m_x, "|x| argument");
  c_limits->add_option("--y", m_y, "y argument");
  c_limits->add_option("--x2", m_x2, "|x2| argument");
  c_limits->add_option("--y2", m_y2, "y2 argument");
  c_limits->add_option("--w", m_w, "stretch parameter");
  c_limits->add_flag("--w-inf", m_w_inf, "infinite stretch flag");
  c_limits->add_option("--tol", m_tol, "quadrature tolerance");

  // ---- limit-sim ----
  double q_gamma = 1.0, q_w = 1.0;
  int q_d = 1;
  std::size_t q_samples = 10000;
  std::uint64_t q_seed = 1;
  auto* c_sim = app.add_subcommand("limit-sim", "limit-process survival sampler");
  c_sim->add_option("--gamma", q_gamma)->check(CLI::PositiveNumber);
  c_sim->add_option("--d", q_d)->check(CLI::PositiveNumber);
  c_sim->add_option("--w", q_w, "stretch parameter")->required();
  c_sim->add_option("--samples", q_samples, "sample count");
  c_sim->add_option("--seed", q_seed, "sampler seed");

  // ---- run ----
  std::string r_config;
  auto* c_run = app.add_subcommand("run", "run an experiment config");
  c_run->add_option("config", r_config, "JSON config file")->required();

  CLI11_PARSE(app, argc, argv);

  if (c_field->parsed()) {
    if (!f_at.empty()) {
      if (static_cast<int>(f_at.size()) != f_fa.d) {
        std::fprintf(stderr, "error: --at needs %d coordinates\n", f_fa.d);
        return 1;
      }
      double v = 0;
      if (pam_status s = pam_site_value(f_fa.d, f_fa.gamma, f_fa.seed,
                                        f_at.data(), &v))
        return die(s);
      std::printf("%.17g\n", v);
    }
    if (!f_out.empty()) {
      pam_field* field = nullptr;
      if (pam_status s = pam_field_create(f_fa.d, f_radius, f_fa.gamma,
                                          f_fa.seed, &field))
        return die(s);
      pam_status s = pam_field_save(field, f_out.c_str());
      pam_field_free(field);
      if (s) return die(s);
      std::printf("wrote %s\n", f_out.c_str());
    }
    return 0;
  }

  if (c_locate->parsed()) {
    std::vector<long long> z1(static_cast<std::size_t>(l_fa.d));
    std::vector<long long> z2(static_cast<std::size_t>(l_fa.d));
    double psi1 = 0, psi2 = 0, defect = 0;
    long long radius = l_radius;
    pam_status s =
        l_radius >= 0
            ? pam_locate_maxima(l_fa.d, l_fa.gamma, l_fa.seed, l_radius, l_t,
                                l_c, z1.data(), z2.data(), &psi1, &psi2, &defect)
            : pam_locate_maxima_certified(l_fa.d, l_fa.gamma, l_fa.seed, l_t,
                                          l_c, l_eps, z1.data(), z2.data(),
                                          &psi1, &psi2, &defect, &radius);
    if (s) return die(s);
    std::printf("z1 =");
    for (long long c : z1) std::printf(" %lld", c);
    std::printf("\nz2 =");
    for (long long c : z2) std::printf(" %lld", c);
    std::printf("\npsi1 = %.17g\npsi2 = %.17g\ndefect = %.3g\nradius = %lld\n",
                psi1, psi2, defect, radius);
    return 0;
  }

  if (c_points->parsed()) {
    double* pts = nullptr;
    std::size_t n = 0;
    if (pam_status s = pam_rescale_points(p_fa.d, p_fa.gamma, p_fa.seed,
                                          p_radius, p_t, p_tau, p_alpha, &pts,
                                          &n))
      return die(s);
    for (int j = 0; j < p_fa.d; ++j) std::printf("x%d,", j);
    std::printf("y\n");
    std::size_t stride = static_cast<std::size_t>(p_fa.d) + 1;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < stride; ++j)
        std::printf(j + 1 < stride ? "%.17g," : "%.17g\n", pts[i * stride + j]);
    }
    pam_buffer_free(pts);
    return 0;
  }

  if (c_ageing->parsed()) {
    double T = 0;
    if (pam_status s = pam_ageing_time(a_fa.d, a_fa.gamma, a_fa.seed, a_radius,
                                       a_t, a_horizon, a_eps, &T))
      return die(s);
    std::printf("%.17g\n", T);
    return 0;
  }

  if (c_solve->parsed()) {
    pam_solve_result* res = nullptr;
    if (pam_status s = pam_solve_pde(s_fa.d, s_fa.gamma, s_fa.seed, s_radius,
                                     s_grid.data(), s_grid.size(), s_rtol, &res))
      return die(s);
    std::printf("t,logU\n");
    for (std::size_t i = 0; i < pam_solve_num_times(res); ++i)
      std::printf("%.17g,%.17g\n", s_grid[i], pam_solve_log_mass(res, i));
    if (s_profile) {
      std::size_t last = pam_solve_num_times(res) - 1;
      std::printf("site,mass\n");
      std::vector<long long> z(static_cast<std::size_t>(s_fa.d));
      for (std::size_t i = 0; i < pam_solve_num_sites(res); ++i) {
        pam_solve_site(res, i, z.data());
        for (long long c : z) std::printf("%lld ", c);
        std::printf(",%.17g\n", pam_solve_mass(res, last, i));
      }
    }
    pam_solve_result_free(res);
    return 0;
  }

  if (c_fk->parsed()) {
    std::size_t n_targets = k_target.size() / static_cast<std::size_t>(k_fa.d);
    if (k_target.size() % static_cast<std::size_t>(k_fa.d) != 0) {
      std::fprintf(stderr, "error: --target needs multiples of %d coordinates\n",
                   k_fa.d);
      return 1;
    }
    double total = 0, total_err = 0;
    std::vector<double> mass(n_targets), mass_err(n_targets);
    if (pam_status s = pam_feynman_kac(k_fa.d, k_fa.gamma, k_fa.seed, k_radius,
                                       k_t, k_target.data(), n_targets, k_paths,
                                       k_mc_seed, &total, &total_err,
                                       mass.data(), mass_err.data()))
      return die(s);
    std::printf("U = %.17g +- %.17g\n", total, total_err);
    for (std::size_t i = 0; i < n_targets; ++i)
      std::printf("u[%zu] = %.17g +- %.17g\n", i, mass[i], mass_err[i]);
    return 0;
  }

  if (c_eigen->parsed()) {
    double l1 = 0, l2 = 0, resid = 0, gap = 0;
    if (pam_status s = pam_principal_eigen(e_fa.d, e_fa.gamma, e_fa.seed,
                                           e_radius, e_tol, &l1, &l2, &resid,
                                           &gap))
      return die(s);
    std::printf("lambda1 = %.17g\nlambda2 = %.17g\nresidual = %.3g\n"
                "potential_gap = %.17g\n",
                l1, l2, resid, gap);
    return 0;
  }

  if (c_limits->parsed()) {
    double out = 0;
    pam_status s = PAM_OK;
    if (m_mode == "p1")
      s = pam_density_p1(m_gamma, m_d, m_x, &out);
    else if (m_mode == "joint")
      s = pam_density_joint(m_gamma, m_d, m_x, m_y, m_x2, m_y2, &out);
    else if (m_mode == "nu-tail")
      s = pam_intensity_tail(m_gamma, m_d, m_y, &out);
    else if (m_mode == "nu-dw")
      s = pam_nu_dw(m_gamma, m_d, m_x, m_y, m_w, m_w_inf ? 1 : 0, &out);
    else if (m_mode == "ageing-cdf")
      s = pam_ageing_cdf(m_gamma, m_d, m_w, m_tol, &out);
    else {
      std::fprintf(stderr, "error: unknown limits mode '%s'\n", m_mode.c_str());
      return 1;
    }
    if (s) return die(s);
    std::printf("%.17g\n", out);
    return 0;
  }

  if (c_sim->parsed()) {
    double est = 0, err = 0, rate = 0;
    if (pam_status s = pam_ageing_survival_mc(q_gamma, q_d, q_w, q_samples,
                                              q_seed, &est, &err, &rate))
      return die(s);
    std::printf("{\"estimate\": %.17g, \"stderr\": %.17g, "
                "\"certified_rate\": %.17g}\n",
                est, err, rate);
    return 0;
  }

  if (c_run->parsed()) {
    int all_pass = 0;
    if (pam_status s = pam_run_experiment(r_config.c_str(), &all_pass))
      return die(s);
    std::printf(all_pass ? "PASS\n" : "FAIL\n");
    return all_pass ? 0 : 2;
  }

  return 0;
}
