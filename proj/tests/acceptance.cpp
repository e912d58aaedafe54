// Copyright 2026 The pam Authors
// SPDX-License-Identifier: Apache-2.0
//
// Headline verification suite: one pass/fail line per requirement, exit
// status equals the number of failures. Heavy ensembles use a worker pool.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "pam/experiments.hpp"
#include "pam/poisson_sim.hpp"
#include "pam/scales.hpp"
#include "pam/solver.hpp"
#include "pam/stats.hpp"

using namespace pam;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <typename Fn>
void pool_for(std::size_t n, Fn&& fn) {
  unsigned workers = std::thread::hardware_concurrency();
  if (const char* env = std::getenv("PAM_WORKERS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) workers = static_cast<unsigned>(v);
  }
  workers = static_cast<unsigned>(
      std::max<std::size_t>(1, std::min<std::size_t>(workers, n)));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= n) break;
        fn(i);
      }
    });
  for (auto& th : pool) th.join();
}

int g_failures = 0;

void verdict(int idx, const char* name, bool ok, const std::string& detail) {
  std::printf("%s %2d %s  [%s]\n", ok ? "PASS" : "FAIL", idx, name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

double laplace_cdf(double x, double scale) {
  return x < 0 ? 0.5 * std::exp(x / scale) : 1.0 - 0.5 * std::exp(-x / scale);
}

// Surface area of the l1 sphere, continuous at r=0 so quadrature from the
// origin sees no endpoint jump in d=1.
double shell_weight(int d, double r) {
  if (r <= 0) return d == 1 ? 2.0 : 0.0;
  return std::exp(d * std::log(2.0) + (d - 1) * std::log(r) -
                  std::lgamma(static_cast<double>(d)));
}

// ---- 1: site-value distribution ------------------------------------------

void criterion_1() {
  bool ok = true;
  std::string detail;
  for (double gamma : {0.5, 1.0, 1.5}) {
    FieldParams fp{1, gamma, 2026};
    std::vector<double> sample;
    sample.reserve(100000);
    for (Coord z = 0; z < 100000; ++z) {
      Coord zc[1] = {z};
      sample.push_back(field_value(fp, zc));
    }
    double d = ks_statistic(sample, [gamma](double x) {
      return x <= 0 ? 0.0 : -std::expm1(-std::pow(x, gamma));
    });
    double crit = ks_critical(sample.size(), 0.001);
    ok = ok && d < crit;
    detail += fmt("g=%.1f ks=%.4f<%.4f ", gamma, d, crit);
  }
  verdict(1, "site-value law passes KS at the 0.001 level", ok, detail);
}

// ---- 2: solver micro-oracles ---------------------------------------------

using Mat = std::vector<std::vector<double>>;

std::vector<double> expm_apply(const Mat& A, double t, std::vector<double> b) {
  std::size_t n = A.size();
  double norm = 0;
  for (const auto& row : A) {
    double s = 0;
    for (double v : row) s += std::fabs(v);
    norm = std::max(norm, s);
  }
  int k = 0;
  double scale = t;
  while (std::fabs(scale) * norm > 0.5) {
    scale *= 0.5;
    ++k;
  }
  Mat E(n, std::vector<double>(n, 0.0)), term;
  for (std::size_t i = 0; i < n; ++i) E[i][i] = 1.0;
  term = E;
  for (int m = 1; m <= 40; ++m) {
    Mat next(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double s = 0;
        for (std::size_t l = 0; l < n; ++l) s += term[i][l] * A[l][j];
        next[i][j] = s * scale / m;
      }
    term = next;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) E[i][j] += term[i][j];
  }
  for (int sq = 0; sq < k; ++sq) {
    Mat next(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double s = 0;
        for (std::size_t l = 0; l < n; ++l) s += E[i][l] * E[l][j];
        next[i][j] = s;
      }
    E = next;
  }
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out[i] += E[i][j] * b[j];
  return out;
}

void criterion_2() {
  // (a) one-site domain: pure exponential growth
  FieldParams fp{1, 1.0, 5};
  Coord zc[1] = {0};
  double xi0 = field_value(fp, zc);
  auto one = solve_pde(fp, 0, {2.0}, 1e-12);
  double rel1 = std::fabs(one.log_total_mass[0] - (xi0 - 2.0) * 2.0) /
                std::fabs((xi0 - 2.0) * 2.0);
  bool ok_a = rel1 < 1e-10;

  // (b) smallest nontrivial domain vs a dense matrix exponential
  bool ok_b = true;
  double worst_b = 0;
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    FieldParams f{1, 1.0, seed};
    Mat A(3, std::vector<double>(3, 0.0));
    for (Coord z = -1; z <= 1; ++z) {
      Coord c[1] = {z};
      auto i = static_cast<std::size_t>(z + 1);
      A[i][i] = field_value(f, c) - 2.0;
      if (z > -1) A[i][i - 1] = 1.0;
      if (z < 1) A[i][i + 1] = 1.0;
    }
    auto res = solve_pde(f, 1, {1.7}, 1e-12);
    auto u = expm_apply(A, 1.7, {0.0, 1.0, 0.0});
    double total = u[0] + u[1] + u[2];
    double err = std::fabs(res.log_total_mass[0] - std::log(total));
    for (Coord z = -1; z <= 1; ++z)
      err = std::max(err, std::fabs(res.mass_at(0, Site{z}) -
                                    u[static_cast<std::size_t>(z + 1)] / total));
    worst_b = std::max(worst_b, err);
    ok_b = ok_b && err < 1e-8;
  }

  // (c) grid solver vs the jump-rate-2d walk
  FieldParams fc{1, 1.0, 8};
  auto fk = feynman_kac_mc(fc, 5, 2.0, {}, 100000, 17);
  auto pde = solve_pde(fc, 5, {2.0}, 1e-10);
  double U = std::exp(pde.log_total_mass[0]);
  double dev = std::fabs(fk.total_mass - U) / fk.total_mass_err;
  bool ok_c = dev < 3.0;

  verdict(2, "solver matches exponential, matrix and walk oracles",
          ok_a && ok_b && ok_c,
          fmt("rel=%.1e matexp=%.1e walk=%.2fse", rel1, worst_b, dev));
}

// ---- 3: spectral bounds ---------------------------------------------------

void criterion_3() {
  bool ok = true;
  double worst_resid = 0, worst_slack = kInf;
  for (int s = 0; s < 100; ++s) {
    int d = s % 2 + 1;
    FieldParams fp{d, 1.0, 60000 + static_cast<std::uint64_t>(s)};
    Coord R = d == 1 ? 12 : 5;
    auto eig = principal_eigen(fp, R, 1e-10);
    double ximax = -1;
    for_each_ball_site(d, R, [&](const Coord* z) {
      ximax = std::max(ximax, field_value(fp, z));
    });
    double slack = eig.lambda1 - (ximax - 2.0 * d);
    worst_slack = std::min(worst_slack, slack);
    worst_resid = std::max(worst_resid, eig.residual);
    ok = ok && slack >= -1e-9 && eig.residual < 1e-8;
  }
  verdict(3, "principal eigenvalue dominates the field-peak bound", ok,
          fmt("min-slack=%.2e max-residual=%.1e over 100 fields", worst_slack,
              worst_resid));
}

// ---- 4: limit-density normalizations --------------------------------------

// Piecewise adaptive quadrature: a single wide interval can miss a narrow
// bump entirely when every coarse sample hits the flat tail.
double integrate_segments(const std::function<double(double)>& f,
                          const std::vector<double>& knots, double tol) {
  double total = 0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i)
    total += adaptive_simpson(f, knots[i], knots[i + 1], tol);
  return total;
}

void criterion_4() {
  bool ok = true;
  std::string detail;
  for (auto [gamma, d] :
       std::vector<std::pair<double, int>>{{1.0, 1}, {0.5, 1}, {1.0, 2}}) {
    auto p = make_limit_params(gamma, d);
    double gt = gamma * p.theta;
    std::vector<double> rknots = {0.0, 2.0 / gt, 10.0 / gt, 30.0 / gt, 80.0 / gt};
    double n1 = integrate_segments(
        [&](double r) { return shell_weight(d, r) * density_p1_radial(r, p); },
        rknots, 1e-11);
    ok = ok && std::fabs(n1 - 1.0) <= 1e-6;

    // factor check of the exposed pair density at two probes, then the
    // outer normalization of the top point against the revealed marginal.
    // The lower y cut sits where the void factor e^{-I(y)} underflows.
    double ylo = std::log(std::pow(2.0 / gt, d) / 35.0) / gamma;
    double yhi = 25.0 / gamma;
    for (auto [r1, y1] : std::vector<std::pair<double, double>>{
             {0.6 / gt, 0.3 / gamma}, {1.8 / gt, -0.8 / gamma}}) {
      double inner = adaptive_simpson(
          [&](double y2) {
            return integrate_segments(
                [&](double r2) {
                  return shell_weight(d, r2) * density_joint(r1, y1, r2, y2, p);
                },
                rknots, 1e-13);
          },
          ylo, y1, 1e-11);
      double marg = gamma * std::exp(-gamma * (y1 + p.theta * r1)) *
                    std::exp(-intensity_tail(y1, p));
      ok = ok && std::fabs(inner / marg - 1.0) <= 1e-5;
    }
    std::vector<double> yknots = {ylo, 0.0, 3.0 / gamma, 10.0 / gamma, yhi};
    double n2 = integrate_segments(
        [&](double y1) {
          double a = integrate_segments(
              [&](double r1) {
                return shell_weight(d, r1) * gamma *
                       std::exp(-gamma * (y1 + p.theta * r1));
              },
              rknots, 1e-13);
          return a * std::exp(-intensity_tail(y1, p));
        },
        yknots, 1e-11);
    ok = ok && std::fabs(n2 - 1.0) <= 1e-5;
    detail += fmt("(%g,%d): %.1e/%.1e ", gamma, d, std::fabs(n1 - 1.0),
                  std::fabs(n2 - 1.0));
  }
  verdict(4, "limit densities integrate to one", ok, detail);
}

// ---- 5: intensity calculus vs Monte Carlo ---------------------------------

double mc_upper_tail(const LimitParams& p, double y0, std::size_t n,
                     std::uint64_t seed) {
  Rng rng(seed);
  double gt = p.gamma * p.theta;
  double acc = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double ey = rng.exponential(p.gamma / 2);
    double y = y0 + ey;
    double qy = (p.gamma / 2) * std::exp(-(p.gamma / 2) * ey);
    double xnorm = 0, qx = 1;
    for (int j = 0; j < p.d; ++j) {
      double x = rng.laplace(2.0 / gt);
      xnorm += std::fabs(x);
      qx *= (gt / 4) * std::exp(-(gt / 2) * std::fabs(x));
    }
    acc += p.gamma * std::exp(-p.gamma * y - gt * xnorm) / (qy * qx);
  }
  return acc / static_cast<double>(n);
}

double mc_wedge(const LimitParams& p, double ax, double y, double w,
                std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  double c = w / (1.0 + w);
  double gt = p.gamma * p.theta;
  double lam_u = p.gamma * (1.0 - c) / (2.0 * c);
  double lfac = std::lgamma(static_cast<double>(p.d));
  double acc = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double u = rng.exponential(lam_u);
    double qu = lam_u * std::exp(-lam_u * u);
    double s = ax + u / (c * p.theta);
    double dr = rng.exponential(gt / 2);
    double r = s + dr;
    double qr = (gt / 2) * std::exp(-(gt / 2) * dr);
    double shell =
        std::exp(p.d * std::log(2.0) + (p.d - 1) * std::log(r) - lfac);
    double f = p.gamma * std::exp(-p.gamma * (y - u)) * std::exp(-gt * r) * shell;
    acc += f / (qu * qr);
  }
  return acc / static_cast<double>(n);
}

void criterion_5() {
  const std::size_t n = 2000000;
  bool ok = true;
  double worst = 0;
  struct TP {
    double gamma;
    int d;
    double y;
  };
  for (const TP& t : {TP{1.0, 1, 0.0}, TP{1.0, 1, 2.0}, TP{0.5, 1, -1.0},
                      TP{1.0, 2, 0.5}, TP{2.0, 3, 0.3}}) {
    auto p = make_limit_params(t.gamma, t.d);
    double mc = mc_upper_tail(p, t.y, n, 101);
    double exact = intensity_tail(t.y, p);
    double rel = std::fabs(mc - exact) / exact;
    worst = std::max(worst, rel);
    ok = ok && rel < 0.01;
  }
  struct DP {
    double gamma;
    int d;
    double ax, y, w;
  };
  double worst2 = 0;
  for (const DP& t : {DP{1.0, 1, 1.0, 0.0, 1.0}, DP{1.0, 1, 2.5, 0.8, 3.0},
                      DP{0.5, 1, 1.0, -0.5, 1.0}, DP{1.0, 2, 0.7, 0.3, 0.4},
                      DP{1.0, 1, 0.5, 0.5, 10.0}}) {
    auto p = make_limit_params(t.gamma, t.d);
    double mc =
        mc_upper_tail(p, t.y, n, 202) + mc_wedge(p, t.ax, t.y, t.w, n, 303);
    double exact = nu_Dw(t.ax, t.y, t.w, p);
    double rel = std::fabs(mc - exact) / exact;
    worst2 = std::max(worst2, rel);
    ok = ok && rel < 0.01;
  }
  verdict(5, "intensity measures match importance-sampling oracles", ok,
          fmt("tail rel<=%.4f region rel<=%.4f at 5+5 points", worst, worst2));
}

// ---- 6: ageing law cross-validation ---------------------------------------

void criterion_6() {
  auto p = make_limit_params(1.0, 1);
  bool ok = true;
  std::string detail;
  for (double w : {0.1, 1.0, 10.0}) {
    auto mc = ageing_survival_mc(p, w, 100000, 424242);
    double ref = 1.0 - ageing_cdf(w, p, 1e-9);
    double dev = std::fabs(mc.estimate - ref) / std::max(mc.stderr_, 1e-12);
    ok = ok && dev <= 3.0;
    detail += fmt("w=%g %.2fse ", w, dev);
  }
  verdict(6, "sampled ranking agreement matches the analytic law", ok, detail);
}

// ---- 7: rescaled count Poissonity -----------------------------------------

void criterion_7() {
  // steep window: covers every counting box down to y=1-3alpha at |x|=3
  // with the smallest certifiable scan radius
  const double t = 1e8, tau = -5.0, alpha = 2.0;
  const std::size_t n_seeds = 200;
  auto p = make_limit_params(1.0, 1);
  FieldParams probe{1, 1.0, 0};
  Coord R = certified_window_radius(probe, t, tau, alpha);

  std::vector<BoxSpec> boxes(4);
  boxes[0] = {{-1.0}, {1.0}, 0.0, 1.0};
  boxes[1] = {{-1.0}, {1.0}, 1.0, kInf};
  boxes[2] = {{1.0}, {3.0}, 1.0, kInf};
  boxes[3] = {{-3.0}, {-1.0}, 1.0, kInf};

  std::vector<std::vector<long long>> counts(4,
                                             std::vector<long long>(n_seeds, 0));
  pool_for(n_seeds, [&](std::size_t s) {
    FieldParams fp{1, 1.0, 777000 + s};
    auto pts = rescale_points(fp, R, t, tau, alpha);
    for (std::size_t b = 0; b < 4; ++b) {
      long long c = 0;
      for (const auto& pt : pts) {
        if (pt.y > boxes[b].y_lo && pt.y <= boxes[b].y_hi &&
            pt.x[0] >= boxes[b].x_lo[0] && pt.x[0] <= boxes[b].x_hi[0])
          ++c;
      }
      counts[b][s] = c;
    }
  });

  double agg_stat = 0, agg_dof = 0;
  std::string detail;
  for (std::size_t b = 0; b < 4; ++b) {
    double mean = nu_box(boxes[b], p);
    auto chi = poisson_chi2(counts[b], mean);
    agg_stat += chi.stat;
    agg_dof += chi.dof;
    detail += fmt("nu%zu=%.3f ", b, mean);
  }
  double pval = chi2_pvalue(agg_stat, agg_dof);
  verdict(7, "rescaled exceedance counts are Poisson across 200 fields",
          pval > 0.001, detail + fmt("aggregate p=%.4f", pval));
}

// ---- 8: scaling-limit trend and sampler law -------------------------------

void criterion_8() {
  const std::vector<double> ts = {1e4, 1e6, 1e8};
  const std::size_t n_seeds = 500;
  std::vector<double> ks_by_t;
  for (double t : ts) {
    ScaleSet s = compute_scales(1.0, 1, t);
    std::vector<double> coords(n_seeds);
    pool_for(n_seeds, [&](std::size_t r) {
      FieldParams fp{1, 1.0, 905000 + r};
      PsiMaxima m = locate_maxima_certified(fp, t, 0.0);
      coords[r] = static_cast<double>(m.z1[0]) / s.r_t;
    });
    ks_by_t.push_back(
        ks_statistic(coords, [](double v) { return laplace_cdf(v, 1.0); }));
  }
  bool trend = ks_by_t[1] <= ks_by_t[0] && ks_by_t[2] <= ks_by_t[1];

  auto p = make_limit_params(1.0, 1);
  const std::size_t n_tt = 100000;
  std::vector<double> x1s(n_tt);
  pool_for(n_tt, [&](std::size_t i) {
    x1s[i] = sample_top_two(p, 990000 + i).x1[0];
  });
  double d = ks_statistic(x1s, [](double v) { return laplace_cdf(v, 1.0); });
  double pval = ks_pvalue(n_tt, d);
  verdict(8, "rescaled argmax tends to the limit location law", trend && pval > 0.001,
          fmt("ks=%.4f/%.4f/%.4f sampler p=%.4f", ks_by_t[0], ks_by_t[1],
              ks_by_t[2], pval));
}

// ---- 9: localisation trend ------------------------------------------------

void criterion_9() {
  const std::vector<double> ts = {50.0, 200.0, 800.0};
  const std::size_t reps = 100;
  // The share of mass at the concentration site spans hundreds of orders of
  // magnitude during relocalisation, so the log-domain modal expansion is
  // the only viable route at these distances (it is cross-validated against
  // the direct PDE in the solver suite).
  std::vector<std::array<double, 3>> fracs(reps);
  std::vector<std::array<char, 3>> agrees(reps);
  pool_for(reps, [&](std::size_t r) {
    FieldParams fp{1, 0.5, 775000 + r};
    std::vector<Site> z1(3);
    Coord rad = 30;
    for (int k = 0; k < 3; ++k) {
      z1[static_cast<std::size_t>(k)] = locate_maxima_certified(fp, ts[k], 0.0).z1;
      rad = std::max(rad, 2 * l1_norm(z1[static_cast<std::size_t>(k)]) + 200);
    }
    auto shares = modal_mass_share(fp, rad, ts, z1);
    for (std::size_t k = 0; k < 3; ++k) {
      fracs[r][k] = shares[k].frac;
      agrees[r][k] = shares[k].argmax == z1[k] ? 1 : 0;
    }
  });
  std::vector<double> mean_frac, agree_freq;
  for (int k = 0; k < 3; ++k) {
    double mf = 0, af = 0;
    for (std::size_t r = 0; r < reps; ++r) {
      mf += fracs[r][k];
      af += agrees[r][k];
    }
    mean_frac.push_back(mf / reps);
    agree_freq.push_back(af / reps);
  }
  bool inc = mean_frac[1] > mean_frac[0] && mean_frac[2] > mean_frac[1];
  bool nondec = agree_freq[1] >= agree_freq[0] && agree_freq[2] >= agree_freq[1];
  verdict(9, "peak mass share grows with time", inc && nondec,
          fmt("frac=%.3f/%.3f/%.3f agree=%.2f/%.2f/%.2f", mean_frac[0],
              mean_frac[1], mean_frac[2], agree_freq[0], agree_freq[1],
              agree_freq[2]));
}

// ---- 10: path property trials ---------------------------------------------

void criterion_10() {
  // (a) the argmax never returns to an abandoned site as time advances
  std::atomic<long long> no_return_fail{0};
  pool_for(10000, [&](std::size_t trial) {
    Rng rng(111000 + trial);
    FieldParams fp{1, 1.0, 222000 + trial};
    const Coord R = 60;
    double t = 16.0 + 10.0 * rng.uniform();
    double horizon = 10.0 + 70.0 * rng.uniform();
    std::vector<Site> seen;
    Site cur;
    for (int g = 0; g <= 40; ++g) {
      double s = t + horizon * g / 40.0;
      Site z = locate_maxima(fp, R, s, 0.0).z1;
      if (z != cur) {
        for (const Site& old : seen)
          if (old == z) {
            ++no_return_fail;
            return;
          }
        if (!cur.empty()) seen.push_back(cur);
        cur = z;
      }
    }
  });

  // (b) visit-count bound for sparse site sets on random lattice walks
  std::atomic<long long> bound_fail{0};
  pool_for(10000, [&](std::size_t trial) {
    Rng rng(333000 + trial);
    int d = 1 + static_cast<int>(rng.uniform_int(2));
    FieldParams fp{d, 1.0, 11};
    SiteSet A;
    for (int i = 0; i < 12; ++i) {
      Site z(static_cast<std::size_t>(d));
      for (auto& c : z) c = 2 * (rng.uniform_int(11) - 5);
      A.insert(z);
    }
    GeoPath path;
    Site cur(static_cast<std::size_t>(d), 0);
    path.sites.push_back(cur);
    int steps = 1 + static_cast<int>(rng.uniform_int(80));
    for (int s = 0; s < steps; ++s) {
      auto i = static_cast<std::size_t>(rng.uniform_int(d));
      cur[i] += rng.uniform() < 0.5 ? -1 : 1;
      path.sites.push_back(cur);
    }
    if (!check_count_bound(path, fp, A)) ++bound_fail;
  });

  verdict(10, "argmax no-return and visit-count bound hold on all trials",
          no_return_fail == 0 && bound_fail == 0,
          fmt("no-return fails=%lld count-bound fails=%lld over 10000+10000",
              no_return_fail.load(), bound_fail.load()));
}

// ---- 11: experiment determinism -------------------------------------------

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion_11() {
  bool ok = true;
  const char* configs[2] = {
      R"({"schema_version":1,"kind":"scaling","gamma":1.0,"d":1,
          "t":[25.0,40.0],"replicas":8,"seed":21,"output_dir":"acc_det_scale"})",
      R"({"schema_version":1,"kind":"ageing","gamma":1.0,"d":1,
          "t":16.0,"replicas":10,"seed":22,"output_dir":"acc_det_age",
          "w_max":10.0,"w_grid":[0.5]})"};
  for (const char* cfg : configs) {
    auto c = parse_config(cfg);
    auto first = run_experiment(c);
    std::string rows1 = slurp(first.rows_path);
    std::string sum1 = slurp(first.summary_path);
    auto second = run_experiment(c);
    ok = ok && slurp(second.rows_path) == rows1 && !rows1.empty();
    ok = ok && slurp(second.summary_path) == sum1 && !sum1.empty();
  }
  verdict(11, "experiment re-runs are byte-identical", ok, "2 configs x 2 runs");
}

}  // namespace

int main(int argc, char** argv) {
  int only = argc > 1 ? std::atoi(argv[1]) : 0;
  void (*steps[])() = {criterion_1, criterion_2, criterion_3, criterion_4,
                       criterion_5, criterion_6, criterion_7, criterion_8,
                       criterion_9, criterion_10, criterion_11};
  for (int i = 0; i < 11; ++i)
    if (only == 0 || only == i + 1) steps[i]();
  return g_failures;
}
