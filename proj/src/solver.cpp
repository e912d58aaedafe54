// Copyright 2026 The pam Authors
// SPDX-License-Identifier: Apache-2.0

#include "pam/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pam/scales.hpp"

namespace pam {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Dirichlet l1 ball: site list, 2d neighbour indices per site (-1 = outside),
// and the potential restricted to the ball.
struct LatticeBox {
  int d;
  Coord R;
  std::vector<Site> sites;
  std::vector<int> nbrs;  // 2d entries per site
  std::vector<double> xi;
  std::size_t xi_argmax = 0;
  double xi_max = -kInf;

  LatticeBox(const FieldParams& fp, Coord radius)
      : LatticeBox(fp, Site(static_cast<std::size_t>(fp.d), 0), radius) {}

  LatticeBox(const FieldParams& fp, const Site& center, Coord radius)
      : d(fp.d), R(radius) {
    if (R < 0) throw ContractError("box radius must be nonnegative");
    if (center.size() != static_cast<std::size_t>(d))
      throw ContractError("box center dimension mismatch");
    double count = l1_ball_count(d, R);
    if (count > static_cast<double>(PotentialField::kDefaultSiteCap))
      throw ResourceError("solver box exceeds the site cap");

    const Coord side = 2 * R + 1;
    double cube = 1;
    for (int i = 0; i < d; ++i) cube *= static_cast<double>(side);
    if (cube > 1.5e9) throw ResourceError("solver index cube too large");
    std::vector<int> index(static_cast<std::size_t>(cube), -1);

    auto cube_index = [&](const Coord* z) {
      std::size_t idx = 0;
      for (int i = 0; i < d; ++i)
        idx = idx * static_cast<std::size_t>(side) +
              static_cast<std::size_t>(z[i] + R);
      return idx;
    };

    // `index` and the neighbour search run in coordinates relative to the
    // center; `sites` stores absolute lattice positions.
    sites.reserve(static_cast<std::size_t>(count));
    Site abs_site(static_cast<std::size_t>(d));
    for_each_ball_site(d, R, [&](const Coord* z) {
      index[cube_index(z)] = static_cast<int>(sites.size());
      for (int i = 0; i < d; ++i)
        abs_site[static_cast<std::size_t>(i)] = center[static_cast<std::size_t>(i)] + z[i];
      sites.push_back(abs_site);
    });

    const std::size_t n = sites.size();
    xi.resize(n);
    nbrs.assign(n * static_cast<std::size_t>(2 * d), -1);
    Site nb(static_cast<std::size_t>(d));
    for (std::size_t i = 0; i < n; ++i) {
      xi[i] = field_value(fp, sites[i]);
      if (xi[i] > xi_max) {
        xi_max = xi[i];
        xi_argmax = i;
      }
      for (int k = 0; k < 2 * d; ++k) {
        for (int j = 0; j < d; ++j)
          nb[static_cast<std::size_t>(j)] =
              sites[i][static_cast<std::size_t>(j)] - center[static_cast<std::size_t>(j)];
        nb[static_cast<std::size_t>(k / 2)] += (k % 2 == 0) ? 1 : -1;
        if (l1_norm(nb) <= R)
          nbrs[i * static_cast<std::size_t>(2 * d) + static_cast<std::size_t>(k)] =
              index[cube_index(nb.data())];
      }
    }
  }

  // (Av)_i with A = Delta + diag(xi); also returns m = sum(Av).
  double apply(const std::vector<double>& v, std::vector<double>& out) const {
    const std::size_t n = sites.size();
    const int twod = 2 * d;
    double m = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double acc = (xi[i] - twod) * v[i];
      const int* nb = nbrs.data() + i * static_cast<std::size_t>(twod);
      for (int k = 0; k < twod; ++k)
        if (nb[k] >= 0) acc += v[static_cast<std::size_t>(nb[k])];
      out[i] = acc;
      m += acc;
    }
    return m;
  }
};

}  // namespace

double SolveResult::mass_at(std::size_t time_index, const Site& z) const {
  if (time_index >= profiles.size()) throw ContractError("mass_at: bad time index");
  for (std::size_t i = 0; i < sites.size(); ++i)
    if (sites[i] == z) return profiles[time_index][i];
  return 0.0;
}

SolveResult solve_pde(const FieldParams& fp, Coord box_radius,
                      const std::vector<double>& t_grid, double rel_tol) {
  return solve_pde(fp, Site(static_cast<std::size_t>(fp.d), 0), box_radius,
                   t_grid, rel_tol);
}

SolveResult solve_pde(const FieldParams& fp, const Site& center, Coord box_radius,
                      const std::vector<double>& t_grid, double rel_tol) {
  if (t_grid.empty()) throw ContractError("solve_pde: empty time grid");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0) || (i > 0 && t_grid[i] <= t_grid[i - 1]))
      throw ContractError("solve_pde: t_grid must be increasing and positive");
  }
  if (!(rel_tol > 0)) throw ContractError("solve_pde: rel_tol must be positive");

  LatticeBox box(fp, center, box_radius);
  const std::size_t n = box.sites.size();
  const int twod = 2 * fp.d;

  SolveResult res;
  res.box_radius = box_radius;
  res.sites = box.sites;

  // Normalized state: v is the mass profile (sums to 1), s its log total.
  std::vector<double> v(n, 0.0), k1(n), k2(n), k3(n), k4(n), tmp(n), vn(n);
  Site origin(static_cast<std::size_t>(fp.d), 0);
  std::size_t origin_idx = n;
  for (std::size_t i = 0; i < n; ++i)
    if (box.sites[i] == origin) origin_idx = i;
  if (origin_idx == n) throw ContractError("solve_pde: box does not contain 0");
  v[origin_idx] = 1.0;
  double s = 0.0;

  // f(v) = Av - m(v) v drives v; m(v) drives s.
  auto deriv = [&](const std::vector<double>& y, std::vector<double>& out) {
    double m = box.apply(y, out);
    for (std::size_t i = 0; i < n; ++i) out[i] -= m * y[i];
    return m;
  };

  const double h_stab = 2.2 / (box.xi_max + 2.0 * twod);
  const double atol = 1e-14;
  double t = 0.0;
  double h = std::min(h_stab, t_grid.front() / 8.0);

  auto record = [&](double at) {
    res.times.push_back(at);
    res.log_total_mass.push_back(s);
    res.profiles.push_back(v);
    std::size_t am = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (v[i] > v[am]) am = i;
    res.argmax_site.push_back(box.sites[am]);
  };

  std::size_t next_out = 0;
  while (next_out < t_grid.size()) {
    const double t_target = t_grid[next_out];
    bool hits_output = false;
    if (t + h >= t_target - 1e-14 * t_target) {
      h = t_target - t;
      hits_output = true;
    }
    if (h < 1e-14 * std::max(t, 1.0))
      throw NumericError("solve_pde: step underflow (stiffness beyond budget)");

    // Bogacki-Shampine 3(2)
    double m1 = deriv(v, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = v[i] + 0.5 * h * k1[i];
    double m2 = deriv(tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = v[i] + 0.75 * h * k2[i];
    double m3 = deriv(tmp, k3);
    for (std::size_t i = 0; i < n; ++i)
      vn[i] = v[i] + h * (2.0 / 9.0 * k1[i] + 1.0 / 3.0 * k2[i] + 4.0 / 9.0 * k3[i]);
    double m4 = deriv(vn, k4);

    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double e = h * (-5.0 / 72.0 * k1[i] + 1.0 / 12.0 * k2[i] +
                      1.0 / 9.0 * k3[i] - 1.0 / 8.0 * k4[i]);
      double sc = atol + rel_tol * std::max(std::fabs(v[i]), std::fabs(vn[i]));
      err = std::max(err, std::fabs(e) / sc);
    }
    double es = h * (-5.0 / 72.0 * m1 + 1.0 / 12.0 * m2 + 1.0 / 9.0 * m3 -
                     1.0 / 8.0 * m4);
    err = std::max(err, std::fabs(es) / (atol + rel_tol * std::max(1.0, std::fabs(s))));

    if (err <= 1.0) {
      s += h * (2.0 / 9.0 * m1 + 1.0 / 3.0 * m2 + 4.0 / 9.0 * m3);
      t += h;
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        vn[i] = std::max(vn[i], 0.0);
        total += vn[i];
      }
      if (!(total > 0)) throw NumericError("solve_pde: mass collapsed to zero");
      // fold the numerical normalization defect into the log mass
      s += std::log(total);
      for (std::size_t i = 0; i < n; ++i) v[i] = vn[i] / total;
      if (hits_output) {
        record(t_target);
        ++next_out;
      }
    }
    double fac = err > 0 ? 0.9 * std::pow(err, -1.0 / 3.0) : 5.0;
    h = std::min(h * std::clamp(fac, 0.2, 5.0), h_stab);
  }
  return res;
}

SolveResult solve_pde(const PotentialField& field, Coord box_radius,
                      const std::vector<double>& t_grid, double rel_tol) {
  if (box_radius > field.radius())
    throw ContractError("solve_pde: box exceeds the stored field");
  return solve_pde(field.params(), box_radius, t_grid, rel_tol);
}

namespace {

// Principal eigenpair of a symmetric tridiagonal operator (diagonal `diag`,
// unit off-diagonals) by shifted inverse iteration with Thomas solves.
// Gershgorin puts the spectrum below max(diag) + 2, so the shift makes the
// system diagonally dominant.
void tridiag_principal(const std::vector<double>& diag, double& lambda,
                       std::vector<double>& w) {
  const std::size_t n = diag.size();
  double mu = -kInf;
  for (double v : diag) mu = std::max(mu, v);
  mu += 3.0;
  w.assign(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> cp(n), x(n);
  lambda = 0;
  for (int it = 0; it < 5000; ++it) {
    // Thomas solve of (mu I - T) x = w
    double m0 = mu - diag[0];
    cp[0] = -1.0 / m0;
    x[0] = w[0] / m0;
    for (std::size_t i = 1; i < n; ++i) {
      double m = (mu - diag[i]) + cp[i - 1];
      cp[i] = -1.0 / m;
      x[i] = (w[i] + x[i - 1]) / m;
    }
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= cp[i] * x[i + 1];
    double nx = 0;
    for (double v : x) nx += v * v;
    nx = std::sqrt(nx);
    if (!(nx > 0)) throw NumericError("tridiag_principal: iterate vanished");
    for (double& v : x) v /= nx;
    // Rayleigh quotient and residual
    double lam = 0, res = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double tv = diag[i] * x[i];
      if (i > 0) tv += x[i - 1];
      if (i + 1 < n) tv += x[i + 1];
      lam += x[i] * tv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      double tv = diag[i] * x[i];
      if (i > 0) tv += x[i - 1];
      if (i + 1 < n) tv += x[i + 1];
      res = std::max(res, std::fabs(tv - lam * x[i]));
    }
    w = x;
    lambda = lam;
    if (res <= 1e-9 * std::max(1.0, std::fabs(lam))) break;
  }
  // orient the vector positive at its peak
  std::size_t pk = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (std::fabs(w[i]) > std::fabs(w[pk])) pk = i;
  if (w[pk] < 0)
    for (double& v : w) v = -v;
}

}  // namespace

std::vector<ModalShare> modal_mass_share(const FieldParams& fp, Coord box_radius,
                                         const std::vector<double>& t_grid,
                                         const std::vector<Site>& targets) {
  if (fp.d != 1) throw ContractError("modal_mass_share: implemented for d = 1 only");
  if (t_grid.empty()) throw ContractError("modal_mass_share: empty time grid");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0) || (i > 0 && t_grid[i] <= t_grid[i - 1]))
      throw ContractError("modal_mass_share: t_grid must be increasing and positive");
  }
  if (targets.size() != t_grid.size())
    throw ContractError("modal_mass_share: one target per time");
  const Coord R = box_radius;
  if (R < 0) throw ContractError("box radius must be nonnegative");
  if (R > 50000000) throw ResourceError("modal_mass_share: box too large");
  for (const Site& z : targets)
    if (z.size() != 1 || z[0] < -R || z[0] > R)
      throw ContractError("modal_mass_share: target outside the box");

  const std::size_t N = static_cast<std::size_t>(2 * R + 1);
  std::vector<double> xi(N);
  for (std::size_t i = 0; i < N; ++i) {
    Coord z = static_cast<Coord>(i) - R;
    xi[i] = field_value(fp, &z);
  }

  // Valley centers: strongest sites first, pairwise separation > W, so every
  // site lies in some window and no two windows have the same peak.
  const Coord W = 30;
  std::vector<std::size_t> order(N);
  for (std::size_t i = 0; i < N; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return xi[a] > xi[b]; });
  std::vector<char> blocked(N, 0);

  struct Mode {
    Coord lo = 0, hi = 0, peak = 0;
    double lambda = 0, log_c = 0, log_s = 0, log_peak = 0;
    int sign_c = 1;
    std::vector<double> w;
  };
  std::vector<Mode> modes;
  std::vector<double> diag;
  for (std::size_t idx : order) {
    if (blocked[idx]) continue;
    const Coord zc = static_cast<Coord>(idx) - R;
    for (Coord z = std::max<Coord>(-R, zc - W); z <= std::min<Coord>(R, zc + W); ++z)
      blocked[static_cast<std::size_t>(z + R)] = 1;

    Mode m;
    m.lo = std::max<Coord>(-R, zc - W);
    m.hi = std::min<Coord>(R, zc + W);
    diag.assign(static_cast<std::size_t>(m.hi - m.lo + 1), 0.0);
    for (Coord z = m.lo; z <= m.hi; ++z)
      diag[static_cast<std::size_t>(z - m.lo)] = xi[static_cast<std::size_t>(z + R)] - 2.0;
    tridiag_principal(diag, m.lambda, m.w);

    std::size_t pk = 0;
    double ssum = 0;
    for (std::size_t i = 0; i < m.w.size(); ++i) {
      if (std::fabs(m.w[i]) > std::fabs(m.w[pk])) pk = i;
      ssum += m.w[i];
    }
    m.peak = m.lo + static_cast<Coord>(pk);
    m.log_peak = std::log(std::fabs(m.w[pk]));
    m.log_s = std::log(std::max(std::fabs(ssum), 1e-300));

    // Match point: walking from the origin side towards the peak, the first
    // site where the window vector is far above rounding noise. Values below
    // that are linear-space garbage; the decay between the origin and the
    // match point must be carried by the log-space recurrence instead.
    Coord zm = std::clamp<Coord>(0, m.lo, m.hi);
    {
      const int step = m.peak > zm ? 1 : (m.peak < zm ? -1 : 0);
      while (zm != m.peak && std::fabs(m.w[static_cast<std::size_t>(zm - m.lo)]) < 1e-10)
        zm += step;
    }
    if (zm == 0) {
      double v = m.w[static_cast<std::size_t>(-m.lo)];
      m.log_c = v == 0 ? -kInf : std::log(std::fabs(v));
      m.sign_c = v >= 0 ? 1 : -1;
    } else {
      // Transfer the eigenvector from the match point to the origin: iterate
      // the three-term recurrence from the far box edge (where the true
      // vector satisfies the Dirichlet condition) towards the window, in log
      // scale. Marching towards the peak amplifies exactly the admissible
      // solution.
      const int dir = zm > 0 ? 1 : -1;
      const Coord start = dir > 0 ? -R : R;
      const Coord match = zm;
      double lg = 0, prev = 0, cur = 1;
      double lg0 = 0, v0 = 1, lgm = 0, vm = 1;
      for (Coord z = start;; z += dir) {
        if (z == 0) {
          lg0 = lg + std::log(std::fabs(cur));
          v0 = cur;
        }
        if (z == match) {
          lgm = lg + std::log(std::fabs(cur));
          vm = cur;
          break;
        }
        double next = (m.lambda + 2.0 - xi[static_cast<std::size_t>(z + R)]) * cur - prev;
        prev = cur;
        cur = next;
        double a = std::fabs(cur);
        if (a > 1e100 || (a > 0 && a < 1e-100)) {
          lg += std::log(a);
          prev /= a;
          cur /= a;
        } else if (a == 0 && prev == 0) {
          cur = 1.0;  // fully degenerate start; reseed
        }
      }
      double wm = m.w[static_cast<std::size_t>(match - m.lo)];
      if (cur == 0 || wm == 0 || v0 == 0) {
        m.log_c = -kInf;
      } else {
        m.log_c = std::log(std::fabs(wm)) + lg0 - lgm;
        m.sign_c = (v0 > 0 ? 1 : -1) * (vm > 0 ? 1 : -1) * (wm > 0 ? 1 : -1);
      }
    }
    modes.push_back(std::move(m));
  }

  std::vector<ModalShare> out;
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    const double t = t_grid[k];
    const Coord tz = targets[k][0];
    double big = -kInf, score_best = -kInf;
    std::size_t dominant = 0;
    for (std::size_t i = 0; i < modes.size(); ++i) {
      const Mode& m = modes[i];
      if (m.log_c == -kInf) continue;
      big = std::max(big, m.log_c + m.log_s + m.lambda * t);
      double score = m.log_c + m.lambda * t + m.log_peak;
      if (score > score_best) {
        score_best = score;
        dominant = i;
      }
    }
    double U = 0, u = 0;
    for (const Mode& m : modes) {
      if (m.log_c == -kInf) continue;
      U += m.sign_c * std::exp(m.log_c + m.log_s + m.lambda * t - big);
      if (m.lo <= tz && tz <= m.hi) {
        double wv = m.w[static_cast<std::size_t>(tz - m.lo)];
        if (wv != 0)
          u += m.sign_c * (wv > 0 ? 1 : -1) *
               std::exp(m.log_c + std::log(std::fabs(wv)) + m.lambda * t - big);
      }
    }
    if (!(U > 0)) throw NumericError("modal_mass_share: total mass not positive");
    ModalShare s;
    s.time = t;
    s.frac = u / U;
    s.argmax = Site{modes[dominant].peak};
    s.lambda_top = modes[dominant].lambda;
    s.log_total_mass = big + std::log(U);
    out.push_back(std::move(s));
  }
  return out;
}

namespace {

double ball_xi_max(const FieldParams& fp, Coord R) {
  double best = -kInf;
  for_each_ball_site(fp.d, R, [&](const Coord* z) {
    best = std::max(best, field_value(fp, z));
  });
  return best;
}

void require_budget(const FieldParams& fp, Coord reach, double t, double budget) {
  double xm = ball_xi_max(fp, reach);
  if (t * xm > budget)
    throw BudgetError("Feynman-Kac oracle refused: t * max xi = " +
                      std::to_string(t * xm) + " exceeds the variance budget " +
                      std::to_string(budget));
}

}  // namespace

FkResult feynman_kac_mc(const FieldParams& fp, std::optional<Coord> box_radius,
                        double t, const std::vector<Site>& targets,
                        std::size_t n_paths, std::uint64_t seed, double budget) {
  if (!(t > 0)) throw ContractError("feynman_kac_mc: t must be positive");
  if (n_paths == 0) throw ContractError("feynman_kac_mc: need paths");
  const int d = fp.d;
  // Walks beyond ~6dt jumps are vanishingly rare; that radius bounds the
  // potential the budget check has to care about.
  Coord reach = box_radius ? *box_radius
                           : static_cast<Coord>(std::ceil(6.0 * d * t)) + 10;
  require_budget(fp, reach, t, budget);

  double sum_w = 0, sum_w2 = 0;
  std::vector<double> sum_t(targets.size(), 0.0), sum_t2(targets.size(), 0.0);
  Site z(static_cast<std::size_t>(d));
  for (std::size_t p = 0; p < n_paths; ++p) {
    Rng rng(split_seed(seed, p));
    std::fill(z.begin(), z.end(), 0);
    double tau = 0, log_w = 0;
    bool alive = true;
    while (true) {
      double xi = field_value(fp, z);
      double dt = rng.exponential(2.0 * d);
      if (tau + dt >= t) {
        log_w += xi * (t - tau);
        break;
      }
      log_w += xi * dt;
      tau += dt;
      std::size_t k = rng.uniform_int(static_cast<std::uint64_t>(2 * d));
      z[k / 2] += (k % 2 == 0) ? 1 : -1;
      if (box_radius && l1_norm(z) > *box_radius) {
        alive = false;  // Dirichlet kill
        break;
      }
    }
    double w = alive ? std::exp(log_w) : 0.0;
    sum_w += w;
    sum_w2 += w * w;
    for (std::size_t j = 0; j < targets.size(); ++j) {
      double wj = (alive && z == targets[j]) ? w : 0.0;
      sum_t[j] += wj;
      sum_t2[j] += wj * wj;
    }
  }

  auto finish = [&](double sw, double sw2, double& mean, double& err) {
    double n = static_cast<double>(n_paths);
    mean = sw / n;
    double var = std::max(0.0, sw2 / n - mean * mean);
    err = std::sqrt(var / n);
  };
  FkResult r;
  r.n_paths = n_paths;
  finish(sum_w, sum_w2, r.total_mass, r.total_mass_err);
  r.mass.resize(targets.size());
  r.mass_err.resize(targets.size());
  for (std::size_t j = 0; j < targets.size(); ++j)
    finish(sum_t[j], sum_t2[j], r.mass[j], r.mass_err[j]);
  return r;
}

FkResult feynman_kac_mc(const PotentialField& field, std::optional<Coord> box_radius,
                        double t, const std::vector<Site>& targets,
                        std::size_t n_paths, std::uint64_t seed, double budget) {
  return feynman_kac_mc(field.params(), box_radius, t, targets, n_paths, seed,
                        budget);
}

PathSplit path_mass_split(const FieldParams& fp, double t, const Site& z1,
                          Coord ball_radius, std::size_t n_paths,
                          std::uint64_t seed, double budget) {
  if (!(t > 0)) throw ContractError("path_mass_split: t must be positive");
  if (n_paths == 0) throw ContractError("path_mass_split: need paths");
  if (static_cast<int>(z1.size()) != fp.d)
    throw ContractError("path_mass_split: z1 dimension mismatch");
  const int d = fp.d;
  Coord reach = std::max<Coord>(
      ball_radius, static_cast<Coord>(std::ceil(6.0 * d * t)) + 10);
  require_budget(fp, reach, t, budget);

  double s1 = 0, s1sq = 0, s2 = 0, s2sq = 0;
  Site z(static_cast<std::size_t>(d));
  for (std::size_t p = 0; p < n_paths; ++p) {
    Rng rng(split_seed(seed, p));
    std::fill(z.begin(), z.end(), 0);
    double tau = 0, log_w = 0;
    bool hit = (z == z1);
    bool stayed = l1_norm(z) <= ball_radius;
    while (true) {
      double xi = field_value(fp, z);
      double dt = rng.exponential(2.0 * d);
      if (tau + dt >= t) {
        log_w += xi * (t - tau);
        break;
      }
      log_w += xi * dt;
      tau += dt;
      std::size_t k = rng.uniform_int(static_cast<std::uint64_t>(2 * d));
      z[k / 2] += (k % 2 == 0) ? 1 : -1;
      if (z == z1) hit = true;
      if (l1_norm(z) > ball_radius) stayed = false;
    }
    double w = std::exp(log_w);
    if (hit && stayed) {
      s1 += w;
      s1sq += w * w;
    } else {
      s2 += w;
      s2sq += w * w;
    }
  }
  double n = static_cast<double>(n_paths);
  PathSplit r;
  r.n_paths = n_paths;
  r.u1 = s1 / n;
  r.u1_err = std::sqrt(std::max(0.0, s1sq / n - r.u1 * r.u1) / n);
  r.u2 = s2 / n;
  r.u2_err = std::sqrt(std::max(0.0, s2sq / n - r.u2 * r.u2) / n);
  return r;
}

double potential_gap(const FieldParams& fp, const Site& z1, Coord ball_radius) {
  if (static_cast<int>(z1.size()) != fp.d || l1_norm(z1) > ball_radius)
    throw ContractError("potential_gap: z1 outside the ball");
  if (l1_ball_count(fp.d, ball_radius) < 2)
    throw ContractError("potential_gap: ball holds only z1");
  double best = -kInf;
  for_each_ball_site(fp.d, ball_radius, [&](const Coord* z) {
    if (std::equal(z, z + fp.d, z1.begin())) return;
    best = std::max(best, field_value(fp, z));
  });
  return field_value(fp, z1) - best;
}

LowerBoundReport lower_bound_diagnostic(const FieldParams& fp, double t,
                                        const SolveResult& solve,
                                        const PsiMaxima& maxima) {
  std::size_t idx = solve.times.size();
  for (std::size_t i = 0; i < solve.times.size(); ++i)
    if (std::fabs(solve.times[i] - t) <= 1e-9 * t) idx = i;
  if (idx == solve.times.size())
    throw ContractError("lower_bound_diagnostic: t not on the solve grid");
  ScaleSet s = compute_scales(fp.gamma, fp.d, t);
  LowerBoundReport r;
  r.t = t;
  r.excess = solve.log_total_mass[idx] - (t * maxima.psi1 - 2.0 * fp.d * t);
  r.ratio = r.excess / s.r_t;
  return r;
}

}  // namespace pam
