// Copyright 2026 The pam Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <limits>

#include "pam/solver.hpp"

namespace pam {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Operator {
  int d;
  std::vector<int> nbrs;
  std::vector<double> xi;

  // (Av)_i with A = Delta + diag(xi)
  void apply(const std::vector<double>& v, std::vector<double>& out) const {
    const std::size_t n = xi.size();
    const int twod = 2 * d;
    for (std::size_t i = 0; i < n; ++i) {
      double acc = (xi[i] - twod) * v[i];
      const int* nb = nbrs.data() + i * static_cast<std::size_t>(twod);
      for (int k = 0; k < twod; ++k)
        if (nb[k] >= 0) acc += v[static_cast<std::size_t>(nb[k])];
      out[i] = acc;
    }
  }
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void axpy(std::vector<double>& y, double a, const std::vector<double>& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

double norm2(const std::vector<double>& v) { return std::sqrt(dot(v, v)); }

double inf_norm(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

// Jacobi sweep eigensolver for the tiny projected matrix.
void small_sym_eig(std::vector<std::vector<double>> B, std::vector<double>& evals,
                   std::vector<std::vector<double>>& evecs) {
  const std::size_t m = B.size();
  evecs.assign(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i) evecs[i][i] = 1.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (std::size_t p = 0; p < m; ++p)
      for (std::size_t q = p + 1; q < m; ++q) off += B[p][q] * B[p][q];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < m; ++p)
      for (std::size_t q = p + 1; q < m; ++q) {
        if (std::fabs(B[p][q]) < 1e-300) continue;
        double phi = 0.5 * std::atan2(2.0 * B[p][q], B[q][q] - B[p][p]);
        double c = std::cos(phi), s = std::sin(phi);
        for (std::size_t k = 0; k < m; ++k) {
          double bkp = B[k][p], bkq = B[k][q];
          B[k][p] = c * bkp - s * bkq;
          B[k][q] = s * bkp + c * bkq;
        }
        for (std::size_t k = 0; k < m; ++k) {
          double bpk = B[p][k], bqk = B[q][k];
          B[p][k] = c * bpk - s * bqk;
          B[q][k] = s * bpk + c * bqk;
        }
        for (std::size_t k = 0; k < m; ++k) {
          double vkp = evecs[k][p], vkq = evecs[k][q];
          evecs[k][p] = c * vkp - s * vkq;
          evecs[k][q] = s * vkp + c * vkq;
        }
      }
  }
  evals.resize(m);
  for (std::size_t i = 0; i < m; ++i) evals[i] = B[i][i];
  // sort descending, keeping vectors aligned
  std::vector<std::size_t> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return evals[a] > evals[b]; });
  std::vector<double> ev(m);
  std::vector<std::vector<double>> vv(m, std::vector<double>(m));
  for (std::size_t j = 0; j < m; ++j) {
    ev[j] = evals[order[j]];
    for (std::size_t k = 0; k < m; ++k) vv[k][j] = evecs[k][order[j]];
  }
  evals = ev;
  evecs = vv;
}

// Block power iteration with Rayleigh-Ritz extraction. A single power
// vector stalls when the two best peaks are nearly degenerate, which is
// routine for heavy-tailed potentials; a small orthonormal block converges
// at the gap to the (m+1)-th eigenvalue instead.
void block_eig_top2(const Operator& op, double sigma, double tol,
                    std::size_t argmax, std::size_t second, double& lambda1,
                    double& lambda2, std::vector<double>& v1) {
  const std::size_t n = op.xi.size();
  const std::size_t m = std::min<std::size_t>(n, 4);
  std::vector<std::vector<double>> V(m, std::vector<double>(n, 0.0));
  // seed with unit vectors at the best sites, then fill distinct indices
  std::vector<std::size_t> seeds = {argmax, second};
  for (std::size_t i = 0; seeds.size() < m && i < n; ++i) {
    bool used = false;
    for (std::size_t s : seeds) used = used || s == i;
    if (!used) seeds.push_back(i);
  }
  seeds.resize(m);
  for (std::size_t j = 0; j < m; ++j) V[j][seeds[j]] = 1.0;

  std::vector<std::vector<double>> W(m, std::vector<double>(n));
  std::vector<double> x(n), ax(n);
  const int max_iters = 200000;
  for (int it = 0; it < max_iters; ++it) {
    for (std::size_t j = 0; j < m; ++j) op.apply(V[j], W[j]);
    // projected matrix B = V^T A V (symmetric)
    std::vector<std::vector<double>> B(m, std::vector<double>(m));
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) B[a][b] = dot(V[a], W[b]);
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = a + 1; b < m; ++b) {
        double s = 0.5 * (B[a][b] + B[b][a]);
        B[a][b] = B[b][a] = s;
      }
    std::vector<double> mu;
    std::vector<std::vector<double>> Y;
    small_sym_eig(B, mu, Y);
    // residuals of the top two Ritz pairs
    bool converged = true;
    for (std::size_t j = 0; j < std::min<std::size_t>(2, m); ++j) {
      for (std::size_t i = 0; i < n; ++i) {
        double xi_ = 0, axi = 0;
        for (std::size_t k = 0; k < m; ++k) {
          xi_ += V[k][i] * Y[k][j];
          axi += W[k][i] * Y[k][j];
        }
        x[i] = xi_;
        ax[i] = axi;
      }
      double res = 0;
      for (std::size_t i = 0; i < n; ++i)
        res = std::max(res, std::fabs(ax[i] - mu[j] * x[i]));
      if (res / std::max(inf_norm(x), 1e-300) >= tol) {
        converged = false;
        break;
      }
      if (j == 0) {
        lambda1 = mu[0];
        v1 = x;
      } else {
        lambda2 = mu[1];
      }
    }
    if (converged && m >= 2) return;
    if (converged && m == 1) {
      lambda2 = -kInf;
      return;
    }
    // next block: shifted images, Ritz-rotated, re-orthonormalized
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t i = 0; i < n; ++i) {
        double acc = 0;
        for (std::size_t k = 0; k < m; ++k)
          acc += (W[k][i] + sigma * V[k][i]) * Y[k][j];
        x[i] = acc;
      }
      for (std::size_t k = 0; k < j; ++k) axpy(x, -dot(x, V[k]), V[k]);
      double nv = norm2(x);
      if (!(nv > 0)) {
        // subspace collapse: restart the column on a fresh unit vector
        x.assign(n, 0.0);
        x[static_cast<std::size_t>((it + static_cast<int>(j)) %
                                   static_cast<int>(n))] = 1.0;
        for (std::size_t k = 0; k < j; ++k) axpy(x, -dot(x, V[k]), V[k]);
        nv = norm2(x);
        if (!(nv > 0)) throw NumericError("block iteration lost the subspace");
      }
      for (double& val : x) val /= nv;
      V[j] = x;
    }
  }
  throw NumericError("power iteration did not converge; residual above tol");
}

}  // namespace

SpectralResult principal_eigen(const FieldParams& fp, Coord box_radius, double tol) {
  if (!(tol > 0)) throw ContractError("principal_eigen: tol must be positive");
  if (box_radius < 0) throw ContractError("principal_eigen: empty box");
  double count = l1_ball_count(fp.d, box_radius);
  if (count > 4e6) throw ResourceError("principal_eigen: box too large");

  SpectralResult res;
  Operator op;
  op.d = fp.d;

  // enumerate the ball and wire up neighbours
  std::vector<Site> sites;
  sites.reserve(static_cast<std::size_t>(count));
  const Coord side = 2 * box_radius + 1;
  double cube = 1;
  for (int i = 0; i < fp.d; ++i) cube *= static_cast<double>(side);
  if (cube > 1.5e9) throw ResourceError("principal_eigen: index cube too large");
  std::vector<int> index(static_cast<std::size_t>(cube), -1);
  auto cube_index = [&](const Coord* z) {
    std::size_t idx = 0;
    for (int i = 0; i < fp.d; ++i)
      idx = idx * static_cast<std::size_t>(side) +
            static_cast<std::size_t>(z[i] + box_radius);
    return idx;
  };
  for_each_ball_site(fp.d, box_radius, [&](const Coord* z) {
    index[cube_index(z)] = static_cast<int>(sites.size());
    sites.emplace_back(z, z + fp.d);
  });
  const std::size_t n = sites.size();
  const int twod = 2 * fp.d;
  op.xi.resize(n);
  op.nbrs.assign(n * static_cast<std::size_t>(twod), -1);
  std::size_t argmax = 0, second = n > 1 ? 1 : 0;
  double xi_max = -kInf, xi_second = -kInf;
  Site nb(static_cast<std::size_t>(fp.d));
  for (std::size_t i = 0; i < n; ++i) {
    op.xi[i] = field_value(fp, sites[i]);
    if (op.xi[i] > xi_max) {
      xi_second = xi_max;
      second = argmax;
      xi_max = op.xi[i];
      argmax = i;
    } else if (op.xi[i] > xi_second) {
      xi_second = op.xi[i];
      second = i;
    }
    for (int k = 0; k < twod; ++k) {
      nb = sites[i];
      nb[static_cast<std::size_t>(k / 2)] += (k % 2 == 0) ? 1 : -1;
      if (l1_norm(nb) <= box_radius)
        op.nbrs[i * static_cast<std::size_t>(twod) + static_cast<std::size_t>(k)] =
            index[cube_index(nb.data())];
    }
  }

  // The shift must push the whole spectrum above zero so the top end
  // dominates the iteration; xi_max + 1 alone fails for small potentials.
  const double sigma = std::max(xi_max, 2.0 * twod) + 1.0;

  std::vector<double> v1(n, 0.0);
  block_eig_top2(op, sigma, tol, argmax, second, res.lambda1, res.lambda2, v1);
  res.gap = res.lambda1 - res.lambda2;
  res.potential_gap = n >= 2 ? xi_max - xi_second : kInf;

  // Perron vector is signed arbitrarily by the iteration; fix it positive
  // and unit at the xi-argmax.
  std::vector<double> w(n);
  op.apply(v1, w);
  double resid = 0;
  for (std::size_t i = 0; i < n; ++i)
    resid = std::max(resid, std::fabs(w[i] - res.lambda1 * v1[i]));
  res.residual = resid / std::max(inf_norm(v1), 1e-300);
  double at_max = v1[argmax];
  if (at_max == 0) throw NumericError("principal_eigen: vanished at the xi-argmax");
  for (double& x : v1) x /= at_max;
  res.sites = std::move(sites);
  res.eigvec = std::move(v1);
  return res;
}

SpectralResult principal_eigen(const PotentialField& field, Coord box_radius,
                               double tol) {
  if (box_radius > field.radius())
    throw ContractError("principal_eigen: box exceeds the stored field");
  return principal_eigen(field.params(), box_radius, tol);
}

}  // namespace pam
