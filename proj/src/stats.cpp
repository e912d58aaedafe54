// Copyright 2026 The pam Authors
// SPDX-License-Identifier: Apache-2.0

#include "pam/stats.hpp"

#include <algorithm>
#include <cmath>

#include "pam/errors.hpp"

namespace pam {

namespace {

double gamma_p_series(double s, double x) {
  double term = 1.0 / s;
  double sum = term;
  for (int k = 1; k < 10000; ++k) {
    term *= x / (s + k);
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

// Lentz continued fraction for Q(s,x), x > s+1.
double gamma_q_cf(double s, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - s;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

}  // namespace

double gamma_p(double s, double x) {
  if (!(s > 0) || x < 0) throw DomainError("gamma_p: need s > 0, x >= 0");
  if (x == 0) return 0.0;
  if (x < s + 1.0) return gamma_p_series(s, x);
  return 1.0 - gamma_q_cf(s, x);
}

double gamma_q(double s, double x) {
  if (!(s > 0) || x < 0) throw DomainError("gamma_q: need s > 0, x >= 0");
  if (x == 0) return 1.0;
  if (x < s + 1.0) return 1.0 - gamma_p_series(s, x);
  return gamma_q_cf(s, x);
}

double gamma_upper(double s, double x) {
  return gamma_q(s, x) * std::exp(std::lgamma(s));
}

namespace {

double simpson_rec(const std::function<double(double)>& f, double a, double b,
                   double fa, double fm, double fb, double whole, double tol,
                   int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  if (depth <= 0) throw NumericError("adaptive quadrature did not converge");
  if (std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol) {
  if (!(b > a)) return 0.0;
  double m = 0.5 * (a + b);
  double fa = f(a), fm = f(m), fb = f(b);
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 60);
}

double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw ContractError("ks_statistic: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    double f = cdf(sample[i]);
    d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
    d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - f));
  }
  return d;
}

namespace {

// Kolmogorov tail Q_KS(lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_q(double lambda) {
  if (lambda < 1e-8) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += sign * term;
    if (term < 1e-16) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace

double ks_pvalue(std::size_t n, double d) {
  double sn = std::sqrt(static_cast<double>(n));
  return kolmogorov_q((sn + 0.12 + 0.11 / sn) * d);
}

double ks_critical(std::size_t n, double alpha) {
  double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
  double sn = std::sqrt(static_cast<double>(n));
  return c / (sn + 0.12 + 0.11 / sn);
}

double chi2_pvalue(double stat, double dof) {
  if (dof <= 0) return 1.0;
  return gamma_q(dof / 2.0, stat / 2.0);
}

Chi2Result poisson_chi2(const std::vector<long long>& counts, double mean,
                        double min_expected) {
  if (counts.size() < 5) throw ContractError("poisson_chi2: need >= 5 counts");
  if (!(mean > 0)) throw ContractError("poisson_chi2: degenerate reference mean");
  const double n = static_cast<double>(counts.size());
  long long kmax = 0;
  for (long long c : counts) kmax = std::max(kmax, c);

  // expected Poisson bin masses 0..kmax-1 plus the >= kmax tail
  std::vector<double> expected;
  double pk = std::exp(-mean);
  double cum = 0.0;
  for (long long k = 0; k < kmax; ++k) {
    expected.push_back(pk * n);
    cum += pk;
    pk *= mean / static_cast<double>(k + 1);
  }
  expected.push_back((1.0 - cum) * n);

  std::vector<double> observed(expected.size(), 0.0);
  for (long long c : counts)
    observed[static_cast<std::size_t>(std::min<long long>(c, kmax))] += 1.0;

  // merge sparse bins from the right, then from the left
  while (expected.size() > 2 && expected.back() < min_expected) {
    expected[expected.size() - 2] += expected.back();
    observed[observed.size() - 2] += observed.back();
    expected.pop_back();
    observed.pop_back();
  }
  while (expected.size() > 2 && expected.front() < min_expected) {
    expected[1] += expected[0];
    observed[1] += observed[0];
    expected.erase(expected.begin());
    observed.erase(observed.begin());
  }

  Chi2Result r;
  for (std::size_t i = 0; i < expected.size(); ++i)
    r.stat += (observed[i] - expected[i]) * (observed[i] - expected[i]) / expected[i];
  r.dof = static_cast<double>(expected.size()) - 1.0;
  r.p_value = chi2_pvalue(r.stat, r.dof);
  return r;
}

BinomialCI binomial_ci(long long successes, long long trials, double z) {
  if (trials <= 0) throw ContractError("binomial_ci: trials must be positive");
  double n = static_cast<double>(trials);
  double p = static_cast<double>(successes) / n;
  double z2 = z * z;
  double denom = 1.0 + z2 / n;
  double centre = (p + z2 / (2 * n)) / denom;
  double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom;
  return {p, std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

MeanStderr mean_stderr(const std::vector<double>& xs) {
  if (xs.empty()) throw ContractError("mean_stderr: empty sample");
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  std::size_t n = xs.size();
  var = n > 1 ? var / static_cast<double>(n - 1) : 0.0;
  return {mean, std::sqrt(var / static_cast<double>(n)), n};
}

double dispersion_index(const std::vector<long long>& counts) {
  if (counts.size() < 2) throw ContractError("dispersion_index: need >= 2 counts");
  double mean = 0.0;
  for (long long c : counts) mean += static_cast<double>(c);
  mean /= static_cast<double>(counts.size());
  if (mean == 0) throw ContractError("dispersion_index: zero mean");
  double var = 0.0;
  for (long long c : counts) {
    double dd = static_cast<double>(c) - mean;
    var += dd * dd;
  }
  var /= static_cast<double>(counts.size() - 1);
  return var / mean;
}

StatReport ks_report(const std::string& name, std::vector<double> sample,
                     const std::function<double(double)>& cdf, double alpha) {
  if (sample.size() < 5) throw ContractError("ks_report: sample size < 5");
  StatReport r;
  r.name = name;
  r.sample_size = sample.size();
  r.statistic = ks_statistic(std::move(sample), cdf);
  r.p_value = ks_pvalue(r.sample_size, r.statistic);
  r.pass = r.p_value > alpha;
  return r;
}

StatReport poisson_report(const std::string& name, const std::vector<long long>& counts,
                          double mean, double alpha) {
  StatReport r;
  r.name = name;
  r.sample_size = counts.size();
  Chi2Result c = poisson_chi2(counts, mean);
  r.statistic = c.stat;
  r.p_value = c.p_value;
  r.pass = r.p_value > alpha;
  return r;
}

}  // namespace pam
