// Copyright 2026 The pam Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PAM_STATS_HPP
#define PAM_STATS_HPP

#include <functional>
#include <string>
#include <vector>

namespace pam {

// Regularized incomplete gamma functions, series for x < s+1 and
// continued fraction otherwise.
double gamma_p(double s, double x);  // P(s,x)
double gamma_q(double s, double x);  // Q(s,x) = 1 - P(s,x)

// Non-regularized upper incomplete gamma.
double gamma_upper(double s, double x);

// Two-sided Kolmogorov-Smirnov distance of a sample against an analytic CDF.
double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf);

// Asymptotic p-value (Stephens' small-sample correction).
double ks_pvalue(std::size_t n, double d);

// Critical KS distance at significance alpha.
double ks_critical(std::size_t n, double alpha);

double chi2_pvalue(double stat, double dof);

// Recursive adaptive Simpson quadrature to absolute tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol);

// Chi-square GoF of integer counts against Poisson(mean). Bins are
// merged from the upper tail so every expected bin count is >= min_expected.
struct Chi2Result {
  double stat = 0;
  double dof = 0;
  double p_value = 1;
};
Chi2Result poisson_chi2(const std::vector<long long>& counts, double mean,
                        double min_expected = 5.0);

// Wilson score interval.
struct BinomialCI {
  double estimate;
  double lo;
  double hi;
};
BinomialCI binomial_ci(long long successes, long long trials, double z = 3.0);

struct MeanStderr {
  double mean;
  double stderr_;
  std::size_t n;
};
MeanStderr mean_stderr(const std::vector<double>& xs);

double dispersion_index(const std::vector<long long>& counts);

// One verdict row of a statistical test suite.
struct StatReport {
  std::string name;
  double statistic = 0;
  double p_value = -1;  // -1 when the test reports a CI instead
  double ci_lo = 0;
  double ci_hi = 0;
  std::size_t sample_size = 0;
  bool pass = false;
};

StatReport ks_report(const std::string& name, std::vector<double> sample,
                     const std::function<double(double)>& cdf, double alpha);
StatReport poisson_report(const std::string& name, const std::vector<long long>& counts,
                          double mean, double alpha);

}  // namespace pam

#endif
