// Copyright 2026 The pam Authors
// SPDX-License-Identifier: Apache-2.0

#include "pam/limit_laws.hpp"

#include <cmath>
#include <limits>

#include "pam/errors.hpp"
#include "pam/stats.hpp"

namespace pam {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double l1(const std::vector<double>& x) {
  double s = 0;
  for (double c : x) s += std::fabs(c);
  return s;
}

double lfact(int d) { return std::lgamma(static_cast<double>(d)); }

}  // namespace

LimitParams make_limit_params(double gamma, int d) {
  if (!(gamma > 0)) throw DomainError("limit params: gamma must be positive");
  if (d < 1) throw DomainError("limit params: d must be >= 1");
  LimitParams p;
  p.gamma = gamma;
  p.d = d;
  p.theta = std::pow(static_cast<double>(d), 1.0 - 1.0 / gamma) / gamma;
  return p;
}

double intensity_tail(double y, const LimitParams& p) {
  return std::pow(2.0 / (p.gamma * p.theta), p.d) * std::exp(-p.gamma * y);
}

double density_p1_radial(double abs_x, const LimitParams& p) {
  double rate = p.gamma * p.theta;  // = d^{1-1/gamma}
  return std::pow(rate / 2.0, p.d) * std::exp(-rate * std::fabs(abs_x));
}

double density_p1(const std::vector<double>& x, const LimitParams& p) {
  if (static_cast<int>(x.size()) != p.d)
    throw ContractError("density_p1: dimension mismatch");
  return density_p1_radial(l1(x), p);
}

double density_joint(double abs_x1, double y1, double abs_x2, double y2,
                     const LimitParams& p) {
  if (y1 <= y2) return 0.0;
  double g = p.gamma;
  double expo = -g * (y1 + y2 + p.theta * (std::fabs(abs_x1) + std::fabs(abs_x2))) -
                intensity_tail(y2, p);
  return g * g * std::exp(expo);
}

double density_joint(const std::vector<double>& x1, double y1,
                     const std::vector<double>& x2, double y2,
                     const LimitParams& p) {
  if (static_cast<int>(x1.size()) != p.d || static_cast<int>(x2.size()) != p.d)
    throw ContractError("density_joint: dimension mismatch");
  return density_joint(l1(x1), y1, l1(x2), y2, p);
}

double nu_Dw(double abs_x, double y, double w, const LimitParams& p) {
  if (!(w >= 0)) throw DomainError("nu_Dw: w must be nonnegative");
  if (std::isinf(w)) return kInf;
  double r = std::fabs(abs_x);
  double g = p.gamma, th = p.theta;
  double c = w / (1.0 + w);
  // y-marginalized overtaking measure: the straight tail above y inside
  // |xbar| <= |x| plus the tilted wedge beyond |x|, both reduced to
  // regularized incomplete gammas through the l1 shell volume.
  double straight = std::exp(-g * y) * std::pow(2.0 / (g * th), p.d) *
                    gamma_p(p.d, g * th * r);
  double beta = g * th * (1.0 - c);
  double tilted = std::exp(-g * (y + c * th * r)) * std::pow(2.0 / beta, p.d) *
                  gamma_q(p.d, beta * r);
  return straight + tilted;
}

double ageing_cdf(double w, const LimitParams& p, double quad_tol) {
  if (!(w > 0)) throw DomainError("ageing_cdf: w must be positive");
  if (!(quad_tol > 0)) throw DomainError("ageing_cdf: quad_tol must be positive");
  if (std::isinf(w)) return 1.0;
  double g = p.gamma, th = p.theta;
  int d = p.d;
  double c = w / (1.0 + w);
  double beta = g * th * (1.0 - c);

  // Survival integral: the y-integral is exact (nu(D_w) is linear in
  // e^{-gamma y}), leaving one radial integrand 2^d r^{d-1} e^{-g th r} /
  // ((d-1)! K(r)) with K the y-slope of nu(D_w).
  auto K = [&](double r) {
    return std::pow(2.0 / (g * th), d) * gamma_p(d, g * th * r) +
           std::exp(-g * c * th * r) * std::pow(2.0 / beta, d) *
               gamma_q(d, beta * r);
  };
  auto integrand = [&](double r) {
    double lg = d * std::log(2.0) + (d - 1) * std::log(std::max(r, 1e-300)) -
                g * th * r - lfact(d);
    return std::exp(lg) / K(r);
  };

  // Truncation: beyond R the integrand is dominated by the w=0 version,
  // whose tail mass is Q(d, g th R) / P(d, g th R).
  double R = std::max(1.0, d / (g * th));
  while (gamma_q(d, g * th * R) > 0.25 * quad_tol * gamma_p(d, g * th * R))
    R *= 2.0;
  double survival = adaptive_simpson(integrand, 0.0, R, quad_tol / 2.0);
  double F = 1.0 - survival;
  if (F < 0.0 && F > -10.0 * quad_tol) F = 0.0;
  if (F > 1.0 && F < 1.0 + 10.0 * quad_tol) F = 1.0;
  if (F < 0.0 || F > 1.0)
    throw NumericError("ageing_cdf: quadrature left [0,1]");
  return F;
}

}  // namespace pam
