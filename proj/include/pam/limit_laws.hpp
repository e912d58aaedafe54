// Copyright 2026 The pam Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PAM_LIMIT_LAWS_HPP
#define PAM_LIMIT_LAWS_HPP

#include <vector>

namespace pam {

// Parameter bundle for the limit world; theta is always recomputed from
// (gamma, d), never passed separately.
struct LimitParams {
  double gamma;
  int d;
  double theta;  // gamma^{-1} d^{1-1/gamma}
};

LimitParams make_limit_params(double gamma, int d);

// nu(R^d x (y, inf)) = 2^d (gamma theta)^{-d} e^{-gamma y}
double intensity_tail(double y, const LimitParams& p);

// Localisation-site density: product of Laplace marginals.
double density_p1(const std::vector<double>& x, const LimitParams& p);
double density_p1_radial(double abs_x, const LimitParams& p);

// Joint density of the top two points (x1,y1), (x2,y2), zero unless y1 > y2.
double density_joint(double abs_x1, double y1, double abs_x2, double y2,
                     const LimitParams& p);
double density_joint(const std::vector<double>& x1, double y1,
                     const std::vector<double>& x2, double y2,
                     const LimitParams& p);

// nu of the overtaking region D_w(x, y); w may be +infinity (the flag
// maps to an infinite measure). Depends on x through |x|_1 only.
double nu_Dw(double abs_x, double y, double w, const LimitParams& p);

// CDF F(w) of the rescaled ageing time, by adaptive quadrature of the
// radial reduction of 1 - integral exp(-nu(D_w)) dnu.
double ageing_cdf(double w, const LimitParams& p, double quad_tol = 1e-8);

}  // namespace pam

#endif
