// Copyright 2026 The pam Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PAM_SCALES_HPP
#define PAM_SCALES_HPP

#include <vector>

#include "pam/field.hpp"

namespace pam {

// All time-dependent operations require t > e^e so that log log t > 1 and
// the crossing-time function is strictly monotone.
constexpr double kMinTime = 15.154262241479262;  // e^e

struct ScaleSet {
  double gamma;
  int d;
  double t;
  double r_t;    // t (log t)^{1/gamma-1} / log log t
  double a_rt;   // (d log r_t)^{1/gamma}
  double d_rt;   // (d log r_t)^{1/gamma-1}
  double theta;  // gamma^{-1} d^{1-1/gamma}
};

ScaleSet compute_scales(double gamma, int d, double t);

struct PsiMaxima {
  Site z1;
  Site z2;
  double psi1 = 0;
  double psi2 = 0;
  double c = 0;
  double coverage_defect = 1.0;
  Coord box_radius = 0;
};

struct BoxPolicy {
  double epsilon = 1e-3;
  double growth = 2.0;
  int max_growths = 14;
};

// Concentration functional xi(z) - |z| log log t / (gamma t) + c |z| / t.
double psi(const PotentialField& field, double t, double c, const Site& z);

// Upper bound on the probability that any site with |z|_1 > R has
// field value above base + |z|_1 * slope (union bound over shells).
double tail_mass_bound(const FieldParams& fp, Coord R, double base, double slope);

double outside_mass_bound(const FieldParams& fp, Coord R, double t, double c,
                          double threshold);

// Top two of Psi_{t,c} over the l1 ball of radius R, lexicographic tie-break.
// coverage_defect certifies both ranks against the unstored exterior.
PsiMaxima locate_maxima(const FieldParams& fp, Coord R, double t, double c);
PsiMaxima locate_maxima(const PotentialField& field, double t, double c);

// Auto-grows the box until coverage_defect < policy.epsilon.
PsiMaxima locate_maxima_certified(const FieldParams& fp, double t, double c,
                                  const BoxPolicy& policy = {});

struct RescaledPoint {
  std::vector<double> x;  // z / r_t
  double y;               // (Psi_t(z) - a_rt) / d_rt
};

// Points of the rescaled process inside the window y >= alpha |x| + tau.
std::vector<RescaledPoint> rescale_points(const FieldParams& fp, Coord R, double t,
                                          double tau, double alpha);
std::vector<RescaledPoint> rescale_points(const PotentialField& field, double t,
                                          double tau, double alpha);

// Probability bound that the window misses points outside radius R.
double window_defect(const FieldParams& fp, Coord R, double t, double tau, double alpha);

// Smallest policy-grown radius whose window defect is below epsilon.
Coord certified_window_radius(const FieldParams& fp, double t, double tau,
                              double alpha, const BoxPolicy& policy = {});

// First s > 0 at which the Psi argmax changes, or +infinity. Requires a
// coverage certificate at both t and t + horizon.
double ageing_time(const FieldParams& fp, Coord R, double t, double horizon,
                   double epsilon = 1e-3);
double ageing_time(const PotentialField& field, double t, double horizon,
                   double epsilon = 1e-3);

}  // namespace pam

#endif
