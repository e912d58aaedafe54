// Copyright 2026 The pam Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PAM_POISSON_SIM_HPP
#define PAM_POISSON_SIM_HPP

#include <cstdint>
#include <vector>

#include "pam/limit_laws.hpp"

namespace pam {

struct LimitPoint {
  std::vector<double> x;
  double y;
};

// One realization of the limit process restricted to y >= y_min.
struct LimitPointSet {
  LimitParams params;
  double y_min;
  std::uint64_t seed;
  std::vector<LimitPoint> points;
};

LimitPointSet sample_limit_process(const LimitParams& p, double y_min,
                                   std::uint64_t seed);

// Window with mean count 25; deep enough for count statistics, cheap
// enough for mass sampling.
double default_y_min(const LimitParams& p);

// Window deep enough that at least ~99% of samples certify their tilted
// argmax against sub-window competitors at the given escape budget.
double argmax_window_y_min(const LimitParams& p, double w, double cert_eps = 1e-3);

// nu-measure of {y < y_min, y + c theta |x| > a}: the mass of unseen
// points that could beat a tilted score of a.
double overtake_mass(double a, double y_min, double w, const LimitParams& p);

struct ArgmaxPair {
  std::size_t top_y = 0;
  std::size_t top_tilted = 0;
  bool certified = false;
  double escape_mass = 0;  // overtake_mass at the tilted maximum
};

ArgmaxPair argmax_pair(const LimitPointSet& pts, double w, double cert_eps = 1e-3);

struct McEstimate {
  double estimate = 0;
  double stderr_ = 0;
  double certified_rate = 0;
  std::size_t n = 0;
};

// Monte Carlo estimate of 1 - F(w): the probability that the y-argmax
// also wins the tilted ranking. Samples the tilted-value window directly,
// so the tilted argmax is exact; uncertified draws deepen and retry.
McEstimate ageing_survival_mc(const LimitParams& p, double w, std::size_t n_samples,
                              std::uint64_t seed);

struct TopTwoSample {
  std::vector<double> x1;
  double y1 = 0;
  std::vector<double> x2;
  double y2 = 0;
};

// Top two points of a fresh realization ranked by y; rank 2 is exact
// because the window only truncates from below.
TopTwoSample sample_top_two(const LimitParams& p, std::uint64_t seed);

}  // namespace pam

#endif
