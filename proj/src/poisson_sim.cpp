// Copyright 2026 The pam Authors
// SPDX-License-Identifier: Apache-2.0

#include "pam/poisson_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pam/errors.hpp"
#include "pam/rng.hpp"
#include "pam/stats.hpp"

namespace pam {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double l1(const std::vector<double>& x) {
  double s = 0;
  for (double c : x) s += std::fabs(c);
  return s;
}

double tilted_value(const LimitPoint& pt, double c, double theta) {
  return pt.y + c * theta * l1(pt.x);
}

}  // namespace

LimitPointSet sample_limit_process(const LimitParams& p, double y_min,
                                   std::uint64_t seed) {
  if (!std::isfinite(y_min))
    throw DomainError("sample_limit_process: y_min must be finite");
  LimitPointSet set;
  set.params = p;
  set.y_min = y_min;
  set.seed = seed;
  Rng rng(seed);
  long long n = rng.poisson(intensity_tail(y_min, p));
  set.points.reserve(static_cast<std::size_t>(n));
  const double xscale = 1.0 / (p.gamma * p.theta);
  for (long long i = 0; i < n; ++i) {
    LimitPoint pt;
    pt.y = y_min + rng.exponential(p.gamma);
    pt.x.resize(static_cast<std::size_t>(p.d));
    for (auto& c : pt.x) c = rng.laplace(xscale);
    set.points.push_back(std::move(pt));
  }
  return set;
}

double default_y_min(const LimitParams& p) {
  // intensity_tail(y_min) = 25
  return -std::log(25.0 * std::pow(p.gamma * p.theta / 2.0, p.d)) / p.gamma;
}

double overtake_mass(double a, double y_min, double w, const LimitParams& p) {
  if (!(w >= 0)) throw DomainError("overtake_mass: w must be nonnegative");
  if (std::isinf(w)) return kInf;
  double g = p.gamma, th = p.theta;
  double c = w / (1.0 + w);
  double beta = g * th * (1.0 - c);
  double r0 = c > 0 ? std::max(0.0, (a - y_min) / (c * th)) : (a < y_min ? 0.0 : kInf);
  if (std::isinf(r0)) return 0.0;
  double beat = std::exp(-g * a) * std::pow(2.0 / beta, p.d) * gamma_q(p.d, beta * r0);
  double seen = std::exp(-g * y_min) * std::pow(2.0 / (g * th), p.d) *
                gamma_q(p.d, g * th * r0);
  return std::max(0.0, beat - seen);
}

double argmax_window_y_min(const LimitParams& p, double w, double cert_eps) {
  if (!(w > 0) || std::isinf(w))
    throw DomainError("argmax_window_y_min: need finite positive w");
  double g = p.gamma, th = p.theta;
  double beta = g * th * (1.0 + w > 0 ? 1.0 / (1.0 + w) : 1.0);
  // 0.5% quantile of the tilted maximum under the full process
  double aq = -std::log(5.3 * std::pow(beta / 2.0, p.d)) / g;
  double y_min = std::min(default_y_min(p), aq);
  for (int it = 0; it < 4000; ++it) {
    if (overtake_mass(aq, y_min, w, p) <= cert_eps) return y_min;
    y_min -= 0.25;
  }
  throw NumericError("argmax_window_y_min: window depth diverged");
}

ArgmaxPair argmax_pair(const LimitPointSet& pts, double w, double cert_eps) {
  if (pts.points.empty()) throw ContractError("argmax_pair: empty point set");
  if (!(w >= 0)) throw DomainError("argmax_pair: w must be nonnegative");
  const LimitParams& p = pts.params;
  double c = std::isinf(w) ? 1.0 : w / (1.0 + w);
  ArgmaxPair r;
  double best_y = -kInf, best_t = -kInf;
  for (std::size_t i = 0; i < pts.points.size(); ++i) {
    const LimitPoint& pt = pts.points[i];
    if (pt.y > best_y) {
      best_y = pt.y;
      r.top_y = i;
    }
    double tv = tilted_value(pt, c, p.theta);
    if (tv > best_t) {
      best_t = tv;
      r.top_tilted = i;
    }
  }
  if (std::isinf(w)) {
    // infinite tilt: no finite window can pin the tilted argmax
    r.certified = false;
    r.escape_mass = kInf;
    return r;
  }
  r.escape_mass = overtake_mass(best_t, pts.y_min, w, p);
  r.certified = r.escape_mass <= cert_eps;
  return r;
}

namespace {

// Sample all points with tilted value y + c theta |x| above v_min. Under
// nu the tilted value is exponential and the x-coordinates stay Laplace
// with the widened scale 1/beta.
struct TiltedWindowSample {
  std::vector<LimitPoint> points;
  double max_y = -kInf;
  std::size_t top_y = 0, top_tilted = 0;
};

// Reveal the slab v_lo <= tilted < v_hi of one fixed realization
// (v_hi = +inf for the opening draw). Disjoint slabs are independent, so
// deepening extends the same realization rather than redrawing it.
void reveal_tilted_slab(const LimitParams& p, double c, double v_lo, double v_hi,
                        Rng& rng, TiltedWindowSample& s, double& best_t) {
  double g = p.gamma, th = p.theta;
  double beta = g * th * (1.0 - c);
  double m_lo = std::exp(-g * v_lo) * std::pow(2.0 / beta, p.d);
  double m_hi = std::isinf(v_hi) ? 0.0
                                 : std::exp(-g * v_hi) * std::pow(2.0 / beta, p.d);
  long long n = rng.poisson(m_lo - m_hi);
  for (long long i = 0; i < n; ++i) {
    double u = rng.uniform();
    double v = std::isinf(v_hi)
                   ? v_lo + rng.exponential(g)
                   : -std::log((1.0 - u) * std::exp(-g * v_lo) +
                               u * std::exp(-g * v_hi)) /
                         g;
    LimitPoint pt;
    pt.x.resize(static_cast<std::size_t>(p.d));
    for (auto& xc : pt.x) xc = rng.laplace(1.0 / beta);
    pt.y = v - c * th * l1(pt.x);
    if (pt.y > s.max_y) {
      s.max_y = pt.y;
      s.top_y = s.points.size();
    }
    if (v > best_t) {
      best_t = v;
      s.top_tilted = s.points.size();
    }
    s.points.push_back(std::move(pt));
  }
}

}  // namespace

McEstimate ageing_survival_mc(const LimitParams& p, double w, std::size_t n_samples,
                              std::uint64_t seed) {
  if (!(w > 0)) throw DomainError("ageing_survival_mc: w must be positive");
  if (n_samples == 0) throw ContractError("ageing_survival_mc: need samples");
  double g = p.gamma, th = p.theta;
  double c = w / (1.0 + w);
  // start with the y-maximum comfortably inside the window
  double v0 = -std::log(4.0 * std::pow(g * th / 2.0, p.d)) / g;

  std::size_t agree = 0, certified = 0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    Rng rng(split_seed(seed, i));
    TiltedWindowSample s;
    double best_t = -kInf;
    double v_min = v0, v_hi = kInf;
    // The draw certifies once the revealed y-max clears v_min: every
    // still-hidden point then loses both rankings outright.
    for (int round = 0; round < 8; ++round) {
      reveal_tilted_slab(p, c, v_min, v_hi, rng, s, best_t);
      if (!s.points.empty() && s.max_y >= v_min) {
        ++certified;
        if (s.top_y == s.top_tilted) ++agree;
        break;
      }
      v_hi = v_min;
      v_min -= 5.0;
    }
  }
  if (static_cast<double>(n_samples - certified) >
      0.10 * static_cast<double>(n_samples))
    throw NumericError("ageing_survival_mc: certification failure rate above 10%");

  McEstimate r;
  r.n = certified;
  r.certified_rate =
      static_cast<double>(certified) / static_cast<double>(n_samples);
  double n = static_cast<double>(certified);
  r.estimate = static_cast<double>(agree) / n;
  r.stderr_ = std::sqrt(std::max(0.0, r.estimate * (1.0 - r.estimate)) / n);
  return r;
}

TopTwoSample sample_top_two(const LimitParams& p, std::uint64_t seed) {
  // The window truncates y from below only, so the top two revealed
  // points are the process's true top two as soon as there are two.
  double y_min = default_y_min(p);
  Rng rng(seed);
  std::vector<LimitPoint> pts;
  const double xscale = 1.0 / (p.gamma * p.theta);
  double y_hi = kInf;
  for (int round = 0; round < 8; ++round) {
    double m_lo = intensity_tail(y_min, p);
    double m_hi = std::isinf(y_hi) ? 0.0 : intensity_tail(y_hi, p);
    long long n = rng.poisson(m_lo - m_hi);
    for (long long i = 0; i < n; ++i) {
      LimitPoint pt;
      double u = rng.uniform();
      pt.y = std::isinf(y_hi)
                 ? y_min + rng.exponential(p.gamma)
                 : -std::log((1.0 - u) * std::exp(-p.gamma * y_min) +
                             u * std::exp(-p.gamma * y_hi)) /
                       p.gamma;
      pt.x.resize(static_cast<std::size_t>(p.d));
      for (auto& c : pt.x) c = rng.laplace(xscale);
      pts.push_back(std::move(pt));
    }
    if (pts.size() >= 2) {
      std::size_t i1 = 0, i2 = 1;
      if (pts[i2].y > pts[i1].y) std::swap(i1, i2);
      for (std::size_t i = 2; i < pts.size(); ++i) {
        if (pts[i].y > pts[i1].y) {
          i2 = i1;
          i1 = i;
        } else if (pts[i].y > pts[i2].y) {
          i2 = i;
        }
      }
      TopTwoSample s;
      s.x1 = pts[i1].x;
      s.y1 = pts[i1].y;
      s.x2 = pts[i2].x;
      s.y2 = pts[i2].y;
      return s;
    }
    y_hi = y_min;
    y_min -= 5.0;
  }
  throw NumericError("sample_top_two: window kept coming up empty");
}

}  // namespace pam
