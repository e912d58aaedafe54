// Copyright 2026 The pam Authors
// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"

#include <cmath>
#include <limits>
#include <tuple>
#include <vector>

#include "pam/errors.hpp"
#include "pam/poisson_sim.hpp"
#include "pam/stats.hpp"

using namespace pam;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double laplace_cdf(double x, double scale) {
  return x < 0 ? 0.5 * std::exp(x / scale) : 1.0 - 0.5 * std::exp(-x / scale);
}

}  // namespace

TEST_CASE("window counts are Poisson with the advertised mean") {
  auto p = make_limit_params(1.0, 1);
  const double y_min = 0.0;  // intensity_tail(0) = 2
  const std::size_t n_seeds = 10000;
  std::vector<long long> counts;
  std::vector<double> ys, xs;
  counts.reserve(n_seeds);
  long long above1 = 0;
  for (std::size_t s = 0; s < n_seeds; ++s) {
    auto set = sample_limit_process(p, y_min, 100 + s);
    counts.push_back(static_cast<long long>(set.points.size()));
    for (const auto& pt : set.points) {
      CHECK(pt.y >= y_min);
      ys.push_back(pt.y - y_min);
      xs.push_back(pt.x[0]);
      if (pt.y > 1.0) ++above1;
    }
  }
  auto rep = poisson_report("window count", counts, 2.0, 1e-3);
  CHECK(rep.pass);
  double disp = dispersion_index(counts);
  CHECK(disp > 0.9);
  CHECK(disp < 1.1);
  // thinning: the sub-window y > 1 must again be Poisson-mean-consistent
  double thin_mean = intensity_tail(1.0, p) * n_seeds;
  CHECK(std::fabs(above1 - thin_mean) < 4.0 * std::sqrt(thin_mean));
  // marginals of the pooled points
  auto yrep = ks_report("y above window floor", ys,
                        [](double v) { return v < 0 ? 0.0 : 1.0 - std::exp(-v); },
                        1e-3);
  CHECK(yrep.pass);
  auto xrep = ks_report("x coordinate", xs,
                        [](double v) { return laplace_cdf(v, 1.0); }, 1e-3);
  CHECK(xrep.pass);
  CHECK_THROWS_AS(sample_limit_process(p, kInf, 1), DomainError);
}

TEST_CASE("default window depth hits the target intensity") {
  for (auto [gamma, d] : std::vector<std::pair<double, int>>{{1.0, 1}, {0.5, 2}, {2.0, 3}}) {
    auto p = make_limit_params(gamma, d);
    CHECK(intensity_tail(default_y_min(p), p) == doctest::Approx(25.0));
  }
}

TEST_CASE("unseen-competitor mass agrees with a direct quadrature") {
  auto erlang_tail = [](int d, double z) {
    if (z <= 0) return 1.0;
    return d == 1 ? std::exp(-z) : std::exp(-z) * (1.0 + z);
  };
  struct Probe {
    double gamma;
    int d;
    double a, y_min, w;
  };
  for (const Probe& pr : {Probe{1.0, 1, 0.0, -2.0, 0.5}, Probe{1.0, 1, -1.0, -2.0, 2.0},
                          Probe{1.0, 1, -3.0, -2.0, 1.0}, Probe{0.5, 2, -1.0, -4.0, 1.0}}) {
    auto p = make_limit_params(pr.gamma, pr.d);
    double c = pr.w / (1.0 + pr.w);
    double flat = std::max(0.0, pr.y_min - pr.a);
    double upper = flat + 70.0 * c / ((1.0 - c) * pr.gamma) + 5.0;
    double wedge = adaptive_simpson(
        [&](double u) {
          double s = (pr.a - pr.y_min + u) / (c * p.theta);
          return pr.gamma * std::exp(pr.gamma * u) *
                 erlang_tail(pr.d, pr.gamma * p.theta * s);
        },
        0.0, upper, 1e-10);
    double oracle = intensity_tail(pr.y_min, p) * wedge;
    double exact = overtake_mass(pr.a, pr.y_min, pr.w, p);
    CAPTURE(pr.a);
    CAPTURE(pr.w);
    CHECK(exact == doctest::Approx(oracle).epsilon(1e-7));
  }
  auto p = make_limit_params(1.0, 1);
  // deep windows make the unseen mass vanish
  CHECK(overtake_mass(0.0, -50.0, 1.0, p) < 1e-9);
  CHECK(overtake_mass(0.0, -1.0, kInf, p) == kInf);
  CHECK_THROWS_AS(overtake_mass(0.0, -1.0, -1.0, p), DomainError);
}

TEST_CASE("argmax pair on a hand-built point set") {
  auto p = make_limit_params(1.0, 1);
  LimitPointSet set;
  set.params = p;
  set.y_min = -1.0;
  set.points = {LimitPoint{{0.0}, 2.0}, LimitPoint{{3.0}, 1.0},
                LimitPoint{{-1.0}, 1.5}};
  // w = 0: both rankings coincide
  auto r0 = argmax_pair(set, 0.0);
  CHECK(r0.top_y == 0);
  CHECK(r0.top_tilted == 0);
  // w = 1 (c = 1/2): point 1 scores 1 + 1.5 = 2.5 and overtakes
  auto r1 = argmax_pair(set, 1.0);
  CHECK(r1.top_y == 0);
  CHECK(r1.top_tilted == 1);
  CHECK(r1.escape_mass == doctest::Approx(overtake_mass(2.5, -1.0, 1.0, p)));
  CHECK(r1.certified == (r1.escape_mass <= 1e-3));
  // infinite tilt cannot be certified by any finite window
  auto rinf = argmax_pair(set, kInf);
  CHECK(rinf.certified == false);
  CHECK(std::isinf(rinf.escape_mass));
  CHECK(rinf.top_tilted == 1);
  LimitPointSet empty;
  empty.params = p;
  empty.y_min = 0.0;
  CHECK_THROWS_AS(argmax_pair(empty, 1.0), ContractError);
}

TEST_CASE("auto-chosen window certifies nearly every draw") {
  // d >= 2 windows hold ~1e9 points per draw (the certification depth is
  // amplified by the d-th power of the spatial tail), so probe in d=1
  for (auto [gamma, d, w] :
       std::vector<std::tuple<double, int, double>>{{1.0, 1, 1.0}, {0.5, 1, 1.0}}) {
    auto p = make_limit_params(gamma, d);
    double y_min = argmax_window_y_min(p, w);
    int certified = 0;
    const int n = 2000;
    for (int s = 0; s < n; ++s) {
      auto set = sample_limit_process(p, y_min, 40000 + s);
      if (argmax_pair(set, w).certified) ++certified;
    }
    CAPTURE(gamma);
    CAPTURE(w);
    CHECK(certified >= static_cast<int>(0.98 * n));
  }
  auto p = make_limit_params(1.0, 1);
  CHECK_THROWS_AS(argmax_window_y_min(p, 0.0), DomainError);
  CHECK_THROWS_AS(argmax_window_y_min(p, kInf), DomainError);
}

TEST_CASE("top-two sampler matches the order-statistic laws") {
  auto p = make_limit_params(1.0, 1);
  const std::size_t n = 20000;
  std::vector<double> x1s;
  long long y2_above = 0, y1_above = 0;
  for (std::size_t s = 0; s < n; ++s) {
    auto tt = sample_top_two(p, 70000 + s);
    CHECK(tt.y1 > tt.y2);
    x1s.push_back(tt.x1[0]);
    if (tt.y2 > 0.0) ++y2_above;
    if (tt.y1 > 0.0) ++y1_above;
  }
  // the top point's location is Laplace regardless of its height
  auto xrep = ks_report("top point location", x1s,
                        [](double v) { return laplace_cdf(v, 1.0); }, 1e-3);
  CHECK(xrep.pass);
  // P(y1 > 0) = 1 - e^{-I(0)}, P(y2 > 0) = 1 - e^{-I(0)}(1 + I(0)), I(0) = 2
  double p1 = 1.0 - std::exp(-2.0);
  double p2 = 1.0 - 3.0 * std::exp(-2.0);
  CHECK(std::fabs(double(y1_above) / n - p1) < 4.0 * std::sqrt(p1 * (1 - p1) / n));
  CHECK(std::fabs(double(y2_above) / n - p2) < 4.0 * std::sqrt(p2 * (1 - p2) / n));
}

TEST_CASE("ranking-agreement sampler tracks the analytic distribution") {
  struct Probe {
    double gamma;
    int d;
    double w;
    std::size_t n;
  };
  for (const Probe& pr : {Probe{1.0, 1, 0.3, 200000}, Probe{1.0, 1, 1.0, 200000},
                          Probe{1.0, 1, 3.0, 200000}, Probe{0.5, 2, 1.0, 100000}}) {
    auto p = make_limit_params(pr.gamma, pr.d);
    auto mc = ageing_survival_mc(p, pr.w, pr.n, 31337);
    CHECK(mc.certified_rate > 0.95);
    double survival = 1.0 - ageing_cdf(pr.w, p);
    CAPTURE(pr.gamma);
    CAPTURE(pr.d);
    CAPTURE(pr.w);
    CAPTURE(mc.estimate);
    CAPTURE(survival);
    CHECK(std::fabs(mc.estimate - survival) < 4.0 * mc.stderr_ + 0.002);
  }
}

TEST_CASE("ranking agreement is near one for tiny tilts and decreases") {
  auto p = make_limit_params(1.0, 1);
  auto tiny = ageing_survival_mc(p, 1e-4, 20000, 9);
  CHECK(tiny.estimate > 0.995);
  auto mid = ageing_survival_mc(p, 1.0, 50000, 9);
  auto big = ageing_survival_mc(p, 8.0, 50000, 9);
  CHECK(tiny.estimate > mid.estimate - 0.01);
  CHECK(mid.estimate > big.estimate - 0.01);
  CHECK_THROWS_AS(ageing_survival_mc(p, 0.0, 100, 1), DomainError);
  CHECK_THROWS_AS(ageing_survival_mc(p, 1.0, 0, 1), ContractError);
}
