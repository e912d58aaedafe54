// Copyright 2026 The pam Authors
// SPDX-License-Identifier: Apache-2.0

#include "pam/scales.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pam/stats.hpp"

namespace pam {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double a_of(double gamma, int d, double r) {
  return std::pow(d * std::log(r), 1.0 / gamma);
}

double d_of(double gamma, int d, double r) {
  return std::pow(d * std::log(r), 1.0 / gamma - 1.0);
}

// Entropic slope of Psi_t.
double psi_slope(double gamma, double t) { return std::log(std::log(t)) / (gamma * t); }

void require_time(double t) {
  if (!(t >= kMinTime)) throw DomainError("t must be >= e^e");
}

double survival(double x, double gamma) {
  return x <= 0 ? 1.0 : std::exp(-std::pow(x, gamma));
}

// u > uniform_floor(v)  <=>  field value > v
double uniform_floor(double v, double gamma) {
  return v < 0 ? -1.0 : -std::expm1(-std::pow(v, gamma));
}

// 53-bit threshold for the hot loops: (hash >> 11) >= accept_bits(f) is
// implied by to_unit(hash) > f, so no qualifying site is ever skipped.
std::uint64_t accept_bits(double u_floor) {
  if (u_floor < 0) return 0;
  if (u_floor >= 1) return ~0ULL;
  return static_cast<std::uint64_t>(u_floor * 0x1p53) + 1;
}

struct TopTwo {
  double psi1 = -kInf, psi2 = -kInf;
  Site z1, z2;
  int count = 0;

  static bool better(double v, const Site& z, double vb, const Site& zb) {
    if (v != vb) return v > vb;
    return z < zb;
  }

  void offer(double v, Site z) {
    if (count == 0 || better(v, z, psi1, z1)) {
      if (count > 0) {
        psi2 = psi1;
        z2 = std::move(z1);
      }
      psi1 = v;
      z1 = std::move(z);
      count = std::min(count + 1, 2);
    } else if (count == 1 || better(v, z, psi2, z2)) {
      psi2 = v;
      z2 = std::move(z);
      count = 2;
    }
  }
};

// Enumerate the sites with |z|_1 == ell (generic dimension).
template <typename Fn>
void for_each_shell_site(int d, Coord ell, Fn&& fn) {
  std::vector<Coord> z(static_cast<std::size_t>(d), 0);
  struct Rec {
    int d;
    std::vector<Coord>& z;
    Fn& fn;
    void walk(int i, Coord rem) {
      if (i == d - 1) {
        if (rem == 0) {
          z[static_cast<std::size_t>(i)] = 0;
          fn(z.data());
        } else {
          z[static_cast<std::size_t>(i)] = -rem;
          fn(z.data());
          z[static_cast<std::size_t>(i)] = rem;
          fn(z.data());
        }
        return;
      }
      for (Coord c = -rem; c <= rem; ++c) {
        z[static_cast<std::size_t>(i)] = c;
        walk(i + 1, rem - (c < 0 ? -c : c));
      }
    }
  } rec{d, z, fn};
  rec.walk(0, ell);
}

// Visit every site in shells lo..hi whose field value exceeds
// base + |z|_1 * slope. Callback receives (coords, value, |z|_1).
template <typename Fn>
void scan_exceedances(const FieldParams& fp, Coord lo, Coord hi, double base,
                      double slope, Fn&& fn) {
  const double gamma = fp.gamma;
  const double inv_gamma = 1.0 / gamma;
  auto block_floor = [&](Coord bl, Coord bh) {
    double thr = base + static_cast<double>(slope >= 0 ? bl : bh) * slope;
    return uniform_floor(thr, gamma);
  };

  if (fp.d == 1) {
    const std::uint64_t h0 = mix64(fp.seed);
    const Coord kBlock = 4096;
    for (Coord bl = lo; bl <= hi; bl += kBlock) {
      const Coord bh = std::min<Coord>(bl + kBlock - 1, hi);
      const std::uint64_t ab = accept_bits(block_floor(bl, bh));
      for (Coord ell = bl; ell <= bh; ++ell) {
        if (ell == 0) {
          std::uint64_t b = mix64(h0 ^ zigzag(0)) >> 11;
          if (b >= ab) {
            double v = std::pow(-std::log1p(-(b * 0x1p-53)), inv_gamma);
            if (v > base) {
              Coord zc[1] = {0};
              fn(zc, v, Coord{0});
            }
          }
          continue;
        }
        for (Coord zc1 : {-ell, ell}) {
          std::uint64_t b = mix64(h0 ^ zigzag(zc1)) >> 11;
          if (b >= ab) {
            double v = std::pow(-std::log1p(-(b * 0x1p-53)), inv_gamma);
            if (v > base + static_cast<double>(ell) * slope) {
              Coord zc[1] = {zc1};
              fn(zc, v, ell);
            }
          }
        }
      }
    }
    return;
  }

  if (fp.d == 2) {
    const std::uint64_t h0 = mix64(fp.seed);
    for (Coord ell = lo; ell <= hi; ++ell) {
      const double thr = base + static_cast<double>(ell) * slope;
      const std::uint64_t ab = accept_bits(uniform_floor(thr, gamma));
      for (Coord x = -ell; x <= ell; ++x) {
        const std::uint64_t hx = mix64(h0 ^ zigzag(x));
        const Coord y0 = ell - (x < 0 ? -x : x);
        for (Coord y : {-y0, y0}) {
          std::uint64_t b = mix64(hx ^ zigzag(y)) >> 11;
          if (b >= ab) {
            double v = std::pow(-std::log1p(-(b * 0x1p-53)), inv_gamma);
            if (v > thr) {
              Coord zc[2] = {x, y};
              fn(zc, v, ell);
            }
          }
          if (y0 == 0) break;
        }
      }
    }
    return;
  }

  for (Coord ell = lo; ell <= hi; ++ell) {
    const double thr = base + static_cast<double>(ell) * slope;
    const double u_floor = uniform_floor(thr, gamma);
    for_each_shell_site(fp.d, ell, [&](const Coord* z) {
      double u = site_uniform(fp.seed, z, fp.d);
      if (u > u_floor) {
        double v = std::pow(-std::log1p(-u), inv_gamma);
        if (v > thr) fn(z, v, ell);
      }
    });
  }
}

// Scan shells lo..hi updating a running top-two of Psi_{t,c}. The pruning
// threshold tracks the current second maximum.
void scan_top_two(const FieldParams& fp, Coord lo, Coord hi, double slope_eff,
                  TopTwo& top) {
  const double gamma = fp.gamma;
  const double inv_gamma = 1.0 / gamma;
  auto floor_at = [&](Coord bl, Coord bh) {
    if (top.count < 2) return -1.0;
    double thr = top.psi2 + static_cast<double>(slope_eff >= 0 ? bl : bh) * slope_eff;
    return uniform_floor(thr, gamma);
  };

  if (fp.d == 1) {
    const std::uint64_t h0 = mix64(fp.seed);
    const Coord kBlock = 2048;
    for (Coord bl = lo; bl <= hi; bl += kBlock) {
      const Coord bh = std::min<Coord>(bl + kBlock - 1, hi);
      const std::uint64_t ab = accept_bits(floor_at(bl, bh));
      for (Coord ell = bl; ell <= bh; ++ell) {
        if (ell == 0) {
          std::uint64_t b = mix64(h0 ^ zigzag(0)) >> 11;
          if (b >= ab)
            top.offer(std::pow(-std::log1p(-(b * 0x1p-53)), inv_gamma),
                      Site{0});
          continue;
        }
        const double shift = static_cast<double>(ell) * slope_eff;
        for (Coord zc : {-ell, ell}) {
          std::uint64_t b = mix64(h0 ^ zigzag(zc)) >> 11;
          if (b >= ab)
            top.offer(std::pow(-std::log1p(-(b * 0x1p-53)), inv_gamma) - shift,
                      Site{zc});
        }
      }
    }
    return;
  }

  if (fp.d == 2) {
    const std::uint64_t h0 = mix64(fp.seed);
    for (Coord ell = lo; ell <= hi; ++ell) {
      const std::uint64_t ab = accept_bits(floor_at(ell, ell));
      const double shift = static_cast<double>(ell) * slope_eff;
      for (Coord x = -ell; x <= ell; ++x) {
        const std::uint64_t hx = mix64(h0 ^ zigzag(x));
        const Coord y0 = ell - (x < 0 ? -x : x);
        for (Coord y : {-y0, y0}) {
          std::uint64_t b = mix64(hx ^ zigzag(y)) >> 11;
          if (b >= ab)
            top.offer(std::pow(-std::log1p(-(b * 0x1p-53)), inv_gamma) - shift,
                      Site{x, y});
          if (y0 == 0) break;
        }
      }
    }
    return;
  }

  for (Coord ell = lo; ell <= hi; ++ell) {
    const double u_floor = floor_at(ell, ell);
    const double shift = static_cast<double>(ell) * slope_eff;
    for_each_shell_site(fp.d, ell, [&](const Coord* z) {
      double u = site_uniform(fp.seed, z, fp.d);
      if (u > u_floor)
        top.offer(std::pow(-std::log1p(-u), inv_gamma) - shift, Site(z, z + fp.d));
    });
  }
}

PsiMaxima finish_maxima(const FieldParams& fp, const TopTwo& top, Coord R, double t,
                        double c) {
  if (top.count < 2)
    throw ContractError("locate_maxima: box holds fewer than 2 sites");
  PsiMaxima m;
  m.z1 = top.z1;
  m.z2 = top.z2;
  m.psi1 = top.psi1;
  m.psi2 = top.psi2;
  m.c = c;
  m.box_radius = R;
  m.coverage_defect = outside_mass_bound(fp, R, t, c, top.psi2);
  return m;
}

}  // namespace

ScaleSet compute_scales(double gamma, int d, double t) {
  if (!(gamma > 0)) throw DomainError("compute_scales: gamma must be positive");
  if (d < 1) throw DomainError("compute_scales: d must be >= 1");
  require_time(t);
  ScaleSet s;
  s.gamma = gamma;
  s.d = d;
  s.t = t;
  s.r_t = t * std::pow(std::log(t), 1.0 / gamma - 1.0) / std::log(std::log(t));
  s.a_rt = a_of(gamma, d, s.r_t);
  s.d_rt = d_of(gamma, d, s.r_t);
  s.theta = std::pow(static_cast<double>(d), 1.0 - 1.0 / gamma) / gamma;
  return s;
}

double psi(const PotentialField& field, double t, double c, const Site& z) {
  require_time(t);
  double xi = field.value(z);
  double ell = static_cast<double>(l1_norm(z));
  return xi - ell * psi_slope(field.gamma(), t) + c * ell / t;
}

double tail_mass_bound(const FieldParams& fp, Coord R, double base, double slope) {
  if (!(slope > 0)) return 1.0;
  const double gamma = fp.gamma;
  const int d = fp.d;

  double sum = 0.0;
  Coord ell = R + 1;
  const Coord explicit_cap = R + 1 + 4096;
  for (; ell < explicit_cap; ++ell) {
    double term = l1_shell_count(d, ell) * survival(base + ell * slope, gamma);
    sum += term;
    if (sum >= 1.0) return 1.0;
    if (term < 1e-300 || (sum > 0 && term < 1e-16 * sum && ell > R + 8))
      return std::min(1.0, sum);
  }

  // Analytic integral bound for the remaining shells: shell counts are
  // bounded by 2^d (x+d)^{d-1}/(d-1)!, and the integrand must be
  // decreasing at the switch point.
  double x0 = static_cast<double>(ell) - 1.0;
  while (true) {
    double y = base + x0 * slope;
    bool decreasing =
        y > 0 && gamma * slope * std::pow(y, gamma - 1.0) >= (d - 1) / (x0 + d);
    if (decreasing) break;
    Coord stop = static_cast<Coord>(x0) + 65536;
    for (; ell <= stop; ++ell) {
      double term = l1_shell_count(d, ell) * survival(base + ell * slope, gamma);
      sum += term;
      if (sum >= 1.0) return 1.0;
    }
    x0 = static_cast<double>(ell) - 1.0;
    if (x0 > 1e12) return 1.0;  // give up; certificate stays conservative
  }

  double y0 = std::pow(base + x0 * slope, gamma);
  double lfact = std::lgamma(static_cast<double>(d));
  double pref = std::exp(d * std::log(2.0) - lfact) /
                (std::pow(slope, d - 1) * gamma * slope);
  double A = base - d * slope;
  double integral = 0.0;
  double binom = 1.0;
  for (int m = d - 1; m >= 0; --m) {
    // binom = C(d-1, m)
    double coeff = binom * std::pow(-A, d - 1 - m);
    integral += coeff * gamma_upper((m + 1) / gamma, y0);
    binom *= static_cast<double>(m) / (d - m);
  }
  return std::min(1.0, sum + std::max(0.0, pref * integral));
}

double outside_mass_bound(const FieldParams& fp, Coord R, double t, double c,
                          double threshold) {
  require_time(t);
  double slope = psi_slope(fp.gamma, t) - c / t;
  return tail_mass_bound(fp, R, threshold, slope);
}

PsiMaxima locate_maxima(const FieldParams& fp, Coord R, double t, double c) {
  require_time(t);
  TopTwo top;
  double slope_eff = psi_slope(fp.gamma, t) - c / t;
  scan_top_two(fp, 0, R, slope_eff, top);
  return finish_maxima(fp, top, R, t, c);
}

PsiMaxima locate_maxima(const PotentialField& field, double t, double c) {
  return locate_maxima(field.params(), field.radius(), t, c);
}

PsiMaxima locate_maxima_certified(const FieldParams& fp, double t, double c,
                                  const BoxPolicy& policy) {
  require_time(t);
  ScaleSet s = compute_scales(fp.gamma, fp.d, t);
  double mult = fp.d == 1 ? 4.0 : 2.0;
  Coord R = std::max<Coord>(16, static_cast<Coord>(std::ceil(mult * s.r_t)));
  TopTwo top;
  double slope_eff = psi_slope(fp.gamma, t) - c / t;
  scan_top_two(fp, 0, R, slope_eff, top);
  PsiMaxima m = finish_maxima(fp, top, R, t, c);
  for (int g = 0; g < policy.max_growths && m.coverage_defect >= policy.epsilon; ++g) {
    Coord next = static_cast<Coord>(std::ceil(static_cast<double>(R) * policy.growth));
    scan_top_two(fp, R + 1, next, slope_eff, top);
    R = next;
    m = finish_maxima(fp, top, R, t, c);
  }
  if (m.coverage_defect >= policy.epsilon)
    throw CertificationError("locate_maxima_certified: defect above epsilon after growth");
  return m;
}

std::vector<RescaledPoint> rescale_points(const FieldParams& fp, Coord R, double t,
                                          double tau, double alpha) {
  require_time(t);
  ScaleSet s = compute_scales(fp.gamma, fp.d, t);
  const double h = psi_slope(fp.gamma, t);
  const double base = s.a_rt + s.d_rt * tau;
  const double slope = h + s.d_rt * alpha / s.r_t;
  std::vector<RescaledPoint> out;
  scan_exceedances(fp, 0, R, base, slope, [&](const Coord* z, double xi, Coord ell) {
    RescaledPoint p;
    p.x.resize(static_cast<std::size_t>(fp.d));
    for (int i = 0; i < fp.d; ++i) p.x[static_cast<std::size_t>(i)] = z[i] / s.r_t;
    p.y = (xi - static_cast<double>(ell) * h - s.a_rt) / s.d_rt;
    out.push_back(std::move(p));
  });
  return out;
}

std::vector<RescaledPoint> rescale_points(const PotentialField& field, double t,
                                          double tau, double alpha) {
  return rescale_points(field.params(), field.radius(), t, tau, alpha);
}

double window_defect(const FieldParams& fp, Coord R, double t, double tau,
                     double alpha) {
  require_time(t);
  ScaleSet s = compute_scales(fp.gamma, fp.d, t);
  double base = s.a_rt + s.d_rt * tau;
  double slope = psi_slope(fp.gamma, t) + s.d_rt * alpha / s.r_t;
  return tail_mass_bound(fp, R, base, slope);
}

Coord certified_window_radius(const FieldParams& fp, double t, double tau,
                              double alpha, const BoxPolicy& policy) {
  ScaleSet s = compute_scales(fp.gamma, fp.d, t);
  double mult = fp.d == 1 ? 4.0 : 2.0;
  Coord R = std::max<Coord>(16, static_cast<Coord>(std::ceil(mult * s.r_t)));
  for (int g = 0; g <= policy.max_growths; ++g) {
    if (window_defect(fp, R, t, tau, alpha) < policy.epsilon) return R;
    R = static_cast<Coord>(std::ceil(static_cast<double>(R) * policy.growth));
  }
  throw CertificationError("certified_window_radius: defect above epsilon after growth");
}

double ageing_time(const FieldParams& fp, Coord R, double t, double horizon,
                   double epsilon) {
  require_time(t);
  if (!(horizon > 0)) throw DomainError("ageing_time: horizon must be positive");
  const double t2 = t + horizon;

  PsiMaxima m1 = locate_maxima(fp, R, t, 0.0);
  if (m1.coverage_defect >= epsilon)
    throw CertificationError("ageing_time: box not certified at t (enlarge box)");
  PsiMaxima m2 = locate_maxima(fp, R, t2, 0.0);
  if (m2.coverage_defect >= epsilon)
    throw CertificationError("ageing_time: box not certified at t + horizon (enlarge box)");

  const double gamma = fp.gamma;
  const Coord ell1 = l1_norm(m1.z1);
  const double xi1 = field_value(fp, m1.z1);
  auto h = [&](double x) { return std::log(std::log(x)) / (gamma * x); };

  // Single crossing: only farther sites with strictly larger potential can
  // ever overtake, each at the unique root of h(x) = ratio.
  double best = kInf;
  scan_exceedances(fp, 0, R, xi1, 0.0, [&](const Coord* z, double xi, Coord ell) {
    if (ell <= ell1 || xi <= xi1) return;
    double ratio = (xi - xi1) / static_cast<double>(ell - ell1);
    if (h(t2) > ratio) return;  // does not cross inside the horizon
    double lo = t, hi = t2;
    while (hi - lo > 1e-12 * lo) {
      double mid = 0.5 * (lo + hi);
      if (h(mid) - ratio > 0)
        lo = mid;
      else
        hi = mid;
    }
    best = std::min(best, 0.5 * (lo + hi));
  });
  return best == kInf ? kInf : best - t;
}

double ageing_time(const PotentialField& field, double t, double horizon,
                   double epsilon) {
  return ageing_time(field.params(), field.radius(), t, horizon, epsilon);
}

}  // namespace pam
