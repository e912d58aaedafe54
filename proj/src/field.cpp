// Copyright 2026 The pam Authors
// SPDX-License-Identifier: Apache-2.0

#include "pam/field.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

namespace pam {

double weibull_quantile(double p, double gamma) {
  if (!(gamma > 0)) throw DomainError("weibull_quantile: gamma must be positive");
  if (!(p >= 0.0 && p < 1.0)) throw DomainError("weibull_quantile: p must be in [0,1)");
  return std::pow(-std::log1p(-p), 1.0 / gamma);
}

double l1_shell_count(int d, Coord ell) {
  if (ell == 0) return 1.0;
  if (ell < 0) return 0.0;
  double total = 0.0;
  double binom_dk = 1.0;  // C(d,k)
  for (int k = 1; k <= d && k <= ell; ++k) {
    binom_dk *= static_cast<double>(d - k + 1) / k;
    // C(ell-1, k-1)
    double binom_lk = 1.0;
    for (int j = 1; j < k; ++j)
      binom_lk *= static_cast<double>(ell - k + j) / j;
    total += std::ldexp(binom_dk * binom_lk, k);
  }
  return total;
}

double l1_ball_count(int d, Coord r) {
  if (r < 0) return 0.0;
  double total = 0.0;
  double binom_dk = 1.0;
  double binom_rk = 1.0;
  for (int k = 0; k <= d && k <= r; ++k) {
    if (k > 0) {
      binom_dk *= static_cast<double>(d - k + 1) / k;
      binom_rk *= static_cast<double>(r - k + 1) / k;
    }
    total += std::ldexp(binom_dk * binom_rk, k);
  }
  return total;
}

PotentialField::PotentialField(int d, Coord radius, double gamma,
                               std::uint64_t seed, std::size_t site_cap) {
  if (d < 1) throw DomainError("PotentialField: d must be >= 1");
  if (radius < 0) throw DomainError("PotentialField: radius must be >= 0");
  if (!(gamma > 0)) throw DomainError("PotentialField: gamma must be positive");
  params_ = FieldParams{d, gamma, seed};
  radius_ = radius;
  side_ = 2 * radius + 1;
  double n_sites = 1.0;
  for (int i = 0; i < d; ++i) n_sites *= static_cast<double>(side_);
  if (n_sites > static_cast<double>(site_cap))
    throw ResourceError("PotentialField: box exceeds configured site cap");
  values_.resize(static_cast<std::size_t>(n_sites));

  std::vector<Coord> z(static_cast<std::size_t>(d), -radius);
  const double inv_gamma = 1.0 / gamma;
  for (std::size_t idx = 0; idx < values_.size(); ++idx) {
    double u = site_uniform(seed, z.data(), d);
    values_[idx] = std::pow(-std::log1p(-u), inv_gamma);
    for (int i = d - 1; i >= 0; --i) {
      if (++z[static_cast<std::size_t>(i)] <= radius) break;
      z[static_cast<std::size_t>(i)] = -radius;
    }
  }
}

bool PotentialField::contains(const Site& z) const {
  if (static_cast<int>(z.size()) != params_.d) return false;
  for (Coord c : z)
    if (c < -radius_ || c > radius_) return false;
  return true;
}

std::size_t PotentialField::index_of(const Site& z) const {
  std::size_t idx = 0;
  for (Coord c : z) idx = idx * static_cast<std::size_t>(side_) +
                          static_cast<std::size_t>(c + radius_);
  return idx;
}

Site PotentialField::site_of(std::size_t index) const {
  Site z(static_cast<std::size_t>(params_.d));
  for (int i = params_.d - 1; i >= 0; --i) {
    z[static_cast<std::size_t>(i)] =
        static_cast<Coord>(index % static_cast<std::size_t>(side_)) - radius_;
    index /= static_cast<std::size_t>(side_);
  }
  return z;
}

double PotentialField::value(const Site& z) const {
  if (!contains(z)) throw CoverageError("PotentialField: site outside stored box");
  return values_[index_of(z)];
}

void PotentialField::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("PotentialField::save: cannot open " + path);
  out.write("PAMF", 4);
  std::uint32_t version = 1;
  std::int32_t d = params_.d;
  std::int64_t r = radius_;
  out.write(reinterpret_cast<const char*>(&version), sizeof version);
  out.write(reinterpret_cast<const char*>(&d), sizeof d);
  out.write(reinterpret_cast<const char*>(&r), sizeof r);
  out.write(reinterpret_cast<const char*>(&params_.gamma), sizeof(double));
  out.write(reinterpret_cast<const char*>(&params_.seed), sizeof(std::uint64_t));
  out.write(reinterpret_cast<const char*>(values_.data()),
            static_cast<std::streamsize>(values_.size() * sizeof(double)));
  if (!out) throw IoError("PotentialField::save: write failed");
}

PotentialField PotentialField::load(const std::string& path, std::size_t site_cap) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("PotentialField::load: cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "PAMF", 4) != 0)
    throw IoError("PotentialField::load: bad magic");
  std::uint32_t version = 0;
  std::int32_t d = 0;
  std::int64_t r = 0;
  double gamma = 0;
  std::uint64_t seed = 0;
  in.read(reinterpret_cast<char*>(&version), sizeof version);
  in.read(reinterpret_cast<char*>(&d), sizeof d);
  in.read(reinterpret_cast<char*>(&r), sizeof r);
  in.read(reinterpret_cast<char*>(&gamma), sizeof gamma);
  in.read(reinterpret_cast<char*>(&seed), sizeof seed);
  if (!in || version != 1) throw IoError("PotentialField::load: bad header");
  PotentialField f(d, r, gamma, seed, site_cap);
  // values are regenerated deterministically; verify payload matches
  std::vector<double> stored(f.values_.size());
  in.read(reinterpret_cast<char*>(stored.data()),
          static_cast<std::streamsize>(stored.size() * sizeof(double)));
  if (!in) throw IoError("PotentialField::load: truncated payload");
  if (stored != f.values_)
    throw IoError("PotentialField::load: payload does not match header seed");
  return f;
}

PotentialField sample_field(int d, Coord radius, double gamma, std::uint64_t seed,
                            std::size_t site_cap) {
  return PotentialField(d, radius, gamma, seed, site_cap);
}

namespace {

// Min-heap entry ordering: worst candidate on top. Worst = smaller value,
// or equal value with lexicographically larger site (tie-break rule).
struct TopKHeap {
  std::size_t k;
  std::vector<std::pair<double, Site>> entries;

  static bool worse(const std::pair<double, Site>& a, const std::pair<double, Site>& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second > b.second;
  }
  static bool heap_cmp(const std::pair<double, Site>& a, const std::pair<double, Site>& b) {
    return worse(b, a);  // min-heap
  }

  void offer(double value, Site site) {
    if (entries.size() < k) {
      entries.emplace_back(value, std::move(site));
      std::push_heap(entries.begin(), entries.end(), heap_cmp);
      return;
    }
    std::pair<double, Site> cand(value, std::move(site));
    if (worse(entries.front(), cand)) {
      std::pop_heap(entries.begin(), entries.end(), heap_cmp);
      entries.back() = std::move(cand);
      std::push_heap(entries.begin(), entries.end(), heap_cmp);
    }
  }

  double floor_value() const {
    return entries.size() < k ? -1.0 : entries.front().first;
  }

  std::vector<std::pair<Site, double>> sorted_descending() {
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return worse(b, a); });
    std::vector<std::pair<Site, double>> out;
    out.reserve(entries.size());
    for (auto& e : entries) out.emplace_back(std::move(e.second), e.first);
    return out;
  }
};

// value > floor  <=>  u > 1 - exp(-floor^gamma) for floor >= 0
double uniform_floor(double value_floor, double gamma) {
  if (value_floor < 0) return -1.0;
  return -std::expm1(-std::pow(value_floor, gamma));
}

std::vector<std::pair<Site, double>> top_k_streaming(const FieldParams& fp, Coord r,
                                                     std::size_t k) {
  TopKHeap heap{k, {}};
  const double inv_gamma = 1.0 / fp.gamma;
  const std::uint64_t seed = fp.seed;

  if (fp.d == 1) {
    const std::uint64_t h0 = mix64(seed);
    double u_floor = -1.0;
    Coord processed = 0;
    Coord z = 0;
    auto consider = [&](Coord c) {
      std::uint64_t h = mix64(h0 ^ zigzag(c));
      double u = to_unit(h);
      if (u > u_floor) {
        Coord site[1] = {c};
        (void)site;
        double v = std::pow(-std::log1p(-u), inv_gamma);
        heap.offer(v, Site{c});
      }
    };
    consider(0);
    for (z = 1; z <= r; ++z) {
      consider(-z);
      consider(z);
      if (++processed >= 2048) {
        processed = 0;
        u_floor = uniform_floor(heap.floor_value(), fp.gamma);
      }
    }
  } else if (fp.d == 2) {
    const std::uint64_t h0 = mix64(seed);
    double u_floor = -1.0;
    Coord processed = 0;
    for (Coord x = -r; x <= r; ++x) {
      const std::uint64_t hx = mix64(h0 ^ zigzag(x));
      const Coord ymax = r - (x < 0 ? -x : x);
      for (Coord y = -ymax; y <= ymax; ++y) {
        double u = to_unit(mix64(hx ^ zigzag(y)));
        if (u > u_floor) {
          double v = std::pow(-std::log1p(-u), inv_gamma);
          heap.offer(v, Site{x, y});
        }
      }
      processed += 2 * ymax + 1;
      if (processed >= 65536) {
        processed = 0;
        u_floor = uniform_floor(heap.floor_value(), fp.gamma);
      }
    }
  } else {
    double u_floor = -1.0;
    long long processed = 0;
    for_each_ball_site(fp.d, r, [&](const Coord* z) {
      double u = site_uniform(seed, z, fp.d);
      if (u > u_floor) {
        double v = std::pow(-std::log1p(-u), inv_gamma);
        heap.offer(v, Site(z, z + fp.d));
      }
      if (++processed >= 65536) {
        processed = 0;
        u_floor = uniform_floor(heap.floor_value(), fp.gamma);
      }
    });
  }
  return heap.sorted_descending();
}

}  // namespace

std::vector<std::pair<Site, double>> order_statistics(const FieldParams& fp, Coord r,
                                                      std::size_t k) {
  if (r < 0) throw DomainError("order_statistics: r must be >= 0");
  double ball = l1_ball_count(fp.d, r);
  if (k < 1 || static_cast<double>(k) > ball)
    throw ContractError("order_statistics: k out of range for the ball");
  return top_k_streaming(fp, r, k);
}

std::vector<std::pair<Site, double>> order_statistics(const PotentialField& field,
                                                      Coord r, std::size_t k) {
  if (r > field.radius())
    throw CoverageError("order_statistics: r exceeds the stored radius");
  return order_statistics(field.params(), r, k);
}

std::pair<SiteSet, SiteSet> top_site_sets(const FieldParams& fp, Coord r,
                                          double rho, double sigma) {
  if (!(rho > 0 && rho < sigma && sigma < 0.5))
    throw DomainError("top_site_sets: need 0 < rho < sigma < 1/2");
  if (r < 1) throw DomainError("top_site_sets: r must be >= 1");
  double ball = l1_ball_count(fp.d, r);
  auto clamp = [&](double x) {
    return static_cast<std::size_t>(std::min(std::floor(x), ball));
  };
  std::size_t kf = clamp(std::pow(static_cast<double>(r), rho));
  std::size_t kg = clamp(std::pow(static_cast<double>(r), sigma));
  auto top = order_statistics(fp, r, kg);
  SiteSet F, G;
  for (std::size_t i = 0; i < top.size(); ++i) {
    if (i < kf) F.insert(top[i].first);
    G.insert(top[i].first);
  }
  return {F, G};
}

std::pair<SiteSet, SiteSet> top_site_sets(const PotentialField& field, Coord r,
                                          double rho, double sigma) {
  if (r > field.radius())
    throw CoverageError("top_site_sets: r exceeds the stored radius");
  return top_site_sets(field.params(), r, rho, sigma);
}

bool is_totally_disconnected(const SiteSet& sites) {
  for (const Site& z : sites) {
    Site nb = z;
    for (std::size_t i = 0; i < z.size(); ++i) {
      for (int s : {-1, 1}) {
        nb[i] = z[i] + s;
        if (sites.count(nb)) return false;
      }
      nb[i] = z[i];
    }
  }
  return true;
}

bool is_valid_path(const GeoPath& path) {
  if (path.sites.empty()) return false;
  const std::size_t d = path.sites.front().size();
  if (d == 0) return false;
  for (std::size_t i = 1; i < path.sites.size(); ++i) {
    if (path.sites[i].size() != d) return false;
    Coord dist = 0;
    for (std::size_t j = 0; j < d; ++j)
      dist += std::llabs(path.sites[i][j] - path.sites[i - 1][j]);
    if (dist != 1) return false;
  }
  return true;
}

PathCounters path_counters(const GeoPath& path, const FieldParams& fp,
                           const SiteSet& A) {
  if (!is_valid_path(path)) throw ContractError("path_counters: invalid path");
  PathCounters pc;
  pc.n = static_cast<long long>(path.sites.size()) - 1;
  const Site& origin = path.sites.front();
  pc.q = -1.0;
  for (const Site& y : path.sites) {
    Coord disp = 0;
    for (std::size_t j = 0; j < y.size(); ++j)
      disp += std::llabs(y[j] - origin[j]);
    pc.p = std::max(pc.p, disp);
    double v = field_value(fp, y);
    if (v > pc.q) {
      pc.q = v;
      pc.z = y;
    }
    if (A.count(y))
      ++pc.n_plus;
    else
      ++pc.n_minus;
  }
  return pc;
}

bool check_count_bound(const GeoPath& path, const FieldParams& fp, const SiteSet& A) {
  if (!is_totally_disconnected(A))
    throw ContractError("check_count_bound: A must be totally disconnected");
  PathCounters pc = path_counters(path, fp, A);
  double cap = std::min(static_cast<double>(A.size()),
                        std::ceil((static_cast<double>(pc.p) + 1.0) / 2.0));
  // The tail piece left after loop-erasure may have odd length and start
  // inside A, so its in-A count rounds up; the loop pieces are even.
  double bound = std::ceil(static_cast<double>(pc.n - pc.p) / 2.0) + cap;
  return static_cast<double>(pc.n_plus) <= bound;
}

}  // namespace pam
