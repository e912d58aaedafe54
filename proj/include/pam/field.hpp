// Copyright 2026 The pam Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PAM_FIELD_HPP
#define PAM_FIELD_HPP

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pam/errors.hpp"
#include "pam/rng.hpp"

namespace pam {

using Coord = long long;
using Site = std::vector<Coord>;

inline Coord l1_norm(const Site& z) {
  Coord s = 0;
  for (Coord c : z) s += c < 0 ? -c : c;
  return s;
}

// Inverse of the Weibull distribution function 1 - exp(-x^gamma).
double weibull_quantile(double p, double gamma);

struct FieldParams {
  int d = 1;
  double gamma = 1.0;
  std::uint64_t seed = 0;
};

// Site value of the i.i.d. Weibull field, derived purely from (seed, z).
inline double field_value(const FieldParams& fp, const Coord* z) {
  double u = site_uniform(fp.seed, z, fp.d);
  return weibull_quantile(u, fp.gamma);
}

inline double field_value(const FieldParams& fp, const Site& z) {
  return field_value(fp, z.data());
}

// Dense realization on the cube {-R..R}^d. Immutable after construction;
// safe to read concurrently. Ball queries filter by |z|_1.
class PotentialField {
 public:
  static constexpr std::size_t kDefaultSiteCap = 1ULL << 28;

  PotentialField(int d, Coord radius, double gamma, std::uint64_t seed,
                 std::size_t site_cap = kDefaultSiteCap);

  int dimension() const { return params_.d; }
  Coord radius() const { return radius_; }
  double gamma() const { return params_.gamma; }
  std::uint64_t seed() const { return params_.seed; }
  const FieldParams& params() const { return params_; }

  bool contains(const Site& z) const;
  double value(const Site& z) const;
  double value_raw(std::size_t index) const { return values_[index]; }
  std::size_t size() const { return values_.size(); }

  std::size_t index_of(const Site& z) const;
  Site site_of(std::size_t index) const;

  const std::vector<double>& values() const { return values_; }

  void save(const std::string& path) const;
  static PotentialField load(const std::string& path,
                             std::size_t site_cap = kDefaultSiteCap);

 private:
  PotentialField() = default;
  FieldParams params_;
  Coord radius_ = 0;
  Coord side_ = 1;
  std::vector<double> values_;
};

PotentialField sample_field(int d, Coord radius, double gamma, std::uint64_t seed,
                            std::size_t site_cap = PotentialField::kDefaultSiteCap);

// Entries sorted by value descending; ties broken by lexicographically
// smallest site. Entry i is the order statistic xi_r^(i+1).
std::vector<std::pair<Site, double>> order_statistics(const PotentialField& field,
                                                      Coord r, std::size_t k);

// Streaming top-k over the l1 ball without materializing the box.
std::vector<std::pair<Site, double>> order_statistics(const FieldParams& fp,
                                                      Coord r, std::size_t k);

using SiteSet = std::set<Site>;

std::pair<SiteSet, SiteSet> top_site_sets(const PotentialField& field, Coord r,
                                          double rho, double sigma);
std::pair<SiteSet, SiteSet> top_site_sets(const FieldParams& fp, Coord r,
                                          double rho, double sigma);

bool is_totally_disconnected(const SiteSet& sites);

// Nearest-neighbour lattice path y_0..y_n.
struct GeoPath {
  std::vector<Site> sites;
};

bool is_valid_path(const GeoPath& path);

struct PathCounters {
  long long n = 0;       // step count
  Coord p = 0;           // max displacement from y_0
  double q = 0;          // max potential along the path
  Site z;                // earliest site attaining q
  long long n_plus = 0;  // visits inside A (counting multiplicity)
  long long n_minus = 0;
};

PathCounters path_counters(const GeoPath& path, const FieldParams& fp,
                           const SiteSet& A);

// Lemma-style visit bound for totally disconnected A; property tests
// assert this always returns true.
bool check_count_bound(const GeoPath& path, const FieldParams& fp, const SiteSet& A);

// Number of lattice sites with |z|_1 == ell, as a double (ell can be huge).
double l1_shell_count(int d, Coord ell);

// Number of lattice sites with |z|_1 <= r.
double l1_ball_count(int d, Coord r);

// Visit every site of the l1 ball of radius r (generic dimension).
template <typename Fn>
void for_each_ball_site(int d, Coord r, Fn&& fn) {
  std::vector<Coord> z(static_cast<std::size_t>(d), 0);
  struct Rec {
    int d;
    std::vector<Coord>& z;
    Fn& fn;
    void walk(int i, Coord budget) {
      if (i == d - 1) {
        for (Coord c = -budget; c <= budget; ++c) {
          z[static_cast<std::size_t>(i)] = c;
          fn(z.data());
        }
        return;
      }
      for (Coord c = -budget; c <= budget; ++c) {
        z[static_cast<std::size_t>(i)] = c;
        walk(i + 1, budget - (c < 0 ? -c : c));
      }
    }
  } rec{d, z, fn};
  rec.walk(0, r);
}

}  // namespace pam

#endif
