// Copyright 2026 The pam Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PAM_SOLVER_HPP
#define PAM_SOLVER_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "pam/field.hpp"

namespace pam {

// Solution of the normalized Cauchy problem on the Dirichlet l1 ball.
// profiles[k] holds v(times[k], .) = u/U over `sites`; the raw mass never
// appears (it overflows doubles), only log_total_mass does.
struct SolveResult {
  Coord box_radius = 0;
  std::vector<double> times;
  std::vector<double> log_total_mass;
  std::vector<Site> sites;
  std::vector<std::vector<double>> profiles;
  std::vector<Site> argmax_site;

  double mass_at(std::size_t time_index, const Site& z) const;
};

SolveResult solve_pde(const PotentialField& field, Coord box_radius,
                      const std::vector<double>& t_grid, double rel_tol);
SolveResult solve_pde(const FieldParams& fp, Coord box_radius,
                      const std::vector<double>& t_grid, double rel_tol);

// Same problem on an l1 ball centred at `center` instead of the origin;
// the ball must still contain the origin, where the initial mass sits.
// Off-centre balls keep the box small when the mass travels far one way.
SolveResult solve_pde(const FieldParams& fp, const Site& center, Coord box_radius,
                      const std::vector<double>& t_grid, double rel_tol);

// Modal approximation of the localisation share for d = 1. The solution is
// expanded over the principal eigenmode of every potential valley; mode
// overlaps with the initial condition are carried in log space by a
// transfer recurrence. This stays viable where the direct PDE underflows:
// during relocalisation the normalized mass tunnelling towards a distant
// peak passes through magnitudes far below the smallest positive double,
// so the linear-space solver can never seed the new peak.
struct ModalShare {
  double time = 0;
  double frac = 0;        // u(t, target)/U(t)
  Site argmax;            // peak site of the dominant mode
  double lambda_top = 0;  // growth rate of the dominant mode
  double log_total_mass = 0;
};

// targets[k] is the site whose mass share is reported at t_grid[k]; all
// targets must lie in [-box_radius, box_radius].
std::vector<ModalShare> modal_mass_share(const FieldParams& fp, Coord box_radius,
                                         const std::vector<double>& t_grid,
                                         const std::vector<Site>& targets);

// Feynman-Kac estimates: mean of exp{int_0^t xi(X_s) ds} over jump-rate-2d
// walks from the origin, per target site and in total.
struct FkResult {
  double total_mass = 0;
  double total_mass_err = 0;
  std::vector<double> mass;      // aligned with the requested targets
  std::vector<double> mass_err;
  std::size_t n_paths = 0;
};

// box_radius = nullopt walks on the unrestricted lattice (values generated
// on the fly); otherwise paths are killed on leaving the l1 ball.
FkResult feynman_kac_mc(const FieldParams& fp, std::optional<Coord> box_radius,
                        double t, const std::vector<Site>& targets,
                        std::size_t n_paths, std::uint64_t seed,
                        double budget = 30.0);
FkResult feynman_kac_mc(const PotentialField& field, std::optional<Coord> box_radius,
                        double t, const std::vector<Site>& targets,
                        std::size_t n_paths, std::uint64_t seed,
                        double budget = 30.0);

// Mass carried by paths that reach z1 by time t without ever leaving the
// l1 ball (class I) versus everything else (class II).
struct PathSplit {
  double u1 = 0, u1_err = 0;
  double u2 = 0, u2_err = 0;
  std::size_t n_paths = 0;
};

PathSplit path_mass_split(const FieldParams& fp, double t, const Site& z1,
                          Coord ball_radius, std::size_t n_paths,
                          std::uint64_t seed, double budget = 30.0);

struct SpectralResult {
  double lambda1 = 0;
  double lambda2 = 0;
  double gap = 0;            // lambda1 - lambda2
  double potential_gap = 0;  // top in-box xi minus runner-up
  double residual = 0;
  std::vector<Site> sites;
  std::vector<double> eigvec;  // normalized to 1 at the xi-argmax
};

SpectralResult principal_eigen(const PotentialField& field, Coord box_radius,
                               double tol);
SpectralResult principal_eigen(const FieldParams& fp, Coord box_radius, double tol);

// xi(z1) minus the best other site of the l1 ball.
double potential_gap(const FieldParams& fp, const Site& z1, Coord ball_radius);

// Soft comparison of log U(t) against t Psi_t(z1) - 2dt; the remainder
// scale is r_t, so `ratio` is the quantity expected to stay bounded.
struct LowerBoundReport {
  double excess = 0;  // log U(t) - (t Psi_t(z1) - 2dt)
  double ratio = 0;   // excess / r_t
  double t = 0;
};

struct PsiMaxima;  // scales.hpp

LowerBoundReport lower_bound_diagnostic(const FieldParams& fp, double t,
                                        const SolveResult& solve,
                                        const PsiMaxima& maxima);

}  // namespace pam

#endif
