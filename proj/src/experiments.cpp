// Copyright 2026 The pam Authors
// SPDX-License-Identifier: Apache-2.0

#include "pam/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "pam/poisson_sim.hpp"
#include "pam/scales.hpp"
#include "pam/solver.hpp"

namespace pam {

namespace {

using ordered_json = nlohmann::ordered_json;
constexpr double kInf = std::numeric_limits<double>::infinity();

// --- config ---------------------------------------------------------------

void require_keys(const nlohmann::json& j, const std::vector<std::string>& allowed,
                  const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      throw ContractError("config: unknown key '" + it.key() + "' in " + where);
  }
}

double num(const nlohmann::json& j, const std::string& key) {
  if (!j.contains(key)) throw ContractError("config: missing key '" + key + "'");
  if (!j.at(key).is_number()) throw ContractError("config: '" + key + "' must be a number");
  return j.at(key).get<double>();
}

ExperimentKind parse_kind(const std::string& s) {
  if (s == "localisation") return ExperimentKind::localisation;
  if (s == "scaling") return ExperimentKind::scaling;
  if (s == "pointprocess") return ExperimentKind::pointprocess;
  if (s == "ageing") return ExperimentKind::ageing;
  throw ContractError("config: unknown experiment kind '" + s + "'");
}

const char* kind_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::localisation: return "localisation";
    case ExperimentKind::scaling: return "scaling";
    case ExperimentKind::pointprocess: return "pointprocess";
    case ExperimentKind::ageing: return "ageing";
  }
  return "?";
}

BoxSpec parse_box(const nlohmann::json& j, int d) {
  require_keys(j, {"x", "y"}, "boxes[]");
  BoxSpec b;
  const auto& xs = j.at("x");
  if (!xs.is_array() || static_cast<int>(xs.size()) != d)
    throw ContractError("config: box needs one x-interval per dimension");
  for (const auto& iv : xs) {
    if (!iv.is_array() || iv.size() != 2)
      throw ContractError("config: box x-interval must be [lo, hi]");
    b.x_lo.push_back(iv[0].get<double>());
    b.x_hi.push_back(iv[1].get<double>());
    if (!(b.x_lo.back() < b.x_hi.back()))
      throw ContractError("config: box x-interval is empty");
  }
  const auto& ys = j.at("y");
  if (!ys.is_array() || ys.size() != 2)
    throw ContractError("config: box y must be [lo, hi] ('inf' allowed for hi)");
  b.y_lo = ys[0].get<double>();
  b.y_hi = ys[1].is_string() && ys[1].get<std::string>() == "inf"
               ? kInf
               : ys[1].get<double>();
  if (!(b.y_lo < b.y_hi)) throw ContractError("config: box y-interval is empty");
  return b;
}

}  // namespace

double nu_box(const BoxSpec& box, const LimitParams& p) {
  double rate = p.gamma * p.theta;
  auto prim = [&](double s) {
    double v = (1.0 - std::exp(-rate * std::fabs(s))) / rate;
    return s < 0 ? -v : v;
  };
  double xpart = 1.0;
  for (std::size_t i = 0; i < box.x_lo.size(); ++i)
    xpart *= prim(box.x_hi[i]) - prim(box.x_lo[i]);
  double ypart = std::exp(-p.gamma * box.y_lo) -
                 (std::isinf(box.y_hi) ? 0.0 : std::exp(-p.gamma * box.y_hi));
  return xpart * ypart;
}

ExperimentConfig parse_config(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const std::exception& e) {
    throw ContractError(std::string("config: invalid JSON: ") + e.what());
  }
  require_keys(j,
               {"schema_version", "kind", "gamma", "d", "t", "replicas", "seed",
                "box_policy", "output_dir", "window", "boxes", "w_max", "w_grid",
                "rel_tol"},
               "top level");
  if (num(j, "schema_version") != 1)
    throw ContractError("config: unsupported schema_version");

  ExperimentConfig c;
  if (!j.contains("kind") || !j.at("kind").is_string())
    throw ContractError("config: 'kind' must be a string");
  c.kind = parse_kind(j.at("kind").get<std::string>());
  c.gamma = num(j, "gamma");
  if (!(c.gamma > 0)) throw ContractError("config: gamma must be positive");
  c.d = static_cast<int>(num(j, "d"));
  if (c.d < 1) throw ContractError("config: d must be >= 1");

  if (!j.contains("t")) throw ContractError("config: missing key 't'");
  if (j.at("t").is_array())
    for (const auto& v : j.at("t")) c.t_values.push_back(v.get<double>());
  else
    c.t_values.push_back(j.at("t").get<double>());
  if (c.t_values.empty()) throw ContractError("config: need at least one t");
  for (double t : c.t_values)
    if (!(t >= kMinTime)) throw ContractError("config: every t must exceed e^e");

  double reps = num(j, "replicas");
  if (!(reps >= 1)) throw ContractError("config: replicas must be >= 1");
  c.replicas = static_cast<std::size_t>(reps);
  c.base_seed = static_cast<std::uint64_t>(num(j, "seed"));

  if (j.contains("box_policy")) {
    require_keys(j.at("box_policy"), {"epsilon", "growth"}, "box_policy");
    if (j.at("box_policy").contains("epsilon"))
      c.epsilon = num(j.at("box_policy"), "epsilon");
    if (j.at("box_policy").contains("growth"))
      c.growth = num(j.at("box_policy"), "growth");
    if (!(c.epsilon > 0 && c.epsilon < 1) || !(c.growth > 1))
      throw ContractError("config: bad box_policy");
  }
  if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
  if (j.contains("window")) {
    require_keys(j.at("window"), {"tau", "alpha"}, "window");
    c.tau = num(j.at("window"), "tau");
    c.alpha = num(j.at("window"), "alpha");
  }
  if (j.contains("w_max")) c.w_max = num(j, "w_max");
  if (j.contains("w_grid"))
    for (const auto& v : j.at("w_grid")) c.w_grid.push_back(v.get<double>());
  if (j.contains("rel_tol")) c.rel_tol = num(j, "rel_tol");
  if (!(c.rel_tol > 0)) throw ContractError("config: rel_tol must be positive");

  if (j.contains("boxes"))
    for (const auto& bj : j.at("boxes")) c.boxes.push_back(parse_box(bj, c.d));

  if (c.kind == ExperimentKind::pointprocess) {
    if (c.boxes.empty()) throw ContractError("config: pointprocess needs boxes");
    LimitParams p = make_limit_params(c.gamma, c.d);
    double theta = p.theta;
    if (!(c.alpha > -theta && c.alpha < theta))
      throw ContractError("config: window alpha must lie in (-theta, theta)");
    for (const auto& b : c.boxes) {
      if (nu_box(b, p) < 1e-3)
        throw ContractError("config: box with nu < 1e-3 is untestable");
      // the box must sit inside the window y >= alpha |x| + tau
      double l1_ext = 0.0;
      for (std::size_t i = 0; i < b.x_lo.size(); ++i) {
        double lo = b.x_lo[i], hi = b.x_hi[i];
        double mx = std::max(std::fabs(lo), std::fabs(hi));
        double mn = (lo <= 0 && hi >= 0) ? 0.0 : std::min(std::fabs(lo), std::fabs(hi));
        l1_ext += c.alpha >= 0 ? mx : mn;
      }
      if (b.y_lo < c.alpha * l1_ext + c.tau)
        throw ContractError("config: box leaks below the sampling window");
    }
  }
  if (c.kind == ExperimentKind::ageing) {
    if (!(c.w_max > 0)) throw ContractError("config: w_max must be positive");
    if (c.w_grid.empty()) c.w_grid = {0.1, 1.0};
    for (double w : c.w_grid)
      if (!(w > 0 && w <= c.w_max))
        throw ContractError("config: w_grid values must lie in (0, w_max]");
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ContractError("config: cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_config(text);
}

// --- runner infrastructure ------------------------------------------------

unsigned worker_count(std::size_t replicas) {
  unsigned n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* env = std::getenv("PAM_WORKERS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) n = static_cast<unsigned>(v);
  }
  return static_cast<unsigned>(
      std::max<std::size_t>(1, std::min<std::size_t>(n, replicas)));
}

namespace {

template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  unsigned workers = worker_count(n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (!failed.load(std::memory_order_relaxed)) {
        std::size_t i = next.fetch_add(1);
        if (i >= n) break;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
          failed.store(true);
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

ordered_json config_echo(const ExperimentConfig& c) {
  ordered_json j;
  j["schema_version"] = 1;
  j["kind"] = kind_name(c.kind);
  j["gamma"] = c.gamma;
  j["d"] = c.d;
  j["t"] = c.t_values;
  j["replicas"] = c.replicas;
  j["seed"] = c.base_seed;
  j["box_policy"] = {{"epsilon", c.epsilon}, {"growth", c.growth}};
  if (c.kind == ExperimentKind::pointprocess) {
    j["window"] = {{"tau", c.tau}, {"alpha", c.alpha}};
    ordered_json boxes = ordered_json::array();
    for (const auto& b : c.boxes) {
      ordered_json bj;
      ordered_json xs = ordered_json::array();
      for (std::size_t i = 0; i < b.x_lo.size(); ++i)
        xs.push_back({b.x_lo[i], b.x_hi[i]});
      bj["x"] = xs;
      if (std::isinf(b.y_hi))
        bj["y"] = {b.y_lo, "inf"};
      else
        bj["y"] = {b.y_lo, b.y_hi};
      boxes.push_back(bj);
    }
    j["boxes"] = boxes;
  }
  if (c.kind == ExperimentKind::ageing) {
    j["w_max"] = c.w_max;
    j["w_grid"] = c.w_grid;
  }
  if (c.kind == ExperimentKind::localisation) j["rel_tol"] = c.rel_tol;
  return j;
}

ordered_json report_json(const StatReport& r) {
  ordered_json j;
  j["name"] = r.name;
  j["statistic"] = r.statistic;
  if (r.p_value >= 0) j["p_value"] = r.p_value;
  if (r.ci_hi > r.ci_lo) j["ci"] = {r.ci_lo, r.ci_hi};
  j["n"] = r.sample_size;
  j["pass"] = r.pass;
  return j;
}

ExperimentResult finalize(const ExperimentConfig& c,
                          const std::vector<ordered_json>& rows,
                          const std::vector<StatReport>& reports) {
  namespace fs = std::filesystem;
  fs::create_directories(c.output_dir);
  ExperimentResult res;
  res.reports = reports;
  res.rows_path = (fs::path(c.output_dir) / "rows.jsonl").string();
  res.summary_path = (fs::path(c.output_dir) / "summary.json").string();

  std::ofstream rf(res.rows_path, std::ios::trunc);
  if (!rf) throw ResourceError("cannot write " + res.rows_path);
  for (const auto& row : rows) rf << row.dump() << "\n";
  rf.close();

  ordered_json summary;
  summary["config"] = config_echo(c);
  ordered_json rj = ordered_json::array();
  for (const auto& r : reports) {
    rj.push_back(report_json(r));
    res.all_pass = res.all_pass && r.pass;
  }
  summary["reports"] = rj;
  summary["all_pass"] = res.all_pass;
  std::ofstream sf(res.summary_path, std::ios::trunc);
  if (!sf) throw ResourceError("cannot write " + res.summary_path);
  sf << summary.dump(2) << "\n";
  return res;
}

ordered_json base_row(const ExperimentConfig& c, std::size_t replica) {
  ordered_json row;
  row["base_seed"] = c.base_seed;
  row["replica"] = replica;
  row["derived_seed"] = split_seed(c.base_seed, replica);
  return row;
}

double laplace_cdf(double x, double scale) {
  return x < 0 ? 0.5 * std::exp(x / scale) : 1.0 - 0.5 * std::exp(-x / scale);
}

}  // namespace

// --- experiments ----------------------------------------------------------

ExperimentResult run_localisation(const ExperimentConfig& c) {
  std::vector<ordered_json> rows;
  std::vector<StatReport> reports;
  BoxPolicy pol{c.epsilon, c.growth, 14};
  std::vector<double> mean_frac, agree_freq;

  for (double t : c.t_values) {
    std::vector<ordered_json> trows(c.replicas);
    std::vector<double> fracs(c.replicas);
    std::vector<char> agrees(c.replicas);
    std::atomic<int> trunc_checked{0};
    std::vector<double> trunc_shift(1, 0.0);

    parallel_for(c.replicas, [&](std::size_t r) {
      FieldParams fp{c.d, c.gamma, split_seed(c.base_seed, r)};
      PsiMaxima m;
      try {
        m = locate_maxima_certified(fp, t, 0.0, pol);
      } catch (const CertificationError& e) {
        throw CertificationError("replica " + std::to_string(r) + ": " + e.what());
      }
      Coord rs;
      double frac, log_u;
      bool agree;
      if (c.d == 1) {
        // The mass share at z1 passes through magnitudes no double can hold
        // once z1 sits far out, so the log-domain modal expansion carries
        // the d = 1 ensembles; it is cross-validated against the PDE in the
        // solver suite.
        rs = std::max<Coord>(30, 2 * l1_norm(m.z1) + 200);
        auto sh = modal_mass_share(fp, rs, {t}, {m.z1});
        frac = sh[0].frac;
        agree = sh[0].argmax == m.z1;
        log_u = sh[0].log_total_mass;
        if (r == 0) {
          // truncation control: doubling the radius must leave the log
          // mass essentially unchanged
          auto big = modal_mass_share(fp, 2 * rs, {t}, {m.z1});
          trunc_shift[0] = std::fabs(big[0].log_total_mass - log_u) /
                           std::max(1.0, std::fabs(log_u));
          trunc_checked = 1;
        }
      } else {
        rs = std::max<Coord>(
            30,
            static_cast<Coord>(std::ceil(1.25 * static_cast<double>(l1_norm(m.z1)))) + 25);
        SolveResult sol = solve_pde(fp, rs, {t}, c.rel_tol);
        frac = sol.mass_at(0, m.z1);
        agree = sol.argmax_site[0] == m.z1;
        log_u = sol.log_total_mass[0];
        if (r == 0) {
          SolveResult big = solve_pde(fp, 2 * rs, {t}, c.rel_tol);
          trunc_shift[0] = std::fabs(big.log_total_mass[0] - log_u) /
                           std::max(1.0, std::fabs(log_u));
          trunc_checked = 1;
        }
      }
      fracs[r] = frac;
      agrees[r] = agree ? 1 : 0;
      ordered_json row = base_row(c, r);
      row["t"] = t;
      row["box_radius"] = m.box_radius;
      row["solve_radius"] = rs;
      row["z1"] = m.z1;
      row["log_U"] = log_u;
      row["mass_fraction"] = frac;
      row["argmax_agrees"] = agree;
      trows[r] = std::move(row);
    });
    for (auto& row : trows) rows.push_back(std::move(row));

    MeanStderr ms = mean_stderr(fracs);
    double freq = 0;
    for (char a : agrees) freq += a;
    freq /= static_cast<double>(c.replicas);
    mean_frac.push_back(ms.mean);
    agree_freq.push_back(freq);

    StatReport rep;
    rep.name = "mean_mass_fraction_t=" + std::to_string(t);
    rep.statistic = ms.mean;
    rep.ci_lo = ms.mean - 3 * ms.stderr_;
    rep.ci_hi = ms.mean + 3 * ms.stderr_;
    rep.sample_size = c.replicas;
    rep.pass = true;
    reports.push_back(rep);

    StatReport ar;
    ar.name = "argmax_agreement_t=" + std::to_string(t);
    ar.statistic = freq;
    ar.sample_size = c.replicas;
    ar.pass = true;
    reports.push_back(ar);

    if (trunc_checked.load()) {
      StatReport tr;
      tr.name = "dirichlet_truncation_t=" + std::to_string(t);
      tr.statistic = trunc_shift[0];
      tr.sample_size = 1;
      tr.pass = trunc_shift[0] < std::max(100.0 * c.rel_tol, 1e-8);
      reports.push_back(tr);
    }
  }

  if (c.t_values.size() >= 2) {
    bool inc = true, nondec = true;
    for (std::size_t i = 1; i < mean_frac.size(); ++i) {
      inc = inc && mean_frac[i] > mean_frac[i - 1];
      nondec = nondec && agree_freq[i] >= agree_freq[i - 1];
    }
    StatReport tr;
    tr.name = "mass_fraction_increasing_in_t";
    tr.statistic = mean_frac.back() - mean_frac.front();
    tr.sample_size = c.replicas * c.t_values.size();
    tr.pass = inc;
    reports.push_back(tr);
    StatReport ag;
    ag.name = "argmax_agreement_nondecreasing_in_t";
    ag.statistic = agree_freq.back() - agree_freq.front();
    ag.sample_size = c.replicas * c.t_values.size();
    ag.pass = nondec;
    reports.push_back(ag);
  }
  return finalize(c, rows, reports);
}

ExperimentResult run_scaling(const ExperimentConfig& c) {
  std::vector<ordered_json> rows;
  std::vector<StatReport> reports;
  BoxPolicy pol{c.epsilon, c.growth, 14};
  LimitParams lp = make_limit_params(c.gamma, c.d);
  const double xscale = 1.0 / (lp.gamma * lp.theta);
  std::vector<double> ks_by_t;

  for (double t : c.t_values) {
    ScaleSet s = compute_scales(c.gamma, c.d, t);
    std::vector<ordered_json> trows(c.replicas);
    std::vector<std::vector<double>> coords(c.replicas);

    parallel_for(c.replicas, [&](std::size_t r) {
      FieldParams fp{c.d, c.gamma, split_seed(c.base_seed, r)};
      PsiMaxima m = locate_maxima_certified(fp, t, 0.0, pol);
      std::vector<double> x(static_cast<std::size_t>(c.d));
      for (int i = 0; i < c.d; ++i)
        x[static_cast<std::size_t>(i)] =
            static_cast<double>(m.z1[static_cast<std::size_t>(i)]) / s.r_t;
      coords[r] = x;
      ordered_json row = base_row(c, r);
      row["t"] = t;
      row["box_radius"] = m.box_radius;
      row["x"] = x;
      trows[r] = std::move(row);
    });
    for (auto& row : trows) rows.push_back(std::move(row));

    std::vector<double> pooled;
    double sign_sum = 0;
    for (const auto& x : coords)
      for (double v : x) {
        pooled.push_back(v);
        sign_sum += v > 0 ? 1 : (v < 0 ? -1 : 0);
      }
    double ks = ks_statistic(pooled, [&](double v) { return laplace_cdf(v, xscale); });
    ks_by_t.push_back(ks);

    StatReport kr;
    kr.name = "ks_distance_t=" + std::to_string(t);
    kr.statistic = ks;
    kr.sample_size = pooled.size();
    kr.pass = true;  // trend verdict comes later
    reports.push_back(kr);

    double n = static_cast<double>(pooled.size());
    StatReport sr;
    sr.name = "sign_symmetry_t=" + std::to_string(t);
    sr.statistic = sign_sum / n;
    sr.sample_size = pooled.size();
    sr.pass = std::fabs(sign_sum) <= 3.0 * std::sqrt(n);
    reports.push_back(sr);
  }

  if (c.t_values.size() >= 2) {
    bool nonincreasing = true;
    for (std::size_t i = 1; i < ks_by_t.size(); ++i)
      nonincreasing = nonincreasing && ks_by_t[i] <= ks_by_t[i - 1];
    StatReport tr;
    tr.name = "ks_distance_nonincreasing_in_t";
    tr.statistic = ks_by_t.front() - ks_by_t.back();
    tr.sample_size = c.replicas * c.t_values.size();
    tr.pass = nonincreasing;
    reports.push_back(tr);
  }
  return finalize(c, rows, reports);
}

ExperimentResult run_pointprocess(const ExperimentConfig& c) {
  std::vector<ordered_json> rows;
  std::vector<StatReport> reports;
  BoxPolicy pol{c.epsilon, c.growth, 14};
  LimitParams lp = make_limit_params(c.gamma, c.d);

  for (double t : c.t_values) {
    // the window-coverage radius is field-independent; compute it once
    FieldParams probe{c.d, c.gamma, 0};
    Coord R = certified_window_radius(probe, t, c.tau, c.alpha, pol);
    std::vector<ordered_json> trows(c.replicas);
    std::vector<std::vector<long long>> counts(
        c.boxes.size(), std::vector<long long>(c.replicas, 0));

    parallel_for(c.replicas, [&](std::size_t r) {
      FieldParams fp{c.d, c.gamma, split_seed(c.base_seed, r)};
      std::vector<RescaledPoint> pts = rescale_points(fp, R, t, c.tau, c.alpha);
      ordered_json row = base_row(c, r);
      row["t"] = t;
      ordered_json cj = ordered_json::array();
      for (std::size_t b = 0; b < c.boxes.size(); ++b) {
        const BoxSpec& box = c.boxes[b];
        long long n = 0;
        for (const auto& pt : pts) {
          bool in = pt.y > box.y_lo && pt.y <= box.y_hi;
          for (std::size_t i = 0; in && i < box.x_lo.size(); ++i)
            in = pt.x[i] >= box.x_lo[i] && pt.x[i] <= box.x_hi[i];
          if (in) ++n;
        }
        counts[b][r] = n;
        cj.push_back(n);
      }
      row["counts"] = cj;
      trows[r] = std::move(row);
    });
    for (auto& row : trows) rows.push_back(std::move(row));

    double agg_stat = 0, agg_dof = 0;
    for (std::size_t b = 0; b < c.boxes.size(); ++b) {
      double mean = nu_box(c.boxes[b], lp);
      Chi2Result chi = poisson_chi2(counts[b], mean);
      agg_stat += chi.stat;
      agg_dof += chi.dof;
      StatReport rep;
      rep.name = "poisson_chi2_box" + std::to_string(b) + "_t=" + std::to_string(t);
      rep.statistic = chi.stat;
      rep.p_value = chi.p_value;
      rep.sample_size = c.replicas;
      rep.pass = chi.p_value > 1e-3;
      reports.push_back(rep);
    }
    StatReport agg;
    agg.name = "poisson_chi2_aggregate_t=" + std::to_string(t);
    agg.statistic = agg_stat;
    agg.p_value = chi2_pvalue(agg_stat, agg_dof);
    agg.sample_size = c.replicas * c.boxes.size();
    agg.pass = agg.p_value > 1e-3;
    reports.push_back(agg);
  }
  return finalize(c, rows, reports);
}

ExperimentResult run_ageing(const ExperimentConfig& c) {
  std::vector<ordered_json> rows;
  std::vector<StatReport> reports;
  BoxPolicy pol{c.epsilon, c.growth, 14};
  LimitParams lp = make_limit_params(c.gamma, c.d);

  for (double t : c.t_values) {
    double horizon = c.w_max * t;
    std::vector<ordered_json> trows(c.replicas);
    std::vector<double> ratios(c.replicas);  // +inf encodes censored

    parallel_for(c.replicas, [&](std::size_t r) {
      FieldParams fp{c.d, c.gamma, split_seed(c.base_seed, r)};
      // one radius certified for the far end covers the near end too
      PsiMaxima far = locate_maxima_certified(fp, t + horizon, 0.0, pol);
      double T = ageing_time(fp, far.box_radius, t, horizon, c.epsilon);
      double ratio = T / t;
      ratios[r] = ratio;
      ordered_json row = base_row(c, r);
      row["t"] = t;
      row["box_radius"] = far.box_radius;
      row["censored"] = std::isinf(ratio);
      if (std::isinf(ratio))
        row["ratio"] = nullptr;
      else
        row["ratio"] = ratio;
      trows[r] = std::move(row);
    });
    for (auto& row : trows) rows.push_back(std::move(row));

    // Censoring is expected: the survival function has a polynomial tail,
    // so the pass criterion is consistency with 1 - F(w_max), not a flat cap.
    long long censored = 0;
    for (double v : ratios)
      if (std::isinf(v)) ++censored;
    BinomialCI cci = binomial_ci(censored, static_cast<long long>(c.replicas), 3.0);
    double cref = 1.0 - ageing_cdf(c.w_max, lp, 1e-8);
    StatReport cs;
    cs.name = "censoring_frequency_t=" + std::to_string(t);
    cs.statistic = cci.estimate;
    cs.ci_lo = cci.lo;
    cs.ci_hi = cci.hi;
    cs.sample_size = c.replicas;
    cs.pass = cref > cci.lo - 0.15 && cref < cci.hi + 0.15;
    reports.push_back(cs);

    for (double w : c.w_grid) {
      long long survive = 0;
      for (double v : ratios)
        if (v > w) ++survive;
      BinomialCI ci = binomial_ci(survive, static_cast<long long>(c.replicas), 3.0);
      double ref = 1.0 - ageing_cdf(w, lp, 1e-8);
      StatReport rep;
      rep.name = "survival_w=" + std::to_string(w) + "_t=" + std::to_string(t);
      rep.statistic = ci.estimate;
      rep.ci_lo = ci.lo;
      rep.ci_hi = ci.hi;
      rep.sample_size = c.replicas;
      // log log t convergence: allow a wide finite-t envelope around the
      // limit value on top of the sampling interval
      rep.pass = ref > ci.lo - 0.15 && ref < ci.hi + 0.15;
      reports.push_back(rep);
    }
  }
  return finalize(c, rows, reports);
}

ExperimentResult run_experiment(const ExperimentConfig& c) {
  switch (c.kind) {
    case ExperimentKind::localisation: return run_localisation(c);
    case ExperimentKind::scaling: return run_scaling(c);
    case ExperimentKind::pointprocess: return run_pointprocess(c);
    case ExperimentKind::ageing: return run_ageing(c);
  }
  throw ContractError("run_experiment: bad kind");
}

}  // namespace pam
