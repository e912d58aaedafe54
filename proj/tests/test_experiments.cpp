// Copyright 2026 The pam Authors
// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "pam/errors.hpp"
#include "pam/experiments.hpp"
#include "pam/rng.hpp"

using namespace pam;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config parsing: defaults and round trip") {
  auto c = parse_config(R"({"schema_version":1,"kind":"localisation","gamma":1.0,
                            "d":1,"t":[16.0,20.0],"replicas":3,"seed":7})");
  CHECK(c.kind == ExperimentKind::localisation);
  CHECK(c.t_values == std::vector<double>{16.0, 20.0});
  CHECK(c.replicas == 3);
  CHECK(c.base_seed == 7);
  CHECK(c.epsilon == doctest::Approx(1e-3));
  CHECK(c.growth == doctest::Approx(2.0));
  CHECK(c.rel_tol == doctest::Approx(1e-6));

  auto a = parse_config(R"({"schema_version":1,"kind":"ageing","gamma":1.0,
                            "d":1,"t":16.0,"replicas":2,"seed":1})");
  CHECK(a.w_max == doctest::Approx(20.0));
  CHECK(a.w_grid == std::vector<double>{0.1, 1.0});

  auto pp = parse_config(R"({"schema_version":1,"kind":"pointprocess","gamma":1.0,
                             "d":1,"t":30.0,"replicas":2,"seed":1,
                             "window":{"tau":-2.0,"alpha":0.5},
                             "boxes":[{"x":[[-1.0,1.0]],"y":[0.0,"inf"]}]})");
  CHECK(pp.tau == doctest::Approx(-2.0));
  CHECK(pp.boxes.size() == 1);
  CHECK(std::isinf(pp.boxes[0].y_hi));
}

TEST_CASE("config parsing: strict rejection") {
  auto bad = [](const std::string& body) {
    CHECK_THROWS_AS(parse_config(body), ContractError);
  };
  bad("not json at all");
  // unknown keys, top level and nested
  bad(R"({"schema_version":1,"kind":"scaling","gamma":1.0,"d":1,"t":16.0,
          "replicas":1,"seed":1,"surprise":2})");
  bad(R"({"schema_version":1,"kind":"scaling","gamma":1.0,"d":1,"t":16.0,
          "replicas":1,"seed":1,"box_policy":{"epsilon":0.1,"color":"red"}})");
  // schema version
  bad(R"({"schema_version":2,"kind":"scaling","gamma":1.0,"d":1,"t":16.0,
          "replicas":1,"seed":1})");
  // t at or below the minimum
  bad(R"({"schema_version":1,"kind":"scaling","gamma":1.0,"d":1,"t":15.0,
          "replicas":1,"seed":1})");
  // replicas / gamma / d
  bad(R"({"schema_version":1,"kind":"scaling","gamma":1.0,"d":1,"t":16.0,
          "replicas":0,"seed":1})");
  bad(R"({"schema_version":1,"kind":"scaling","gamma":-1.0,"d":1,"t":16.0,
          "replicas":1,"seed":1})");
  bad(R"({"schema_version":1,"kind":"scaling","gamma":1.0,"d":0,"t":16.0,
          "replicas":1,"seed":1})");
  // pointprocess-specific constraints
  bad(R"({"schema_version":1,"kind":"pointprocess","gamma":1.0,"d":1,"t":30.0,
          "replicas":1,"seed":1})");  // boxes required
  bad(R"({"schema_version":1,"kind":"pointprocess","gamma":1.0,"d":1,"t":30.0,
          "replicas":1,"seed":1,"window":{"tau":-2.0,"alpha":1.5},
          "boxes":[{"x":[[-1.0,1.0]],"y":[0.0,"inf"]}]})");  // alpha >= theta
  bad(R"({"schema_version":1,"kind":"pointprocess","gamma":1.0,"d":1,"t":30.0,
          "replicas":1,"seed":1,"window":{"tau":-2.0,"alpha":0.5},
          "boxes":[{"x":[[-1.0,1.0]],"y":[-3.0,"inf"]}]})");  // below window
  bad(R"({"schema_version":1,"kind":"pointprocess","gamma":1.0,"d":1,"t":30.0,
          "replicas":1,"seed":1,"window":{"tau":-2.0,"alpha":0.5},
          "boxes":[{"x":[[-1.0,1.0]],"y":[20.0,"inf"]}]})");  // nu too small
  bad(R"({"schema_version":1,"kind":"pointprocess","gamma":1.0,"d":1,"t":30.0,
          "replicas":1,"seed":1,"boxes":[{"x":[[1.0,-1.0]],"y":[0.0,"inf"]}]})");
  // ageing w grid outside (0, w_max]
  bad(R"({"schema_version":1,"kind":"ageing","gamma":1.0,"d":1,"t":16.0,
          "replicas":1,"seed":1,"w_max":2.0,"w_grid":[3.0]})");
}

TEST_CASE("box measure matches one-dimensional quadratures") {
  for (auto [gamma, d] : std::vector<std::pair<double, int>>{{1.0, 1}, {0.5, 2}}) {
    auto p = make_limit_params(gamma, d);
    BoxSpec box;
    for (int i = 0; i < d; ++i) {
      box.x_lo.push_back(i == 0 ? -0.7 : 0.2);
      box.x_hi.push_back(i == 0 ? 1.3 : 2.0);
    }
    box.y_lo = -0.5;
    box.y_hi = 1.5;
    double rate = gamma * p.theta;
    double xpart = 1.0;
    for (int i = 0; i < d; ++i)
      xpart *= adaptive_simpson(
          [&](double x) { return std::exp(-rate * std::fabs(x)); }, box.x_lo[i],
          box.x_hi[i], 1e-12);
    double ypart = adaptive_simpson(
        [&](double y) { return gamma * std::exp(-gamma * y); }, box.y_lo, box.y_hi,
        1e-12);
    CHECK(nu_box(box, p) == doctest::Approx(xpart * ypart).epsilon(1e-9));
    // infinite top edge
    box.y_hi = std::numeric_limits<double>::infinity();
    CHECK(nu_box(box, p) ==
          doctest::Approx(xpart * std::exp(-gamma * box.y_lo)).epsilon(1e-9));
  }
}

TEST_CASE("worker count respects the environment override") {
  setenv("PAM_WORKERS", "3", 1);
  CHECK(worker_count(10) == 3);
  CHECK(worker_count(2) == 2);
  CHECK(worker_count(1) == 1);
  unsetenv("PAM_WORKERS");
  CHECK(worker_count(1) == 1);
}

TEST_CASE("localisation run produces certified, self-consistent artifacts") {
  ExperimentConfig c = parse_config(
      R"({"schema_version":1,"kind":"localisation","gamma":1.0,"d":1,
          "t":20.0,"replicas":4,"seed":11,"output_dir":"exp_loc"})");
  auto res = run_experiment(c);
  CHECK(res.all_pass);
  auto summary = nlohmann::json::parse(slurp(res.summary_path));
  CHECK(summary.at("all_pass").get<bool>());
  CHECK(summary.at("config").at("kind") == "localisation");
  // one row per replica, all with the expected fields
  std::ifstream rows(res.rows_path);
  std::string line;
  int n_rows = 0;
  while (std::getline(rows, line)) {
    auto row = nlohmann::json::parse(line);
    CHECK(row.at("t").get<double>() == 20.0);
    CHECK(row.at("derived_seed").get<std::uint64_t>() ==
          split_seed(11, row.at("replica").get<std::uint64_t>()));
    CHECK(row.at("mass_fraction").get<double>() >= 0.0);
    CHECK(row.at("mass_fraction").get<double>() <= 1.0);
    ++n_rows;
  }
  CHECK(n_rows == 4);
}

TEST_CASE("scaling run emits one coordinate row per replica") {
  ExperimentConfig c = parse_config(
      R"({"schema_version":1,"kind":"scaling","gamma":1.0,"d":1,
          "t":30.0,"replicas":6,"seed":3,"output_dir":"exp_scale"})");
  auto res = run_experiment(c);
  CHECK(res.all_pass);
  std::ifstream rows(res.rows_path);
  std::string line;
  int n_rows = 0;
  while (std::getline(rows, line)) ++n_rows;
  CHECK(n_rows == 6);
}

TEST_CASE("pointprocess run counts against the exact box measure") {
  ExperimentConfig c = parse_config(
      R"({"schema_version":1,"kind":"pointprocess","gamma":1.0,"d":1,
          "t":30.0,"replicas":40,"seed":5,"output_dir":"exp_pp",
          "window":{"tau":-2.0,"alpha":0.5},
          "boxes":[{"x":[[-1.0,1.0]],"y":[0.0,"inf"]},
                    {"x":[[-2.0,2.0]],"y":[-1.0,0.0]}]})");
  auto res = run_experiment(c);
  CHECK(res.all_pass);
  // the chi-square verdicts must reference every box plus the aggregate
  CHECK(res.reports.size() == 3);
}

TEST_CASE("ageing run censors correctly and tracks the limit law") {
  ExperimentConfig c = parse_config(
      R"({"schema_version":1,"kind":"ageing","gamma":1.0,"d":1,
          "t":16.0,"replicas":30,"seed":2,"output_dir":"exp_age",
          "w_max":20.0,"w_grid":[0.1,1.0]})");
  auto res = run_experiment(c);
  CHECK(res.all_pass);
  std::ifstream rows(res.rows_path);
  std::string line;
  int n_rows = 0;
  while (std::getline(rows, line)) {
    auto row = nlohmann::json::parse(line);
    bool censored = row.at("censored").get<bool>();
    if (censored)
      CHECK(row.at("ratio").is_null());
    else
      CHECK(row.at("ratio").get<double>() > 0.0);
    ++n_rows;
  }
  CHECK(n_rows == 30);
}

TEST_CASE("re-running an experiment is byte-identical") {
  ExperimentConfig c = parse_config(
      R"({"schema_version":1,"kind":"scaling","gamma":1.0,"d":1,
          "t":25.0,"replicas":5,"seed":9,"output_dir":"exp_det"})");
  auto first = run_experiment(c);
  std::string rows1 = slurp(first.rows_path);
  std::string sum1 = slurp(first.summary_path);
  auto second = run_experiment(c);
  CHECK(slurp(second.rows_path) == rows1);
  CHECK(slurp(second.summary_path) == sum1);
  // and independent of the worker pool width
  setenv("PAM_WORKERS", "1", 1);
  auto third = run_experiment(c);
  unsetenv("PAM_WORKERS");
  CHECK(slurp(third.rows_path) == rows1);
  CHECK(slurp(third.summary_path) == sum1);
}

// --- calibration of the statistical machinery itself ----------------------

TEST_CASE("incomplete gamma and quadrature basics") {
  CHECK(gamma_p(1.0, 2.0) == doctest::Approx(1.0 - std::exp(-2.0)));
  CHECK(gamma_q(1.0, 2.0) == doctest::Approx(std::exp(-2.0)));
  CHECK(gamma_p(3.5, 2.2) + gamma_q(3.5, 2.2) == doctest::Approx(1.0));
  CHECK(gamma_upper(1.0, 1.0) == doctest::Approx(std::exp(-1.0)));
  // Gamma(s, 0) = Gamma(s)
  CHECK(gamma_upper(2.5, 0.0) == doctest::Approx(std::tgamma(2.5)));
  CHECK(adaptive_simpson([](double x) { return x * x; }, 0.0, 1.0, 1e-12) ==
        doctest::Approx(1.0 / 3.0));
  CHECK(adaptive_simpson([](double x) { return std::exp(-x); }, 0.0, 40.0, 1e-12) ==
        doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("chi-square p-values at textbook points") {
  CHECK(chi2_pvalue(3.841, 1.0) == doctest::Approx(0.05).epsilon(2e-3));
  CHECK(chi2_pvalue(11.07, 5.0) == doctest::Approx(0.05).epsilon(2e-3));
  CHECK(chi2_pvalue(0.0, 3.0) == doctest::Approx(1.0));
}

TEST_CASE("KS machinery calibrates on true uniforms") {
  Rng rng(12);
  int reject_10 = 0;
  const int reps = 300;
  for (int rep = 0; rep < reps; ++rep) {
    std::vector<double> xs(400);
    for (auto& x : xs) x = rng.uniform();
    double d = ks_statistic(xs, [](double v) {
      return v < 0 ? 0.0 : (v > 1 ? 1.0 : v);
    });
    if (ks_pvalue(xs.size(), d) < 0.1) ++reject_10;
  }
  // nominal 10% rejection; 300 reps give sd ~ 1.7%
  CHECK(reject_10 > reps * 0.04);
  CHECK(reject_10 < reps * 0.17);
  // critical value consistency
  CHECK(ks_pvalue(400, ks_critical(400, 0.05)) == doctest::Approx(0.05).epsilon(1e-3));
}

TEST_CASE("Poisson chi-square calibrates on true Poisson counts") {
  Rng rng(77);
  int reject_10 = 0;
  const int reps = 300;
  for (int rep = 0; rep < reps; ++rep) {
    std::vector<long long> counts(200);
    for (auto& c : counts) c = rng.poisson(5.0);
    if (poisson_chi2(counts, 5.0).p_value < 0.1) ++reject_10;
  }
  CHECK(reject_10 > reps * 0.03);
  CHECK(reject_10 < reps * 0.20);
  // gross misfit is detected
  std::vector<long long> wrong(200);
  for (auto& c : wrong) c = rng.poisson(8.0);
  CHECK(poisson_chi2(wrong, 5.0).p_value < 1e-6);
}

TEST_CASE("interval and moment helpers") {
  auto ci = binomial_ci(50, 100, 3.0);
  CHECK(ci.estimate == doctest::Approx(0.5));
  CHECK(ci.lo > 0.3);
  CHECK(ci.hi < 0.7);
  CHECK(ci.lo < 0.5);
  CHECK(ci.hi > 0.5);
  auto edge = binomial_ci(0, 50, 3.0);
  CHECK(edge.lo >= 0.0);
  CHECK(edge.hi > 0.0);

  auto ms = mean_stderr({1.0, 2.0, 3.0, 4.0});
  CHECK(ms.mean == doctest::Approx(2.5));
  CHECK(ms.stderr_ == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0));

  CHECK(dispersion_index({3, 3, 3, 3}) == doctest::Approx(0.0));
}
