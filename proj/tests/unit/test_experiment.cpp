#include "ellipsoid_entropy/experiment.hpp"

#include <cmath>

#include "doctest.h"
#include "ellipsoid_entropy/io.hpp"
#include "support/oracle.hpp"

using namespace ellipsoid_entropy;
using nlohmann::json;

namespace {

experiment::ExperimentConfig config_from(const char* text) {
  return experiment::ExperimentConfig::from_json(json::parse(text));
}

}  // namespace

TEST_CASE("config parsing") {
  const auto c = config_from(R"({
    "k_list": [2, 5],
    "R_list": [3.0],
    "profile": {"type": "balanced_random", "C": 2.0, "eps_total": 4.0},
    "ledger": {"sigma_c": 2.5, "c5": 3.0},
    "mode": "both",
    "count_budget": 1234,
    "seed": 99
  })");
  CHECK(c.k_list == std::vector<int>{2, 5});
  CHECK(c.profile.kind == experiment::ProfileSpec::Kind::balanced_random);
  CHECK(c.profile.balance_c == 2.0);
  CHECK(c.ledger.sigma_c.value() == 2.5);
  CHECK(c.ledger.c5 == 3.0);
  CHECK(c.mode == experiment::RunMode::both);
  CHECK(c.count_budget == 1234);
  CHECK(c.seed == 99);

  CHECK_THROWS_AS(config_from(R"({"mode": "wat"})"), experiment::ConfigError);
  CHECK_THROWS_AS(config_from(R"({"profile": {"type": "wat"}})"),
                  experiment::ConfigError);
  CHECK_THROWS_AS(
      config_from(R"({"k_list":[3], "profile": {"type":"explicit","eps":[1,1]}})"),
      experiment::ConfigError);
  CHECK_THROWS_AS(config_from(R"({"profile": {"type":"uniform","eps":-1}})"),
                  experiment::ConfigError);
}

TEST_CASE("run_count pinned examples") {
  const auto c = config_from(R"({
    "k_list": [2], "R_list": [2.0], "profile": {"type":"uniform","eps":1.0}
  })");
  const auto out = experiment::run_count(c);
  REQUIRE(out.rows.size() == 1);
  CHECK(out.rows[0].tau_exact.value() == 13);

  const auto c3 = config_from(R"({
    "k_list": [3], "R_list": [1.0], "profile": {"type":"uniform","eps":1.0}
  })");
  CHECK(experiment::run_count(c3).rows[0].tau_exact.value() == 7);

  const auto wide = config_from(R"({
    "k_list": [2], "R_list": [2.0], "profile": {"type":"uniform","eps":3.0}
  })");
  CHECK(experiment::run_count(wide).rows[0].tau_exact.value() == 1);
}

TEST_CASE("count budget exhaustion produces a reasoned row") {
  const auto c = config_from(R"({
    "k_list": [2], "R_list": [5000.0],
    "profile": {"type":"uniform","eps":0.001},
    "count_budget": 100
  })");
  const auto out = experiment::run_count(c);
  REQUIRE(out.rows.size() == 1);
  CHECK_FALSE(out.rows[0].tau_exact.has_value());
  CHECK(out.rows[0].reason.find("count_budget_exceeded") == 0);
}

TEST_CASE("run_bound: k=2 R=20 residual against the exact count") {
  const auto c = config_from(R"({
    "k_list": [2], "R_list": [20.0], "profile": {"type":"uniform","eps":1.0}
  })");
  const auto out = experiment::run_bound(c);
  REQUIRE(out.rows.size() == 1);
  const auto& row = out.rows[0];
  CHECK(row.tau_exact.value() == 1257);
  CHECK(row.residual_tau.value() ==
        doctest::Approx(0.9190829210211056).epsilon(1e-10));
  CHECK_FALSE(row.bound_violated);
  CHECK(row.normalized_bound.value() >= row.ln_tau_over_k.value());
  CHECK_FALSE(out.any_violation);
  REQUIRE(out.reports.size() == 1);
  CHECK(out.reports[0].residual_vs_exact.has_value());
}

TEST_CASE("hypothesis violations are skipped with a reason") {
  const auto c = config_from(R"({
    "k_list": [2], "R_list": [1.0], "profile": {"type":"uniform","eps":1.0}
  })");
  const auto out = experiment::run_bound(c);
  REQUIRE(out.rows.size() == 1);
  CHECK(out.rows[0].tau_exact.has_value());  // counting still works
  CHECK_FALSE(out.rows[0].normalized_bound.has_value());
  CHECK(out.rows[0].reason.find("hypothesis") != std::string::npos);
}

TEST_CASE("deterministic output for identical config and seed") {
  const char* text = R"({
    "k_list": [2, 3], "R_list": [2.0, 4.0],
    "profile": {"type": "balanced_random", "C": 2.0},
    "mode": "certified", "seed": 31337
  })";
  const auto a = experiment::rows_to_csv(experiment::run_bound(config_from(text)));
  const auto b = experiment::rows_to_csv(experiment::run_bound(config_from(text)));
  CHECK(a == b);
  CHECK(a.rfind("# ellipsoid-entropy results csv v1\n", 0) == 0);
  const auto ja = experiment::output_to_json(experiment::run_bound(config_from(text)));
  const auto jb = experiment::output_to_json(experiment::run_bound(config_from(text)));
  CHECK(ja.dump() == jb.dump());
}

TEST_CASE("scale invariance of tau and residual_tau") {
  const auto a = config_from(R"({
    "k_list": [2], "R_list": [3.0], "profile": {"type":"uniform","eps":1.0}
  })");
  const auto b = config_from(R"({
    "k_list": [2], "R_list": [1.5], "profile": {"type":"uniform","eps":0.5}
  })");
  const auto ra = experiment::run_count(a).rows[0];
  const auto rb = experiment::run_count(b).rows[0];
  CHECK(ra.tau_exact.value() == rb.tau_exact.value());
  CHECK(ra.residual_tau.value() ==
        doctest::Approx(rb.residual_tau.value()).epsilon(1e-12));
}

TEST_CASE("sweep fills the alternate-regime column where it applies") {
  const auto c = config_from(R"({
    "k_list": [2, 3, 4, 5, 6], "R_list": [2.0],
    "profile": {"type":"uniform","eps":1.0}
  })");
  const auto out = experiment::run_sweep(c);
  REQUIRE(out.rows.size() == 5);
  for (const auto& row : out.rows) {
    if (row.regime == "alternate" && row.normalized_bound) {
      REQUIRE(row.alt_normalized_bound.has_value());
      const double want = (row.k - 1.0) / (2.0 * row.k) * std::log(row.R) -
                          std::log(row.eps_geom);
      CHECK(*row.alt_normalized_bound == doctest::Approx(want).epsilon(1e-12));
    } else {
      CHECK_FALSE(row.alt_normalized_bound.has_value());
    }
  }
  // regime label matches regime_check row by row
  for (const auto& row : out.rows) {
    const auto reg = bound::regime_check(row.k, row.R, c.ledger);
    CHECK(row.regime == reg.label);
  }
}

TEST_CASE("estimate-level dominance holds whenever the coupling regime holds") {
  const auto c = config_from(R"({
    "k_list": [2,3,4,5,6,7,8,9,10,11,12], "R_list": [20.0],
    "profile": {"type":"uniform","eps":1.0}
  })");
  const auto out = experiment::run_sweep(c);
  for (const auto& row : out.rows) {
    REQUIRE(row.regime == "primary");
    const double est_j1 = std::log(row.R) - 0.5 * std::log(row.k);
    const double est_j3 = (row.k - 1.0) / (2.0 * row.k) * std::log(row.R);
    CHECK(est_j1 >= est_j3 - 0.1);
    CHECK(row.dominant_term == "J1J2");
  }
}

TEST_CASE("naive counter agrees with the library counter") {
  const std::vector<double> diag{1.0, 2.25};
  CHECK(experiment::naive_count(diag, 9.0, true) ==
        test_oracle::brute_force_count(diag, 9.0, true));
}

TEST_CASE("verify suites pass on the default config") {
  experiment::ExperimentConfig c;
  c.k_list = {2, 3};
  c.R_list = {2.0, 4.0};
  const auto suites = experiment::run_verify(c);
  REQUIRE_FALSE(suites.empty());
  for (const auto& s : suites) {
    INFO(s.name, ": ", s.detail);
    CHECK(s.pass);
  }
}

TEST_CASE("a deliberately broken sigma only fails the domination suite") {
  experiment::ExperimentConfig c;
  c.k_list = {2};
  c.R_list = {2.0};
  c.profile.kind = experiment::ProfileSpec::Kind::explicit_list;
  c.profile.eps = {0.1, 10.0};
  c.ledger.sigma_c = 0.01;
  const auto suites = experiment::run_verify(c);
  bool domination_failed = false;
  for (const auto& s : suites) {
    if (s.name == "certified_bound_domination") {
      domination_failed = !s.pass;
      CHECK_FALSE(s.detail.empty());  // counterexample serialized
    } else {
      INFO(s.name);
      CHECK(s.pass);
    }
  }
  CHECK(domination_failed);
}

TEST_CASE("empty k_list gives a vacuous pass with a warning") {
  experiment::ExperimentConfig c;
  c.k_list.clear();
  const auto suites = experiment::run_verify(c);
  for (const auto& s : suites) {
    if (s.name == "codec_round_trip" || s.name == "certified_bound_domination") {
      CHECK(s.pass);
      CHECK(s.detail.find("vacuous") != std::string::npos);
    }
  }
}

TEST_CASE("csv schema and json structure") {
  const auto c = config_from(R"({
    "k_list": [2], "R_list": [2.0], "profile": {"type":"uniform","eps":1.0}
  })");
  const auto out = experiment::run_bound(c);
  const auto csv = experiment::rows_to_csv(out);
  CHECK(csv.find("k,R,eps_geom,eps_total,tau_exact,ln_tau_over_k,normalized_bound,"
                 "residual,residual_tau,c_eff,regime,dominant_term,scheme,reason,"
                 "alt_normalized_bound\n") != std::string::npos);
  CHECK(csv.find("runtime_ms") == std::string::npos);
  const auto with_timings = experiment::rows_to_csv(out, true);
  CHECK(with_timings.find("runtime_ms") != std::string::npos);

  const auto j = experiment::output_to_json(out);
  CHECK(j["schema"] == "ellipsoid-entropy results v1");
  REQUIRE(j["rows"].size() == 1);
  CHECK(j["rows"][0]["tau_exact"] == "13");
  REQUIRE(j["reports"].size() == 1);
  CHECK(j["reports"][0]["ln_J1"].get<double>() ==
        doctest::Approx(std::log(4 * 3.14159265358979)).epsilon(1e-6));
  const auto jv = experiment::verify_to_json({{"a", true, ""}, {"b", false, "x"}});
  CHECK(jv["all_pass"] == false);
}

TEST_CASE("spectrum and code serialization") {
  codec::PrecisionProfile p(std::vector<double>{1.0, 1.0});
  const auto spec = lattice::spectrum(lattice::DiagonalForm::primal(p), 2.0);
  const auto csv = io::spectrum_to_csv(spec);
  CHECK(csv.find("value,multiplicity") != std::string::npos);
  CHECK(csv.find("1,4") != std::string::npos);
  CHECK(csv.find("2,4") != std::string::npos);
  const auto j = io::spectrum_to_json(spec);
  CHECK(j["count"] == 8);

  const auto code = codec::quantize(std::vector<double>{1.5, -2.3}, p);
  CHECK(io::code_to_json(code) == "[1,-2]");
  CHECK(io::parse_signal_json("[1.5, -2.25]") == std::vector<double>{1.5, -2.25});
}
