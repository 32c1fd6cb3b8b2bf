#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "selfdec/validation.hpp"

using namespace selfdec;
using charfn::DistributionModel;
using validation::IdentityReport;
using validation::SuiteConfig;

namespace {
SuiteConfig small_config() {
  SuiteConfig cfg;
  cfg.mc_n = 20'000;
  cfg.series_truncation = 1000;
  return cfg;
}
}  // namespace

TEST_CASE("every registered identity passes on the default matrix") {
  const auto reports = validation::run_all(small_config());
  CHECK(reports.size() >= 30);
  for (const auto& r : reports) {
    INFO(r.identity_id, " ", r.params, " residual=", r.residual,
         " tol=", r.tolerance);
    CHECK(r.passed);
    CHECK(r.residual >= 0.0);
    CHECK(r.passed == (r.residual <= r.tolerance));
  }
  // deterministic id-ordered output
  for (std::size_t i = 1; i < reports.size(); ++i) {
    CHECK(std::tie(reports[i - 1].identity_id, reports[i - 1].params) <=
          std::tie(reports[i].identity_id, reports[i].params));
  }
}

TEST_CASE("reports are reproducible bit for bit") {
  SuiteConfig cfg = small_config();
  cfg.only = {"selfdecomposition", "loggamma_series_moments"};
  const auto a = validation::run_all(cfg);
  const auto b = validation::run_all(cfg);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].residual == b[i].residual);
  }
  // filtering does not change another check's stream
  SuiteConfig wide = small_config();
  const auto all = validation::run_all(wide);
  for (const auto& r : a) {
    const auto match = std::find_if(
        all.begin(), all.end(), [&](const IdentityReport& x) {
          return x.identity_id == r.identity_id && x.params == r.params;
        });
    REQUIRE(match != all.end());
    CHECK(match->residual == r.residual);
  }
}

TEST_CASE("tolerances bind: scaling them down fails the Monte Carlo checks") {
  SuiteConfig cfg = small_config();
  cfg.tolerance_scale = 0.01;
  const auto reports = validation::run_all(cfg);
  std::size_t failed_mc = 0;
  for (const auto& r : reports) {
    if (!r.passed && (r.identity_id == "selfdecomposition" ||
                      r.identity_id == "loggamma_series_moments" ||
                      r.identity_id.find("_cf") != std::string::npos)) {
      ++failed_mc;
    }
  }
  CHECK(failed_mc >= 1);
}

TEST_CASE("empty filter matrix yields an empty report") {
  SuiteConfig cfg = small_config();
  cfg.only = {"no-such-identity"};
  CHECK(validation::run_all(cfg).empty());
}

TEST_CASE("identity ids are unique per check family and cover the suite") {
  const auto ids = validation::registered_identity_ids();
  const std::set<std::string> want = {
      "bdcf_roundtrip",        "bddf_moments_loggamma",
      "bessel_kernel_series",  "besselk_innovation_cf",
      "besselk_mixture_cf",    "gamma_bddf_engine",
      "gamma_innovation_cf",   "gamma_ratio_product",
      "halfstable_sine_integral", "levy_bddf_engine",
      "loggamma_bdcf_integral", "loggamma_series_moments",
      "partial_fraction_sums", "selfdecomposition",
      "stable1_bddf_engine",   "trigamma_integral",
  };
  CHECK(std::set<std::string>(ids.begin(), ids.end()) == want);
  CHECK(ids.size() == want.size());  // no duplicate registrations per id
}

TEST_CASE("individual checks return structured reports") {
  const QuadratureConfig quad;
  const auto model = DistributionModel::make_gamma({2.0, 1.0});
  const auto rt =
      validation::check_bdcf_roundtrip(model, {0.5, 1.0, 2.0, 5.0}, quad);
  CHECK(rt.identity_id == "bdcf_roundtrip");
  CHECK(rt.passed);
  CHECK(rt.residual < 1e-7);

  const auto tg = validation::check_trigamma_integral(2.0, quad);
  CHECK(tg.passed);
  // alpha = 2: pi^2/6 - 1
  CHECK(tg.rhs.real() == doctest::Approx(M_PI * M_PI / 6.0 - 1.0));
  // large alpha: leading asymptotics 1/alpha + 1/(2 alpha^2)
  const auto big = validation::check_trigamma_integral(50.0, quad);
  CHECK(big.lhs.real() ==
        doctest::Approx(1.0 / 50.0 + 0.5 / 2500.0).epsilon(0.01));

  const auto mm = validation::check_bddf_moments_loggamma({1.0, 1.0}, quad);
  CHECK(mm.passed);
  CHECK(mm.rhs.real() == doctest::Approx(-0.5772156649).epsilon(1e-9));

  rng::RngStream s(5, 1);
  const auto sd = validation::check_selfdecomposition(
      DistributionModel::make_besselk({1.0, 1.0}), 0.7, 20'000, s);
  CHECK(sd.passed);

  rng::RngStream s2(5, 2);
  CHECK_THROWS(validation::check_selfdecomposition(
      DistributionModel::make_levy({0.0, 1.0}), 0.5, 1000, s2));
  CHECK_THROWS(validation::check_gamma_ratio_product(1.0, 1.0, 10));
}

TEST_CASE("reports serialize to stable JSON lines") {
  IdentityReport r;
  r.identity_id = "example";
  r.params = "alpha=1";
  r.residual = 0.5;
  r.tolerance = 1.0;
  r.passed = true;
  CHECK(validation::report_to_json(r) ==
        R"({"identity_id":"example","params":"alpha=1","passed":true,)"
        R"("residual":0.5,"tolerance":1.0})");
}

TEST_CASE("h_alpha positivity across shapes") {
  for (double alpha : {0.5, 1.0, 2.0}) {
    for (double x = 0.05; x <= 20.0; x += 0.05) {
      const double em1 = std::expm1(-x);
      const double h =
          (alpha + (1.0 - alpha) * (1.0 + em1)) / (em1 * em1);
      CHECK(h > 0.0);
    }
  }
}
