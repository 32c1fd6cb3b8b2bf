#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "selfdec/charfn.hpp"
#include "selfdec/specfun.hpp"

using namespace selfdec;
using charfn::DistributionModel;

namespace {

const QuadratureConfig kQuad;

std::vector<DistributionModel> catalog() {
  return {DistributionModel::make_gamma({2.0, 1.0}),
          DistributionModel::make_gamma({1.0, 1.0}),
          DistributionModel::make_loggamma({1.0, 1.0}),
          DistributionModel::make_loggamma({2.0, 0.5}),
          DistributionModel::make_levy({0.0, 2.0}),
          DistributionModel::make_levy({-1.0, 0.5}),
          DistributionModel::make_symstable1({1.0}),
          DistributionModel::make_besselk({1.0, 1.0}),
          DistributionModel::make_besselk({2.0, 3.0})};
}

}  // namespace

TEST_CASE("parameter invariants are enforced") {
  CHECK_THROWS_AS(DistributionModel::make_gamma({0.0, 1.0}),
                  std::domain_error);
  CHECK_THROWS_AS(DistributionModel::make_gamma({1.0, -1.0}),
                  std::domain_error);
  CHECK_THROWS_AS(DistributionModel::make_loggamma({-2.0, 1.0}),
                  std::domain_error);
  CHECK_THROWS_AS(DistributionModel::make_levy({0.0, 0.0}),
                  std::domain_error);
  CHECK_THROWS_AS(DistributionModel::make_symstable1({-1.0}),
                  std::domain_error);
  CHECK_THROWS_AS(DistributionModel::make_besselk({1.0, 0.0}),
                  std::domain_error);
}

TEST_CASE("log_cf spot values") {
  const auto g11 = DistributionModel::make_gamma({1.0, 1.0});
  // -log(1 - i) = -(log 2)/2 + i pi/4
  const ComplexValue want(-0.5 * std::log(2.0), M_PI / 4.0);
  CHECK(std::abs(charfn::log_cf(g11, 1.0) - want) < 1e-15);

  for (const auto& model : catalog()) {
    CHECK(std::abs(charfn::log_cf(model, 0.0)) == 0.0);
  }

  const auto lg11 = DistributionModel::make_loggamma({1.0, 1.0});
  const ComplexValue lg = charfn::log_cf(lg11, 1.0);
  CHECK(std::abs(lg - specfun::log_gamma_complex({1.0, 1.0})) < 1e-14);
  // |Gamma(1+it)|^2 = pi t / sinh(pi t), an independent closed form
  CHECK(std::exp(lg.real()) ==
        doctest::Approx(std::sqrt(M_PI / std::sinh(M_PI))).epsilon(1e-12));
  CHECK(std::real(std::exp(lg)) ==
        doctest::Approx(0.49801566811835604).epsilon(1e-10));
}

TEST_CASE("|cf| <= 1 and Hermitian symmetry on a grid") {
  for (const auto& model : catalog()) {
    for (double t = 0.1; t <= 10.0; t += 0.3) {
      const ComplexValue lc = charfn::log_cf(model, t);
      CHECK(lc.real() <= 1e-15);  // |cf| <= 1
      CHECK(std::abs(charfn::log_cf(model, -t) - std::conj(lc)) < 1e-12);
      const ComplexValue lb = charfn::log_bdcf_closed(model, t);
      CHECK(lb.real() <= 1e-15);
      CHECK(std::abs(charfn::log_bdcf_closed(model, -t) - std::conj(lb)) <
            1e-12);
      if (model.is_symmetric()) {
        CHECK(lc.imag() == 0.0);
        CHECK(lb.imag() == 0.0);
      }
    }
  }
}

TEST_CASE("closed-form BDCF spot values") {
  const auto g11 = DistributionModel::make_gamma({1.0, 1.0});
  // 1/(1-i) - 1 = -1/2 + i/2
  CHECK(std::abs(charfn::log_bdcf_closed(g11, 1.0) - ComplexValue(-0.5, 0.5)) <
        1e-15);
  CHECK(std::abs(std::exp(charfn::log_bdcf_closed(g11, 1.0))) ==
        doctest::Approx(std::exp(-0.5)).epsilon(1e-14));

  const auto st = DistributionModel::make_symstable1({1.0});
  CHECK(charfn::log_bdcf_closed(st, 2.0) == ComplexValue(-2.0, 0.0));

  const auto bk = DistributionModel::make_besselk({1.0, 1.0});
  CHECK(std::abs(charfn::log_bdcf_closed(bk, 1.0) - ComplexValue(-1.0, 0.0)) <
        1e-15);
}

TEST_CASE("numeric BDCF agrees with the closed forms") {
  for (const auto& model : catalog()) {
    for (double t : {0.5, 1.0, 2.0, 5.0}) {
      const ComplexValue numeric = charfn::log_bdcf_numeric(model, t);
      const ComplexValue closed = charfn::log_bdcf_closed(model, t);
      CHECK(std::abs(numeric - closed) < 1e-6);
    }
  }
  const auto g23 = DistributionModel::make_gamma({2.0, 3.0});
  CHECK(std::abs(charfn::log_bdcf_numeric(g23, 1.0, 1e-5) -
                 charfn::log_bdcf_closed(g23, 1.0)) < 1e-8);
  // t phi'/phi -> 0 as t -> 0 for finite-mean models
  CHECK(std::abs(charfn::log_bdcf_numeric(g23, 1e-8, 2.5e-9)) < 1e-6);
  CHECK_THROWS_AS((void)charfn::log_bdcf_numeric(g23, 0.0), std::domain_error);
  CHECK_THROWS_AS((void)charfn::log_bdcf_numeric(g23, 1.0, 0.6),
                  std::domain_error);
}

TEST_CASE("transform round trip reconstructs every log cf") {
  for (const auto& model : catalog()) {
    auto log_psi = [&](double u) { return charfn::log_bdcf_closed(model, u); };
    for (double t : {0.5, 1.0, 2.0, 5.0}) {
      const ComplexValue rebuilt = charfn::cf_from_bdcf(log_psi, t, kQuad);
      CHECK(std::abs(rebuilt - charfn::log_cf(model, t)) < 1e-7);
    }
  }
  // point mass: log psi == 0 maps to log cf == 0
  auto zero = [](double) { return ComplexValue(0.0, 0.0); };
  CHECK(std::abs(charfn::cf_from_bdcf(zero, 3.0, kQuad)) < 1e-12);
  // stable fixed point reproduces -|t| exactly
  const auto st = DistributionModel::make_symstable1({1.0});
  auto stable_psi = [&](double u) { return charfn::log_bdcf_closed(st, u); };
  CHECK(std::abs(charfn::cf_from_bdcf(stable_psi, 3.0, kQuad) -
                 ComplexValue(-3.0, 0.0)) < 1e-10);
}

TEST_CASE("log-gamma BDCF from the Levy-measure integral") {
  CHECK(std::abs(charfn::log_bdcf_loggamma_levy(0.0, {1.0, 1.0}, kQuad)) ==
        0.0);
  for (double alpha : {0.5, 1.0, 2.0}) {
    const auto model = DistributionModel::make_loggamma({alpha, 1.0});
    for (double t : {0.5, 1.0, 2.0}) {
      const ComplexValue from_integral =
          charfn::log_bdcf_loggamma_levy(t, {alpha, 1.0}, kQuad);
      CHECK(std::abs(from_integral - charfn::log_bdcf_closed(model, t)) <
            1e-6);
      // Hermitian symmetry of the integral form
      const ComplexValue neg =
          charfn::log_bdcf_loggamma_levy(-t, {alpha, 1.0}, kQuad);
      CHECK(std::abs(neg - std::conj(from_integral)) < 1e-6);
    }
  }
  // lambda enters only through the drift
  const ComplexValue with_l =
      charfn::log_bdcf_loggamma_levy(1.0, {2.0, 3.0}, kQuad);
  const ComplexValue unit_l =
      charfn::log_bdcf_loggamma_levy(1.0, {2.0, 1.0}, kQuad);
  CHECK(std::abs(with_l - (unit_l + ComplexValue(0.0, -std::log(3.0)))) <
        1e-9);
}

TEST_CASE("innovation log cf: construction identity and spot values") {
  const auto bk = DistributionModel::make_besselk({1.0, 1.0});
  CHECK(std::abs(charfn::innovation_log_cf(bk, 0.5, 1.0) -
                 ComplexValue(std::log(0.625), 0.0)) < 1e-14);

  const auto lg = DistributionModel::make_loggamma({1.0, 1.0});
  const ComplexValue want = specfun::log_gamma_complex({1.0, 1.0}) -
                            specfun::log_gamma_complex({1.0, 0.5});
  CHECK(std::abs(charfn::innovation_log_cf(lg, 0.5, 1.0) - want) < 1e-13);

  for (const auto& model : catalog()) {
    CHECK(std::abs(charfn::innovation_log_cf(model, 0.3, 0.0)) == 0.0);
    for (double c : {0.3, 0.7}) {
      for (double t : {0.5, 2.0}) {
        // exact by construction
        const ComplexValue lhs = charfn::innovation_log_cf(model, c, t) +
                                 charfn::log_cf(model, c * t);
        CHECK(std::abs(lhs - charfn::log_cf(model, t)) == 0.0);
      }
    }
  }
  CHECK_THROWS_AS((void)charfn::innovation_log_cf(bk, 1.0, 1.0),
                  std::domain_error);
  CHECK_THROWS_AS((void)charfn::innovation_log_cf(bk, 0.0, 1.0),
                  std::domain_error);
}

TEST_CASE("JSON descriptors round-trip and validate") {
  for (const auto& model : catalog()) {
    const auto back = charfn::model_from_json(charfn::model_to_json(model));
    CHECK(back.kind() == model.kind());
    for (double t : {0.5, 3.0}) {
      CHECK(std::abs(charfn::log_cf(back, t) - charfn::log_cf(model, t)) ==
            0.0);
    }
  }
  const auto m = charfn::model_from_json(
      R"({"kind":"Gamma","params":{"alpha":2,"lambda":3}})");
  CHECK(m.gamma_params().alpha == 2.0);
  CHECK(m.gamma_params().lambda == 3.0);
  CHECK_THROWS_AS(
      (void)charfn::model_from_json(R"({"kind":"Cauchy","params":{}})"),
      std::domain_error);
  CHECK_THROWS_AS((void)charfn::model_from_json(
                      R"({"kind":"Gamma","params":{"alpha":-1,"lambda":1}})"),
                  std::domain_error);
}
