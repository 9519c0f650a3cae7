#include <cmath>

#include "casimir/constants.hpp"
#include "casimir/error.hpp"
#include "casimir/yukawa.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace casimir;

namespace {

constexpr double nm = 1e-9;
constexpr double kRadius = 95.65e-6;
const ConstraintGeometry kGeom{};

double closed_form(double lambda, double a, double h) {
  const double x = std::exp(-h / lambda);
  return 6.27e-25 * std::exp(a / lambda) / (1.0 - 1.74 * x + 0.75 * x * x) *
         std::pow(100e-9 / lambda, 3);
}

}  // namespace

TEST_CASE("alpha_lower_limit") {
  CHECK(alpha_lower_limit(100 * nm, kGeom) == doctest::Approx(2.65e-24).epsilon(2e-3));
  CHECK(oracle::rel_diff(alpha_lower_limit(100 * nm, kGeom), closed_form(100e-9, 63e-9, 96e-9)) < 1e-14);
  CHECK(alpha_lower_limit(33 * nm, kGeom) == doctest::Approx(1.5e-22).epsilon(0.15));
  CHECK(alpha_lower_limit(1e-3, kGeom) < 1e-30);
  CHECK(alpha_lower_limit(1e-3, kGeom) > 0.0);
  // Linear in the residual bound.
  CHECK(alpha_lower_limit(100 * nm, kGeom, 20.0) ==
        doctest::Approx(2.0 * alpha_lower_limit(100 * nm, kGeom)).epsilon(1e-14));
  CHECK_THROWS_AS(alpha_lower_limit(0.0, kGeom), RangeError);
  CHECK_THROWS_AS(alpha_lower_limit(100 * nm, kGeom, 0.0), ValidationError);
}

TEST_CASE("alpha_lower_limit is positive, continuous and decreasing on [10, 1000] nm") {
  double prev = std::numeric_limits<double>::infinity();
  const double step = std::pow(10.0, 1.0 / 2000.0);
  for (double l = 10 * nm; l <= 1000 * nm; l *= step) {
    const double v = alpha_lower_limit(l, kGeom);
    REQUIRE(v > 0.0);
    REQUIRE(std::isfinite(v));
    // Small relative change between neighbours: no jumps.
    if (std::isfinite(prev)) REQUIRE(std::abs(std::log(v / prev)) < 0.02);
    prev = v;
  }
}

TEST_CASE("allowed_lambda_boundary") {
  const auto b = allowed_lambda_boundary(kGeom, 1.5e-22);
  CHECK(b.lambda > 31 * nm);
  CHECK(b.lambda < 34 * nm);
  CHECK(b.mass_ev > 36.0);
  CHECK(b.mass_ev < 40.0);
  CHECK(oracle::rel_diff(alpha_lower_limit(b.lambda, kGeom), 1.5e-22) < 1e-5);

  const auto inv = allowed_lambda_boundary(kGeom, alpha_lower_limit(100 * nm, kGeom));
  CHECK(oracle::rel_diff(inv.lambda, 100 * nm) < 1e-6);

  for (double ceiling : {1e-20, 1e-21, 3e-23, 1e-23, 1e-24}) {
    const auto r = allowed_lambda_boundary(kGeom, ceiling);
    CHECK(oracle::rel_diff(alpha_lower_limit(r.lambda, kGeom), ceiling) < 1e-5);
  }
  CHECK_THROWS_AS(allowed_lambda_boundary(kGeom, 1.0), RangeError);
  CHECK_THROWS_AS(allowed_lambda_boundary(kGeom, 0.0), ValidationError);
}

TEST_CASE("boson_mass_ev") {
  const double hc_ev_nm = 2.0 * constants::pi * constants::hbar * constants::c / constants::e_charge / nm;
  CHECK(hc_ev_nm == doctest::Approx(1239.84).epsilon(1e-5));
  CHECK(boson_mass_ev(33 * nm) == doctest::Approx(hc_ev_nm / 33.0).epsilon(1e-12));
}

TEST_CASE("yukawa_force_oracle") {
  const YukawaHypothesis h{1e-24, 100 * nm};
  const double f = yukawa_force_oracle(h, kGeom, kRadius);
  CHECK(f > 0.0);
  CHECK(yukawa_force_oracle({0.0, 100 * nm}, kGeom, kRadius) == 0.0);
  CHECK(yukawa_force_oracle({2e-24, 100 * nm}, kGeom, kRadius) == doctest::Approx(2.0 * f).epsilon(1e-12));

  // Inverting the oracle at the reference residual reproduces the closed form.
  const double alpha_oracle = 1e-24 * kReferenceResidualPn / f;
  CHECK(oracle::rel_diff(alpha_oracle, alpha_lower_limit(100 * nm, kGeom)) < 0.25);

  CHECK_THROWS_AS(yukawa_force_oracle({-1.0, 100 * nm}, kGeom, kRadius), ValidationError);
  CHECK_THROWS_AS(yukawa_force_oracle(h, kGeom, 0.0), ValidationError);
}

TEST_CASE("yukawa_force_oracle is increasing in lambda") {
  double prev = 0.0;
  for (double l = 10 * nm; l <= 500 * nm * 1.0001; l *= std::pow(50.0, 1.0 / 12.0)) {
    const double f = yukawa_force_oracle({1e-24, l}, kGeom, kRadius);
    REQUIRE(f > prev);
    prev = f;
  }
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(YukawaHypothesis({1.0, 0.0}).validate(), ValidationError);
  CHECK_NOTHROW(YukawaHypothesis({0.0, 1e-9}).validate());
  CHECK_THROWS_AS(ConstraintGeometry({0.0, 1e-7}).validate(), ValidationError);
  CHECK_THROWS_AS(ConstraintGeometry({1e-7, -1.0}).validate(), ValidationError);
}
