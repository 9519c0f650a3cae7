#include <cmath>

#include "casimir/constants.hpp"
#include "casimir/error.hpp"
#include "casimir/lifshitz.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace casimir;

namespace {

constexpr double kRadius = 95.65e-6;
constexpr DrudeParameters kGold{1.37e16, 3.7e13};

Geometry at(double a_nm) { return {kRadius, a_nm * 1e-9}; }

}  // namespace

TEST_CASE("ideal_force") {
  CHECK(ideal_force(at(63)) == doctest::Approx(1042.0).epsilon(5e-3));
  CHECK(ideal_force(at(126)) == doctest::Approx(ideal_force(at(63)) / 8.0).epsilon(1e-14));
  CHECK(ideal_force({2 * kRadius, 63e-9}) == doctest::Approx(2.0 * ideal_force(at(63))).epsilon(1e-14));
  CHECK_THROWS_AS(ideal_force({kRadius, 0.0}), ValidationError);
  CHECK_THROWS_AS(ideal_force({-1.0, 63e-9}), ValidationError);
}

TEST_CASE("Geometry PFT warning") {
  CHECK_FALSE(at(63).pft_warning().has_value());
  CHECK(Geometry{1e-6, 63e-9}.pft_warning().has_value());
}

TEST_CASE("classical_term") {
  const double expected =
      1.381e-23 * 300.0 * 95.65e-6 * 1.2020569 / (4.0 * 63e-9 * 63e-9) * 1e12;
  CHECK(expected == doctest::Approx(30.0).epsilon(2e-3));
  const double full = classical_term(at(63), {300.0}, Prescription::schwinger);
  CHECK(full == doctest::Approx(expected).epsilon(1e-3));
  CHECK(classical_term(at(63), {300.0}, Prescription::halved) == 0.5 * full);
  CHECK(classical_term(at(63), {0.0}, Prescription::schwinger) == 0.0);
}

TEST_CASE("reflection coefficients") {
  for (double eps : {1.0001, 2.0, 33.9, 1e6}) {
    const double s = std::sqrt(eps);
    CHECK(reflection_tm(eps, 1.0) == doctest::Approx((eps - s) / (eps + s)).epsilon(1e-12));
    CHECK(reflection_te(eps, 1.0) == doctest::Approx((1.0 - s) / (1.0 + s)).epsilon(1e-12));
    for (double p : {1.0, 3.0, 1e3}) {
      const double sp = std::sqrt(eps - 1 + p * p);
      CHECK(reflection_te(eps, p) == doctest::Approx((p - sp) / (p + sp)).epsilon(1e-9));
      CHECK(reflection_tm(eps, p) == doctest::Approx((eps * p - sp) / (eps * p + sp)).epsilon(1e-9));
    }
  }
  CHECK(reflection_te(INFINITY, 2.0) == -1.0);
  CHECK(reflection_tm(INFINITY, 2.0) == 1.0);
}

TEST_CASE("matsubara_term approaches the perfect-conductor closed form") {
  const auto pc = perfect_conductor();
  for (std::size_t n : {1u, 2u, 5u, 20u, 100u}) {
    const double ref = oracle::ideal_matsubara_term_pn(n, kRadius, 63e-9, 300.0);
    CHECK(oracle::rel_diff(matsubara_term(n, at(63), {300.0}, pc), ref) < 1e-6);
  }
  // Large but finite eps converges to the same limit.
  auto huge = [](double) { return 1e16; };
  const double ref1 = oracle::ideal_matsubara_term_pn(1, kRadius, 63e-9, 300.0);
  CHECK(oracle::rel_diff(matsubara_term(1, at(63), {300.0}, huge), ref1) < 1e-5);
}

TEST_CASE("matsubara_term damping and errors") {
  const auto eps = drude_permittivity(kGold);
  const double t1 = matsubara_term(1, at(63), {300.0}, eps);
  CHECK(t1 > 0.0);
  CHECK(matsubara_term(10000, at(63), {300.0}, eps) < 1e-12 * t1);
  CHECK_THROWS_AS(matsubara_term(0, at(63), {300.0}, eps), RangeError);
  auto vacuum = [](double) { return 1.0; };
  CHECK_THROWS_AS(matsubara_term(1, at(63), {300.0}, vacuum), ComputeError);
}

TEST_CASE("perfect conductor limits") {
  const auto pc = perfect_conductor();
  const double f0 = force_zero_T(at(63), pc);
  CHECK(oracle::rel_diff(f0, ideal_force(at(63))) < 1e-4);
  CHECK(reduction_factor(f0, at(63)) == doctest::Approx(1.0).epsilon(1e-4));
  const auto ft = force_finite_T(at(63), {300.0}, pc, Prescription::schwinger);
  CHECK(oracle::rel_diff(ft.total, ideal_force(at(63))) < 0.015);
  // Finite-temperature correction for an ideal metal is small and positive here.
  CHECK(ft.total >= f0);
}

TEST_CASE("force_finite_T decomposition") {
  const auto eps = drude_permittivity(kGold);
  const auto r = force_finite_T(at(63), {300.0}, eps, Prescription::schwinger);
  CHECK(r.total == r.n0_term + r.sum_terms);
  CHECK(r.total > 0.0);
  CHECK(r.n_terms_used > 10);
  CHECK(r.prescription == Prescription::schwinger);
  CHECK(r.n0_term == classical_term(at(63), {300.0}, Prescription::schwinger));

  const auto h = force_finite_T(at(63), {300.0}, eps, Prescription::halved);
  CHECK(h.sum_terms == r.sum_terms);
  CHECK(r.total - h.total == doctest::Approx(0.5 * r.n0_term).epsilon(1e-12));

  CHECK_THROWS_AS(force_finite_T(at(63), {0.0}, eps, Prescription::schwinger), RangeError);
  LifshitzOptions tight;
  tight.n_max = 5;
  CHECK_THROWS_AS(force_finite_T(at(63), {300.0}, eps, Prescription::schwinger, tight),
                  ComputeError);
  LifshitzOptions bad;
  bad.rel_tol = 2.0;
  CHECK_THROWS_AS(force_finite_T(at(63), {300.0}, eps, Prescription::schwinger, bad),
                  ValidationError);
}

TEST_CASE("force is positive and decreasing in separation; sum exceeds integral") {
  const auto eps = drude_permittivity(kGold);
  double prev = std::numeric_limits<double>::infinity();
  for (double a = 60; a <= 200; a += 10) {
    const auto ft = force_finite_T(at(a), {300.0}, eps, Prescription::schwinger);
    const double f0 = force_zero_T(at(a), eps);
    REQUIRE(ft.total > 0.0);
    REQUIRE(ft.total < prev);
    REQUIRE(ft.total >= f0);
    const double eta = reduction_factor(f0, at(a));
    REQUIRE(eta > 0.0);
    REQUIRE(eta < 1.0);
    prev = ft.total;
  }
}

TEST_CASE("larger plasma frequency gives a larger force") {
  double prev = 0.0;
  for (double wp : {0.8e16, 1.0e16, 1.2e16, 1.37e16, 1.6e16}) {
    const auto eps = drude_permittivity({wp, 3.7e13});
    const double f = force_finite_T(at(80), {300.0}, eps, Prescription::schwinger).total;
    REQUIRE(f > prev);
    prev = f;
  }
}

TEST_CASE("temperature correction") {
  const auto eps = drude_permittivity(kGold);
  const double d100 = temperature_correction(at(100), {300.0}, eps, Prescription::schwinger);
  CHECK(d100 == doctest::Approx(4.0).epsilon(0.25));
  CHECK(d100 > 0.0);
  // Sum converges to the integral as T -> 0.
  const double cold = temperature_correction(at(100), {1.0}, eps, Prescription::schwinger);
  CHECK(std::abs(cold) < 0.1);
}

TEST_CASE("reduction_factor") {
  CHECK(reduction_factor(ideal_force(at(100)), at(100)) == doctest::Approx(1.0));
  CHECK_THROWS_AS(reduction_factor(-1.0, at(100)), ValidationError);
}

TEST_CASE("prescription names") {
  CHECK(parse_prescription("schwinger") == Prescription::schwinger);
  CHECK(parse_prescription("halved") == Prescription::halved);
  CHECK(std::string(to_string(Prescription::halved)) == "halved");
  CHECK_THROWS_AS(parse_prescription("bs"), ValidationError);
}
