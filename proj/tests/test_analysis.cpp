#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "casimir/analysis.hpp"
#include "casimir/error.hpp"
#include "casimir/lifshitz.hpp"
#include "doctest.h"

using namespace casimir;

namespace {

std::vector<ExperimentRecord> parse(const std::string& text) {
  std::istringstream in(text);
  return parse_experiment(in, "mem");
}

ForceEvaluator constant(double f) {
  return [f](double) { return f; };
}

ForceEvaluator toy_power_law() {
  return [](double a) { return 477.0 * std::pow(63e-9 / a, 2.7); };
}

}  // namespace

TEST_CASE("parse_experiment") {
  const auto recs = parse("# columns=a_nm,F_pN,sigma_pN\n63, 491, 3.5\n");
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].separation == doctest::Approx(63e-9));
  CHECK(recs[0].force_measured == 491.0);
  CHECK(recs[0].sigma == 3.5);

  SUBCASE("sorted by separation, duplicates kept in order") {
    const auto r = parse("80,100,1\n63,491,3.5\n80,101,1\n");
    REQUIRE(r.size() == 3);
    CHECK(r[0].separation == doctest::Approx(63e-9));
    CHECK(r[1].force_measured == 100.0);
    CHECK(r[2].force_measured == 101.0);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(parse(""), ValidationError);
    CHECK_THROWS_AS(parse("# only a comment\n"), ValidationError);
    try {
      parse("63,491,3.5\n70,12\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(parse("63,491,abc\n"), ParseError);
    CHECK_THROWS_AS(parse("63,491,0\n"), ParseError);
    CHECK_THROWS_AS(parse("-63,491,1\n"), ParseError);
    CHECK_THROWS_AS(load_experiment("/nonexistent/exp.csv"), InputError);
  }
}

TEST_CASE("residual_report") {
  const ExperimentRecord rec{63e-9, 491.0, 3.5};
  const auto r = residual_report({&rec, 1}, constant(477.0));
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].residual == doctest::Approx(14.0));
  CHECK(r.rows[0].sigmas == doctest::Approx(4.0));
  CHECK(r.rms_deviation == doctest::Approx(14.0));
  CHECK(r.max_sigma_exceedance == doctest::Approx(4.0));

  SUBCASE("hand rms") {
    const std::vector<ExperimentRecord> two{{60e-9, 103.0, 1.0}, {70e-9, 104.0, 2.0}};
    const auto rep = residual_report(two, constant(100.0));
    CHECK(rep.rms_deviation == doctest::Approx(std::sqrt(12.5)));
    CHECK(rep.max_sigma_exceedance == doctest::Approx(3.0));
  }
  SUBCASE("theory equal to measurement") {
    const std::vector<ExperimentRecord> recs{{60e-9, 10.0, 1.0}, {70e-9, 20.0, 2.0}};
    auto exact = [&](double a) { return a < 65e-9 ? 10.0 : 20.0; };
    const auto rep = residual_report(recs, exact);
    CHECK(rep.rms_deviation == 0.0);
    CHECK(rep.max_sigma_exceedance == 0.0);
  }
  SUBCASE("range filter") {
    const std::vector<ExperimentRecord> recs{{60e-9, 10.0, 1.0}, {120e-9, 20.0, 2.0}};
    const auto rep = residual_report(recs, constant(0.0), std::pair{50e-9, 100e-9});
    CHECK(rep.rows.size() == 1);
    CHECK_THROWS_AS(residual_report(recs, constant(0.0), std::pair{200e-9, 300e-9}), ValidationError);
  }
}

TEST_CASE("residual_report properties") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> ua(60.0, 200.0), uf(-20.0, 20.0), us(0.5, 5.0);
  const auto theory = toy_power_law();
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<ExperimentRecord> recs;
    const int n = 1 + trial % 17;
    for (int i = 0; i < n; ++i) {
      const double a = ua(rng) * 1e-9;
      recs.push_back({a, theory(a) + uf(rng), us(rng)});
    }
    const auto base = residual_report(recs, theory);

    auto shuffled = recs;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto perm = residual_report(shuffled, theory);
    REQUIRE(perm.rms_deviation == doctest::Approx(base.rms_deviation).epsilon(1e-12));
    REQUIRE(perm.max_sigma_exceedance == base.max_sigma_exceedance);

    const double a0 = ua(rng) * 1e-9;
    recs.push_back({a0, theory(a0), us(rng)});
    const auto more = residual_report(recs, theory);
    REQUIRE(more.rms_deviation <= base.rms_deviation * (1.0 + 1e-12));
    REQUIRE(more.max_sigma_exceedance <= base.max_sigma_exceedance);
  }
}

TEST_CASE("residual_lower_bound") {
  CHECK(residual_lower_bound(17.0, 3.5, 2.0) == doctest::Approx(10.0));
  CHECK(residual_lower_bound(5.0, 3.5, 2.0) == 0.0);
  CHECK(residual_lower_bound(17.0, 3.5, 0.0) == 17.0);
  double prev = std::numeric_limits<double>::infinity();
  for (double k = 0.0; k <= 6.0; k += 0.25) {
    const double v = residual_lower_bound(17.0, 3.5, k);
    REQUIRE(v <= prev);
    REQUIRE(v >= 0.0);
    prev = v;
  }
}

TEST_CASE("grid evaluator reproduces direct Lifshitz evaluation") {
  const Geometry g0{95.65e-6, 63e-9};
  const auto eps = drude_permittivity({1.37e16, 3.7e13});
  auto direct = [&](double a) {
    return force_finite_T({g0.sphere_radius, a}, {300.0}, eps, Prescription::schwinger).total;
  };
  const auto grid = make_grid_evaluator(direct, 60e-9, 200e-9, 40);
  double worst = 0.0;
  for (double a = 61e-9; a < 200e-9; a += 7.3e-9) worst = std::max(worst, std::abs(grid(a) - direct(a)));
  CHECK(worst < 0.2);
  CHECK_THROWS_AS(grid(30e-9), RangeError);
  CHECK_THROWS_AS(make_grid_evaluator(direct, 60e-9, 50e-9, 40), ValidationError);
  CHECK_THROWS_AS(make_grid_evaluator(direct, 60e-9, 200e-9, 3), ValidationError);
}
