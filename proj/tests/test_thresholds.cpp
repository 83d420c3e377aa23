#include "ulab/thresholds.hpp"

#include "ulab/errors.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace ulab;

TEST_CASE("bound formulas") {
    CHECK(free_bound(2.0) == doctest::Approx(16.0));
    CHECK(free_bound(0.0) == 0.0);
    CHECK(free_bound(0.5) == doctest::Approx(1.0));

    CHECK(classical_bound(1.0, std::exp(1.0)) ==
          doctest::Approx(36.0 * (1.0 + std::log(2.0))).epsilon(1e-14));
    CHECK(classical_bound(1.0, 1.0) == doctest::Approx(36.0 * std::log(2.0)).epsilon(1e-14));
    CHECK(classical_bound(2.0, std::exp(2.0)) ==
          doctest::Approx(18.0 * (2.0 + std::log(2.0))).epsilon(1e-14));
    CHECK_THROWS_AS(classical_bound(1.0, 0.5), ValidationError);

    CHECK(cauchy_bound(1.0) == doctest::Approx(20.0));
    CHECK(cauchy_bound(0.0) == 0.0);
    CHECK(cauchy_bound(8.0) == doctest::Approx(40.0));

    CHECK(levy_bound(2.0) == doctest::Approx(std::pow(22.5, 0.25) * std::sqrt(2.0)).epsilon(1e-14));
    CHECK(levy_bound(2.0) == doctest::Approx(3.0800702882410229).epsilon(1e-12));
    CHECK(levy_bound(0.0) == 0.0);
    CHECK(levy_bound(1.0) == doctest::Approx(2.1779385873464312).epsilon(1e-12));
}

TEST_CASE("bounds are monotone in their functional") {
    double prev_f = -1.0, prev_c = -1.0, prev_b = -1.0, prev_l = -1.0;
    for (int i = 0; i <= 10; ++i) {
        const double x = 0.3 * i;
        CHECK(free_bound(x) >= prev_f);
        prev_f = free_bound(x);
        CHECK(cauchy_bound(x) >= prev_b);
        prev_b = cauchy_bound(x);
        CHECK(levy_bound(x) >= prev_l);
        prev_l = levy_bound(x);
        CHECK(classical_bound(1.0, 1.0 + x) >= prev_c);
        prev_c = classical_bound(1.0, 1.0 + x);
    }
}

TEST_CASE("threshold verification on the two-atom measure") {
    const auto mu = ProbabilityMeasure(NamedMeasure::bernoulli(1.0));
    {
        const auto rep = verify_threshold(mu, ThresholdTheorem::Free4D2, 3);
        CHECK(rep.bound == doctest::Approx(16.0));
        CHECK(rep.inputs.at("D") == doctest::Approx(2.0));
        CHECK(!rep.falsified);
        for (const auto& [t, uni] : rep.verified_at) CHECK(uni);
    }
    {
        const auto rep = verify_threshold(mu, ThresholdTheorem::CauchyThirdMoment, 3);
        CHECK(rep.bound == doctest::Approx(20.0));
        CHECK(!rep.falsified);
    }
    {
        const auto rep = verify_threshold(mu, ThresholdTheorem::ClassicalGaussianTail, 2, 1.0);
        CHECK(rep.inputs.at("alpha") == doctest::Approx(std::exp(1.0)).epsilon(1e-10));
        CHECK(!rep.falsified);
    }
}

TEST_CASE("levy threshold verification on a uniform measure") {
    const auto rep =
        verify_threshold(NamedMeasure::uniform(0.0, 1.0), ThresholdTheorem::LevyDiameter, 2);
    CHECK(rep.bound == doctest::Approx(2.1779385873464312).epsilon(1e-10));
    CHECK(!rep.falsified);
}

TEST_CASE("threshold verification of a point mass uses a positive floor time") {
    const auto rep = verify_threshold(NamedMeasure::point_mass(0.0), ThresholdTheorem::Free4D2, 2);
    CHECK(rep.bound == 0.0);
    CHECK(!rep.falsified);
    for (const auto& [t, uni] : rep.verified_at) {
        CHECK(t > 0.0);
        CHECK(uni);
    }
}

TEST_CASE("gap probe: known ratios") {
    std::vector<ProbabilityMeasure> family;
    family.emplace_back(NamedMeasure::bernoulli(1.0));
    family.emplace_back(AtomicMeasure({0.0, 1.0}, {0.5, 0.5}));
    const auto res = constant_gap_probe(family, 1e-3);
    // both are two equal atoms up to shift/scale: t* = D^2 exactly
    CHECK(res.ratios[0] == doctest::Approx(1.0).epsilon(2e-3));
    CHECK(res.ratios[1] == doctest::Approx(1.0).epsilon(2e-3));
    CHECK(res.max_ratio <= 4.0);
}

TEST_CASE("gap probe: random three-atom family stays below the sufficient constant") {
    std::mt19937_64 rng(97);
    std::vector<ProbabilityMeasure> family;
    for (int i = 0; i < 20; ++i) {
        ProbabilityMeasure mu(testutil::random_atomic(rng, 3, 0.0, 1.0));
        family.push_back(mu.dilated(1.0 / diameter(mu)));  // normalize D to 1
    }
    const auto res = constant_gap_probe(family, 1e-2);
    for (double r : res.ratios) {
        CHECK(r > 0.0);
        CHECK(r <= 4.0);
    }
}

TEST_CASE("free critical time scales with the square of dilation") {
    const auto mu = ProbabilityMeasure(NamedMeasure::bernoulli(1.0));
    const auto base = critical_time(mu, ProcessKind::FreeSemicircle, 0.5, 16.0, 1e-3);
    for (double c : {0.5, 2.0}) {
        const auto scaled = critical_time(mu.dilated(c), ProcessKind::FreeSemicircle,
                                          0.5 * c * c, 16.0 * c * c, 1e-3 * c * c);
        CHECK(scaled.t_star ==
              doctest::Approx(c * c * base.t_star).epsilon(1e-2));
    }
}
