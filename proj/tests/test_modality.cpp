#include "ulab/modality.hpp"

#include "ulab/errors.hpp"
#include "ulab/subordination.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace ulab;
using std::numbers::pi;

TEST_CASE("two-atom gaussian mixture modes below and above the merge time") {
    const auto mu = ProbabilityMeasure(NamedMeasure::bernoulli(1.0));
    {
        const auto rep = analyze_modality(mu, ProcessKind::ClassicalGaussian, 0.25);
        REQUIRE(rep.mode_count == 2);
        CHECK(rep.unimodal == false);
        // oracle: fixed point of x = -(x+1) exp(-8x) + 1 refined independently
        CHECK(rep.mode_locations[0] == doctest::Approx(-0.9993256730151082).epsilon(1e-6));
        CHECK(rep.mode_locations[1] == doctest::Approx(0.9993256730151082).epsilon(1e-6));
    }
    {
        const auto rep = analyze_modality(mu, ProcessKind::ClassicalGaussian, 4.0);
        REQUIRE(rep.mode_count == 1);
        CHECK(rep.unimodal);
        CHECK(std::fabs(rep.mode_locations[0]) < 1e-9);
    }
}

TEST_CASE("levy evolution of a point mass peaks at t^2/3") {
    const auto rep = analyze_modality(NamedMeasure::point_mass(0.0), ProcessKind::LevyHalf, 1.0);
    REQUIRE(rep.mode_count == 1);
    CHECK(rep.unimodal);
    CHECK(rep.mode_locations[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-8));
}

TEST_CASE("profile-scan verdicts for the free two-atom evolution") {
    const auto mu = ProbabilityMeasure(NamedMeasure::bernoulli(1.0));
    {
        const auto rep = count_modes_profile(free_density_profile(mu, 7.0, 1025));
        CHECK(rep.unimodal);
    }
    {
        const auto rep = count_modes_profile(free_density_profile(mu, 0.25, 1025));
        CHECK(rep.support_components == 2);
        CHECK(rep.unimodal == false);
    }
    {
        const auto rep = count_modes_profile(free_density_profile(mu, 2.0, 1025));
        CHECK(rep.support_components == 1);
        CHECK(rep.mode_count == 2);
        CHECK(rep.unimodal == false);
    }
}

TEST_CASE("profile scan collapses plateaus and rejects all-zero input") {
    DensityProfile flat;
    flat.x = {0.0, 1.0, 2.0, 3.0, 4.0, 5.0};
    flat.p = {0.0, 1.0, 1.0, 1.0, 0.5, 0.0};
    const auto rep = count_modes_profile(flat);
    CHECK(rep.mode_count == 1);
    CHECK(rep.unimodal);

    DensityProfile zero;
    zero.x = {0.0, 1.0};
    zero.p = {0.0, 0.0};
    CHECK_THROWS_AS(count_modes_profile(zero), NumericalError);
}

TEST_CASE("window too small raises a numerical error") {
    const auto mu = ProbabilityMeasure(NamedMeasure::bernoulli(1.0));
    ConvolvedDensity cd(mu, ProcessKind::ClassicalGaussian, 1.0);
    CHECK_THROWS_AS(count_modes_derivative(cd, {-10.0, -5.0}, 512), NumericalError);
    CHECK_THROWS_AS(count_modes_derivative(cd, {-1.0, 1.0}, 100), ValidationError);
}

TEST_CASE("level crossings for the free two-atom evolution") {
    const auto mu = ProbabilityMeasure(NamedMeasure::bernoulli(1.0));
    // unimodal at t = 4: half the peak level crosses twice
    CHECK(level_crossings(mu, ProcessKind::FreeSemicircle, 4.0,
                          std::sqrt(3.0) / (8.0 * pi)) == 2);
    // bimodal at t = 2: a level just below the summits crosses four times
    CHECK(level_crossings(mu, ProcessKind::FreeSemicircle, 2.0, 0.177) == 4);
    // a point mass at its exact peak level touches once
    CHECK(level_crossings(NamedMeasure::point_mass(0.0), ProcessKind::FreeSemicircle, 1.0,
                          1.0 / pi) == 1);
}

TEST_CASE("level crossings for a kernel density") {
    const auto mu = ProbabilityMeasure(NamedMeasure::bernoulli(1.0));
    ConvolvedDensity cd(mu, ProcessKind::ClassicalGaussian, 0.25);
    const double peak = density(cd, -0.9993256730151082);
    const double valley = density(cd, 0.0);
    CHECK(level_crossings(mu, ProcessKind::ClassicalGaussian, 0.25,
                          0.5 * (peak + valley)) == 4);
    CHECK(level_crossings(mu, ProcessKind::ClassicalGaussian, 0.25, 0.5 * valley) == 2);
    CHECK(level_crossings(mu, ProcessKind::ClassicalGaussian, 0.25, 2.0 * peak) == 0);
}

TEST_CASE("critical times of the two-atom measure under each process") {
    const auto mu = ProbabilityMeasure(NamedMeasure::bernoulli(1.0));
    {
        const auto r = critical_time(mu, ProcessKind::FreeSemicircle, 0.5, 16.0, 1e-3);
        CHECK(std::fabs(r.t_star - 4.0) <= 1e-3);
        CHECK(r.monotone_verified);
    }
    {
        const auto r = critical_time(mu, ProcessKind::ClassicalGaussian, 0.1, 4.0, 1e-3);
        CHECK(std::fabs(r.t_star - 1.0) <= 1e-3);
        CHECK(r.monotone_verified);
    }
    {
        const auto r = critical_time(mu, ProcessKind::Cauchy, 0.5, 4.0, 1e-3);
        CHECK(std::fabs(r.t_star - std::sqrt(3.0)) <= 1e-3);
        CHECK(r.monotone_verified);
    }
}

TEST_CASE("critical time rejects a bracket without a verdict flip") {
    const auto mu = ProbabilityMeasure(NamedMeasure::bernoulli(1.0));
    CHECK_THROWS_AS(critical_time(mu, ProcessKind::FreeSemicircle, 5.0, 16.0, 1e-3),
                    ValidationError);
}

TEST_CASE("derivative and profile scans agree on kernel densities") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> ut(0.2, 3.0);
    std::uniform_int_distribution<int> nk(2, 5);
    for (int fix = 0; fix < 30; ++fix) {
        const auto mu = testutil::random_atomic(rng, nk(rng), 0.0, 1.0);
        const ProcessKind kind =
            fix % 2 == 0 ? ProcessKind::ClassicalGaussian : ProcessKind::Cauchy;
        const double t = ut(rng);
        const auto rep = analyze_modality(mu, kind, t);

        // rebuild the verdict from a dense density tabulation
        ConvolvedDensity cd(mu, kind, t);
        const Window w = default_window(cd);
        DensityProfile prof;
        prof.kind = kind;
        prof.t = t;
        const int n = 6001;
        for (int i = 0; i <= n; ++i) {
            const double x = w.lo + (w.hi - w.lo) * i / n;
            prof.x.push_back(x);
            prof.p.push_back(density(cd, x));
        }
        const auto prep = count_modes_profile(prof);
        CHECK(rep.mode_count == prep.mode_count);
    }
}

TEST_CASE("unimodal verdicts imply at most two crossings per level") {
    const auto mu = ProbabilityMeasure(NamedMeasure::bernoulli(1.0));
    // unimodal fixture
    ConvolvedDensity uni(mu, ProcessKind::ClassicalGaussian, 2.0);
    const double upeak = density(uni, 0.0);
    for (int i = 1; i <= 10; ++i) {
        const int c =
            level_crossings(mu, ProcessKind::ClassicalGaussian, 2.0, upeak * i / 11.0);
        CHECK(c <= 2);
    }
    // bimodal fixture: some level must cross at least three times
    ConvolvedDensity bi(mu, ProcessKind::ClassicalGaussian, 0.25);
    const double bpeak = density(bi, -0.9993256730151082);
    int best = 0;
    for (int i = 1; i <= 10; ++i) {
        best = std::max(best, level_crossings(mu, ProcessKind::ClassicalGaussian, 0.25,
                                              bpeak * i / 11.0));
    }
    CHECK(best >= 3);
}

TEST_CASE("symmetric unimodal inputs stay unimodal under the free evolution") {
    const ProbabilityMeasure mus[] = {
        ProbabilityMeasure(NamedMeasure::uniform(-1.0, 1.0)),
        ProbabilityMeasure(NamedMeasure::triangle(-1.0, 0.0, 1.0)),
    };
    // log-spaced sample of the full acceptance grid
    for (const auto& mu : mus) {
        for (double t : {0.01, 0.1, 1.0, 10.0, 100.0}) {
            const auto rep = analyze_modality(mu, ProcessKind::FreeSemicircle, t);
            CHECK(rep.unimodal);
        }
    }
}

TEST_CASE("gridded initial data through the kernel scan") {
    // a unimodal continuous start stays unimodal under the gaussian kernel
    {
        const auto rep =
            analyze_modality(NamedMeasure::triangle(-1.0, 0.0, 1.0), ProcessKind::ClassicalGaussian,
                             0.5);
        CHECK(rep.unimodal);
    }
    // two separated ramps keep two modes at small t and merge at large t
    GriddedDensityMeasure bumps({-3.0, -2.0, -1.0, 1.0, 2.0, 3.0},
                                {0.0, 1.0, 0.0, 0.0, 1.0, 0.0});
    {
        const auto rep = analyze_modality(bumps, ProcessKind::ClassicalGaussian, 0.05);
        CHECK(rep.mode_count == 2);
        CHECK(rep.unimodal == false);
    }
    {
        const auto rep = analyze_modality(bumps, ProcessKind::ClassicalGaussian, 50.0);
        CHECK(rep.unimodal);
    }
}

TEST_CASE("mode counts are stable under grid refinement") {
    const auto mu = ProbabilityMeasure(NamedMeasure::bernoulli(1.0));
    const struct {
        ProcessKind kind;
        double t;
    } fixtures[] = {
        {ProcessKind::ClassicalGaussian, 0.25},
        {ProcessKind::ClassicalGaussian, 4.0},
        {ProcessKind::Cauchy, 1.0},
        {ProcessKind::Cauchy, 3.0},
        {ProcessKind::LevyHalf, 1.0},
    };
    for (const auto& f : fixtures) {
        ModalityOptions coarse, fine;
        coarse.grid_size = 4096;
        fine.grid_size = 8192;
        coarse.profile_points = 1025;
        fine.profile_points = 2049;
        CHECK(analyze_modality(mu, f.kind, f.t, coarse).mode_count ==
              analyze_modality(mu, f.kind, f.t, fine).mode_count);
    }
}

TEST_CASE("mode location bound check") {
    // symmetric two-atom data: mode at 0, well inside the bound
    CHECK(mode_location_bound_check(NamedMeasure::bernoulli(1.0),
                                    36.0 * std::log(2.0 * std::exp(1.0))));
    CHECK(mode_location_bound_check(NamedMeasure::point_mass(0.0), 1.0));
    // asymmetric three-atom fixture at its tail-functional threshold
    const auto mu = ProbabilityMeasure(AtomicMeasure({-0.5, 0.5, 0.6}, {0.4, 0.3, 0.3}));
    const double alpha = gaussian_tail_functional(mu, 1.0);
    CHECK(mode_location_bound_check(mu, 36.0 * std::log(2.0 * alpha)));
}
