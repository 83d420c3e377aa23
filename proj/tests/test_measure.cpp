#include "ulab/measure.hpp"

#include "ulab/errors.hpp"
#include "ulab/measure_io.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace ulab;

TEST_CASE("atomic construction sorts, merges and renormalizes") {
    AtomicMeasure m({3.0, 1.0, 3.0}, {0.25, 0.5, 0.25});
    CHECK(m.atoms() == std::vector<double>{1.0, 3.0});
    CHECK(m.weights()[0] == doctest::Approx(0.5));
    CHECK(m.weights()[1] == doctest::Approx(0.5));

    // in-band weight sums renormalize silently
    AtomicMeasure band({0.0, 1.0}, {0.4996, 0.4999});
    CHECK(band.weights()[0] + band.weights()[1] == doctest::Approx(1.0).epsilon(1e-14));

    CHECK_THROWS_AS(AtomicMeasure({0.0}, {0.9}), ValidationError);
    CHECK_THROWS_AS(AtomicMeasure({0.0, 1.0}, {1.2, -0.2}), ValidationError);
    CHECK_THROWS_AS(AtomicMeasure({}, {}), ValidationError);
}

TEST_CASE("gridded construction validates and renormalizes to unit mass") {
    GriddedDensityMeasure g({0.0, 1.0, 2.0}, {1.0, 3.0, 1.0});
    double mass = 0.0;
    for (std::size_t i = 0; i + 1 < g.grid().size(); ++i) {
        mass += 0.5 * (g.values()[i] + g.values()[i + 1]) * (g.grid()[i + 1] - g.grid()[i]);
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-15));

    CHECK_THROWS_AS(GriddedDensityMeasure({0.0, 0.0}, {1.0, 1.0}), ValidationError);
    CHECK_THROWS_AS(GriddedDensityMeasure({0.0, 1.0}, {1.0, -1.0}), ValidationError);
    CHECK_THROWS_AS(GriddedDensityMeasure({0.0, 1.0}, {0.0, 0.0}), ValidationError);
}

TEST_CASE("diameter") {
    CHECK(diameter(NamedMeasure::bernoulli(1.0)) == doctest::Approx(2.0));
    CHECK(diameter(NamedMeasure::point_mass(5.0)) == 0.0);
    CHECK(diameter(AtomicMeasure({0.0, 3.0, 7.0}, {0.2, 0.3, 0.5})) == doctest::Approx(7.0));
    CHECK(diameter(NamedMeasure::uniform(-1.0, 1.0)) == doctest::Approx(2.0));
    CHECK(diameter(NamedMeasure::semicircle(1.0)) == doctest::Approx(4.0));
    // zero-padded grids do not enlarge the support
    GriddedDensityMeasure padded({-5.0, -1.0, 0.0, 1.0, 5.0}, {0.0, 0.0, 1.0, 0.0, 0.0});
    CHECK(diameter(padded) == doctest::Approx(2.0));
}

TEST_CASE("gaussian tail functional") {
    CHECK(gaussian_tail_functional(NamedMeasure::bernoulli(1.0), 1.0) ==
          doctest::Approx(std::exp(1.0)).epsilon(1e-12));
    CHECK(gaussian_tail_functional(NamedMeasure::point_mass(0.0), 3.7) == doctest::Approx(1.0));

    // independent oracle: high-resolution Simpson integration of (1/2) e^{x^2}
    const double oracle =
        testutil::simpson([](double x) { return 0.5 * std::exp(x * x); }, -1.0, 1.0, 20000);
    const double impl = gaussian_tail_functional(NamedMeasure::uniform(-1.0, 1.0), 1.0);
    CHECK(impl == doctest::Approx(oracle).epsilon(1e-10));
    CHECK(impl == doctest::Approx(1.4626517459071816).epsilon(1e-9));

    CHECK_THROWS_AS(gaussian_tail_functional(NamedMeasure::point_mass(0.0), 0.0), ValidationError);

    // semicircle variant goes through the same quadrature path; the oracle
    // substitutes x = 2 sin(theta) so the root-type edges become smooth
    const ProbabilityMeasure sc = NamedMeasure::semicircle(1.0);
    const double pi_ = 3.14159265358979323846;
    const double sc_oracle = testutil::simpson(
        [&](double th) {
            const double x = 2.0 * std::sin(th);
            const double c = 2.0 * std::cos(th);
            return std::exp(0.5 * x * x) * c * c / (2.0 * pi_);
        },
        -pi_ / 2.0, pi_ / 2.0, 20000);
    CHECK(gaussian_tail_functional(sc, 0.5) == doctest::Approx(sc_oracle).epsilon(1e-9));
}

TEST_CASE("absolute moments") {
    CHECK(abs_moment(NamedMeasure::bernoulli(1.0), 3.0) == doctest::Approx(1.0));
    CHECK(abs_moment(NamedMeasure::point_mass(2.0), 3.0) == doctest::Approx(8.0));
    CHECK(abs_moment(NamedMeasure::uniform(0.0, 2.0), 3.0) == doctest::Approx(2.0).epsilon(1e-10));
    // kink at zero is split internally
    CHECK(abs_moment(NamedMeasure::uniform(-1.0, 1.0), 1.0) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("total mass is 1 for every variant") {
    const ProbabilityMeasure fixtures[] = {
        AtomicMeasure({-1.0, 0.5, 2.0}, {0.3, 0.3, 0.4}),
        GriddedDensityMeasure({-2.0, 0.0, 1.0}, {0.0, 2.0, 1.0}),
        NamedMeasure::bernoulli(1.5),
        NamedMeasure::point_mass(-3.0),
        NamedMeasure::uniform(0.0, 4.0),
        NamedMeasure::triangle(-1.0, 0.0, 1.0),
        NamedMeasure::semicircle(2.0),
    };
    for (const auto& mu : fixtures) {
        CHECK(mu.total_mass() == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("diameter is translation invariant") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> shift(-50.0, 50.0);
    const ProbabilityMeasure fixtures[] = {
        AtomicMeasure({-1.0, 0.5, 2.0}, {0.3, 0.3, 0.4}),
        NamedMeasure::uniform(-1.0, 3.0),
        NamedMeasure::triangle(0.0, 1.0, 4.0),
        NamedMeasure::semicircle(1.0),
    };
    for (const auto& mu : fixtures) {
        const double d0 = diameter(mu);
        for (int i = 0; i < 20; ++i) {
            const double c = shift(rng);
            CHECK(diameter(mu.shifted(c)) == doctest::Approx(d0).epsilon(1e-9));
        }
    }
}

TEST_CASE("gaussian tail functional is monotone in eps") {
    const ProbabilityMeasure fixtures[] = {
        ProbabilityMeasure(AtomicMeasure({-1.0, 0.5, 2.0}, {0.3, 0.3, 0.4})),
        ProbabilityMeasure(NamedMeasure::uniform(-1.0, 1.0)),
    };
    for (const auto& mu : fixtures) {
        double prev = 0.0;
        for (int i = 1; i <= 10; ++i) {
            const double v = gaussian_tail_functional(mu, 0.1 * i);
            CHECK(v >= prev);
            prev = v;
        }
    }
}

TEST_CASE("abs_moment is monotone in p when the support avoids (-1, 1)") {
    AtomicMeasure mu({-3.0, 1.5, 4.0}, {0.25, 0.5, 0.25});
    double prev = 0.0;
    for (int i = 1; i <= 8; ++i) {
        const double v = abs_moment(mu, 0.5 * i);
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("measure JSON parsing") {
    const auto b = parse_measure(R"({"type":"bernoulli","a":1})");
    CHECK(b.as_named() != nullptr);
    CHECK(b.atom_positions() == std::vector<double>{-1.0, 1.0});

    const auto a = parse_measure(R"({"type":"atomic","atoms":[0,1],"weights":[0.5,0.5]})");
    CHECK(a.as_atomic() != nullptr);

    CHECK_THROWS_AS(parse_measure(R"({"type":"atomic","atoms":[0],"weights":[0.9]})"),
                    ValidationError);
    CHECK_THROWS_AS(parse_measure(R"({"type":"atomic","atoms":[0],"weights":["x"]})"),
                    ValidationError);
    CHECK_THROWS_AS(parse_measure("not json"), ValidationError);
    CHECK_THROWS_AS(parse_measure(R"({"type":"spiral","a":1})"), ValidationError);
    CHECK_THROWS_AS(parse_measure(R"({"type":"uniform","l":2,"r":1})"), ValidationError);

    const auto g = parse_measure(R"({"type":"density","grid":[0,1,2],"values":[0,1,0]})");
    CHECK(g.as_gridded() != nullptr);
    CHECK(g.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("measure JSON round-trips") {
    const ProbabilityMeasure fixtures[] = {
        AtomicMeasure({0.1234567890123456, 7.0}, {0.25, 0.75}),
        NamedMeasure::triangle(-1.0, 0.25, 2.0),
        NamedMeasure::semicircle(0.7),
        GriddedDensityMeasure({-1.0, 0.0, 2.0}, {0.0, 1.0, 0.5}),
    };
    for (const auto& mu : fixtures) {
        const auto back = parse_measure(measure_to_json(mu));
        CHECK(back.atom_positions() == mu.atom_positions());
        CHECK(back.atom_weights() == mu.atom_weights());
        REQUIRE(back.has_continuous_part() == mu.has_continuous_part());
        if (mu.has_continuous_part()) {
            CHECK(back.support_min() == mu.support_min());
            CHECK(back.support_max() == mu.support_max());
            CHECK(back.density_value(0.3) == doctest::Approx(mu.density_value(0.3)));
        }
    }
}

TEST_CASE("dilation rescales supports and critical functionals") {
    const auto mu = ProbabilityMeasure(NamedMeasure::bernoulli(1.0));
    CHECK(diameter(mu.dilated(2.0)) == doctest::Approx(4.0));
    CHECK(diameter(mu.dilated(0.5)) == doctest::Approx(1.0));
    const auto semi = ProbabilityMeasure(NamedMeasure::semicircle(1.0)).dilated(2.0);
    CHECK(diameter(semi) == doctest::Approx(8.0));  // variance scales by c^2
    CHECK_THROWS_AS(mu.dilated(-1.0), ValidationError);
}
