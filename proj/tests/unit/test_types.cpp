#include <doctest.h>

#include <cmath>

#include "ringbec/rng.hpp"
#include "ringbec/types.hpp"

using namespace ringbec;

TEST_CASE("derive_epsilon") {
    CHECK(derive_epsilon(0.0, 100.0) == 0.0);
    CHECK(derive_epsilon(4 * pi, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(derive_epsilon(0.2655, 2 * 47.3) == doctest::Approx(2.0).epsilon(2e-3));
    CHECK_THROWS_WITH(derive_epsilon(-1.0, 10.0), "attractive interaction unsupported");
    CHECK(gamma_for_epsilon(derive_epsilon(0.37, 123.0), 123.0) == doctest::Approx(0.37).epsilon(1e-14));
}

TEST_CASE("validate_config") {
    RunConfig c;
    c.epsilon = 2.0;
    SUBCASE("defaults accepted") {
        const auto v = validate_config(c);
        CHECK(v.m_max() == 15);
        CHECK(v.seed_mode_cutoff() == 5);
        CHECK(v.fluctuation_scale() == doctest::Approx(std::sqrt(c.n0)));
        CHECK(derive_epsilon(v.gamma(), 2 * v.n0()) == doctest::Approx(2.0).epsilon(1e-14));
    }
    SUBCASE("cutoff above truncation") {
        c.m_max = 3;
        CHECK_THROWS_AS(validate_config(c), ConfigError);
    }
    SUBCASE("attractive") {
        c.epsilon = -1.0;
        CHECK_THROWS_AS(validate_config(c), ConfigError);
    }
    SUBCASE("gamma authoritative") {
        c.epsilon.reset();
        c.gamma = 0.01;
        c.n0 = 500;
        CHECK(validate_config(c).epsilon() == doctest::Approx(0.01 * 1000 / (4 * pi)));
    }
    SUBCASE("inconsistent pair") {
        c.gamma = 1.0;
        CHECK_THROWS_AS(validate_config(c), ConfigError);
    }
    SUBCASE("all violations reported") {
        c.epsilon = -1.0;
        c.m_max = 0;
        c.n0 = -5;
        c.integrator.dt = 0;
        try {
            validate_config(c);
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(e.errors().size() >= 4);
        }
    }
}

TEST_CASE("ModeState invariants") {
    ModeState s(4);
    CHECK(s.size() == 9);
    CHECK(s.ring(Ring::upper).size() == 9);
    CHECK_THROWS(s.check());  // zero norm
    s.at(Ring::lower, -4) = {1, 1};
    CHECK(s.total_norm() == 2.0);
    CHECK_NOTHROW(s.check());
    CHECK_THROWS_AS(s.at(Ring::upper, 5), std::out_of_range);
    s.at(Ring::upper, 0) = {NAN, 0};
    CHECK_THROWS(s.check());
    CHECK_THROWS(ModeState(0));
}

TEST_CASE("RngStream") {
    // Reference value of the splitmix64 generator seeded with 0.
    RngStream a(0);
    CHECK(a.next_u64() == 0xE220A8397B1DCDAFULL);

    RngStream x(42), y(42), z(43);
    for (int i = 0; i < 100; ++i) {
        const auto v = x.next_u64();
        CHECK(v == y.next_u64());
        CHECK(v != z.next_u64());
    }
    RngStream u(7);
    double mean = 0, var = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double g = u.normal();
        mean += g / n;
        var += g * g / n;
    }
    CHECK(std::abs(mean) < 0.01);
    CHECK(std::abs(var - 1.0) < 0.02);
    for (int i = 0; i < 1000; ++i) {
        const double r = u.uniform();
        CHECK((r >= 0.0 && r < 1.0));
    }
}
