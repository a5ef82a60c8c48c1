#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <hmmeq/equivalence.hpp>
#include <hmmeq/simulate.hpp>

#include "support/models.hpp"
#include "support/properties.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <cmath>

using namespace hmmeq;
using namespace testsupport;

namespace {

double sample_mean_of_profile(const ProfileExpr& p, int n, std::uint64_t seed) {
    Rng rng(seed);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += std::get<double>(sample_observation(p, rng));
    return sum / n;
}

}  // namespace

TEST_CASE("sampling Exp(2) matches its mean within 3 sigma") {
    const int n = 100000;
    const double mean = sample_mean_of_profile(exponential_profile(2), n, 11);
    const double tol = 3.0 * 0.5 / std::sqrt(static_cast<double>(n));  // sd of Exp(2) is 1/2
    CHECK(std::abs(mean - 0.5) < tol);
}

TEST_CASE("sampling U(-1,0) matches its mean within 3 sigma") {
    const int n = 100000;
    const double mean = sample_mean_of_profile(uniform_profile(-1, 0), n, 12);
    const double tol = 3.0 / (std::sqrt(12.0) * std::sqrt(static_cast<double>(n)));
    CHECK(std::abs(mean + 0.5) < tol);
}

TEST_CASE("sampling the bisection path: 2e^-x - 2e^-2x") {
    const ProfileExpr p = Rational(2) * exponential_profile(1) - exponential_profile(2);
    const int n = 50000;
    // mean = int x (2e^-x - 2e^-2x) dx = 2 - 1/2 = 3/2
    const double mean = sample_mean_of_profile(p, n, 13);
    CHECK(std::abs(mean - 1.5) < 0.03);
    Rng rng(77);
    for (int i = 0; i < 2000; ++i) CHECK(std::get<double>(sample_observation(p, rng)) >= 0.0);
}

TEST_CASE("(X + Y) mod u is uniform on [0, u) when Y ~ U(0, u)") {
    const ProfileExpr x_density = Rational(2) * exponential_profile(1) - exponential_profile(2);
    const ProfileExpr y_density = uniform_profile(0, Rational(1, 2));
    const double u = 0.5;
    const int n = 100000, bins = 20;

    Rng rng(14);
    std::vector<long> counts(bins, 0);
    for (int i = 0; i < n; ++i) {
        const double x = std::get<double>(sample_observation(x_density, rng));
        const double y = std::get<double>(sample_observation(y_density, rng));
        const double z = std::fmod(x + y, u);
        ++counts[std::min(bins - 1, static_cast<int>(z / u * bins))];
    }
    const double expected = static_cast<double>(n) / bins;
    double stat = 0.0;
    for (long c : counts) stat += (c - expected) * (c - expected) / expected;
    boost::math::chi_squared_distribution<double> dist(bins - 1);
    CHECK(stat <= boost::math::quantile(dist, 0.99));
}

TEST_CASE("sampling refuses profiles with negative regions") {
    const ProfileExpr bad = uniform_profile(0, 1) - Rational(2) * uniform_profile(0, 1);
    Rng rng(1);
    CHECK_THROWS_AS(sample_observation(bad, rng), std::domain_error);

    std::vector<Transition> ts = {
        {0, 0, Rational(1),
         Rational(3) * uniform_profile(0, 1) - Rational(2) * uniform_profile(Rational(1, 2), 1)},
    };
    const ContinuousHMM h({"q1"}, std::move(ts));
    CHECK_THROWS_AS(sample_trace(h, InitialDistribution::dirac(1, 0), 3, 5), std::domain_error);
}

TEST_CASE("traces interleave discrete symbols and reals per the chain structure") {
    const ContinuousHMM h = make_timing(1, 2, 1, 2);
    const Trace t = sample_trace(h, InitialDistribution::dirac(6, 0), 6, 42);
    REQUIRE(t.observations.size() == 6);
    for (std::size_t i = 0; i < 6; ++i) {
        if (i % 2 == 0) {
            const std::string& sym = std::get<std::string>(t.observations[i]);
            CHECK((sym == "a" || sym == "b"));
        } else {
            CHECK(std::get_if<double>(&t.observations[i]) != nullptr);
        }
    }
}

TEST_CASE("two-sample check passes identical distributions and a golden equivalent pair") {
    const ContinuousHMM h = make_counterexample();
    const InitialDistribution pi1 = InitialDistribution::dirac(4, 0);
    const InitialDistribution pi4 = InitialDistribution::dirac(4, 3);

    TwoSampleResult same = two_sample_check(h, pi1, pi1, 3, 20000, 4, 0.01, 21);
    CHECK(same.pass);

    TwoSampleResult equivalent = two_sample_check(h, pi1, pi4, 3, 20000, 4, 0.01, 22);
    if (!equivalent.pass)  // one retry, as the oracle is stochastic
        equivalent = two_sample_check(h, pi1, pi4, 3, 20000, 4, 0.01, 23);
    CHECK(equivalent.pass);
}

TEST_CASE("two-sample check flags a perturbed non-equivalent pair") {
    // Replace the rising density on q1 -> q2 by U(0,1).
    std::vector<Transition> ts = {
        {0, 1, Rational(1, 2), uniform_profile(0, 1)},
        {0, 2, Rational(1, 2), monomial_profile(0, 0, 1, 2) - monomial_profile(1, 0, 1, 2)},
        {1, 1, Rational(1), uniform_profile(0, 2)},
        {2, 1, Rational(1), uniform_profile(0, 2)},
        {3, 1, Rational(1), uniform_profile(0, 1)},
    };
    const ContinuousHMM h({"q1", "q2", "q3", "q4"}, std::move(ts));
    CHECK_FALSE(check_continuous(h, InitialDistribution::dirac(4, 0), InitialDistribution::dirac(4, 3))
                    .equivalent);

    TwoSampleResult r = two_sample_check(h, InitialDistribution::dirac(4, 0),
                                         InitialDistribution::dirac(4, 3), 3, 20000, 4, 0.01, 31);
    if (r.pass)
        r = two_sample_check(h, InitialDistribution::dirac(4, 0), InitialDistribution::dirac(4, 3), 3,
                             20000, 4, 0.01, 32);
    CHECK_FALSE(r.pass);
}

TEST_CASE("cylinder probability integrates the worked example") {
    const ContinuousHMM h = make_def1();
    const InitialDistribution pi = InitialDistribution::dirac(2, 0);

    // Only the U(-1,0) edge puts mass below zero.
    CHECK(cylinder_probability(h, pi, {RationalInterval{Rational(-1), Rational(0)}}) ==
          doctest::Approx(0.5).epsilon(1e-12));
    // The whole line carries all mass at every step.
    CHECK(cylinder_probability(h, pi, {RationalInterval{Rational(-10000), Rational(10000)}}) ==
          doctest::Approx(1.0).epsilon(1e-9));
    CHECK(cylinder_probability(h, pi, {}) == doctest::Approx(1.0));
}

TEST_CASE("cylinder probabilities agree for a proven-equivalent pair") {
    const ContinuousHMM h = make_counterexample();
    const InitialDistribution pi1 = InitialDistribution::dirac(4, 0);
    const InitialDistribution pi4 = InitialDistribution::dirac(4, 3);
    REQUIRE(check_continuous(h, pi1, pi4).equivalent);

    const std::vector<ObservationBox> candidates = {
        RationalInterval{Rational(0), Rational(1, 2)},
        RationalInterval{Rational(1, 2), Rational(1)},
        RationalInterval{Rational(0), Rational(2)},
        RationalInterval{Rational(1), Rational(2)},
    };
    for (const auto& b1 : candidates)
        for (const auto& b2 : candidates) {
            const double d =
                std::abs(cylinder_probability(h, pi1, {b1, b2}) - cylinder_probability(h, pi4, {b1, b2}));
            CHECK(d <= 1e-9);
        }
}

TEST_CASE("property: identical seeds give identical traces") {
    auto failure = testsupport::props::seed_determinism(0x5EED, 40);
    CHECK_MESSAGE(!failure, failure.value_or(""));
}

TEST_CASE("property: cylinder probabilities over a partition sum to one") {
    auto failure = testsupport::props::cylinder_partition_sums(0xC11, 60);
    CHECK_MESSAGE(!failure, failure.value_or(""));
}

TEST_CASE("property: a non-equivalent verdict is visible in some box family") {
    auto failure = testsupport::props::cylinder_separates_nonequivalent(0xB0C5, 40);
    CHECK_MESSAGE(!failure, failure.value_or(""));
}
