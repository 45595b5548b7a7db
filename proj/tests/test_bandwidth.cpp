#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "modeseek/bandwidth.hpp"

#include <cmath>

using namespace modeseek;

TEST_CASE("phi point values") {
    CHECK(phi(KernelProfile::gaussian(), 0.7) == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(phi(KernelProfile::laplace(2.0), 0.25) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(phi(KernelProfile::cauchy_alpha(0.4), 1.0) ==
          doctest::Approx(2.0 * 0.4 * (1.0 - 0.4 + 1.0) / 2.0).epsilon(1e-14));
    CHECK_THROWS(phi(KernelProfile::gaussian(), 0.0));
}

TEST_CASE("phi agrees with -2q k''/k' where the closed forms coincide") {
    // Holds exactly for Gaussian, Laplace and StretchedExp; the CauchyType
    // threshold function is a distinct closed form (see solve_h0 docs).
    const KernelProfile profiles[] = {KernelProfile::gaussian(), KernelProfile::laplace(0.5),
                                      KernelProfile::laplace(2.0),
                                      KernelProfile::stretched_exp(1.0, 0.75),
                                      KernelProfile::stretched_exp(0.7, 0.3)};
    for (const auto& profile : profiles) {
        for (double q = 1e-8; q <= 1e4; q *= 10.0) {
            const double g = eval_g(profile, q);
            if (g < 1e-300) continue; // exp underflow, ratio is 0/0
            const double ratio = 2.0 * q * eval_k2(profile, q) / g;
            CHECK(phi(profile, q) == doctest::Approx(ratio).epsilon(1e-12));
        }
    }
}

TEST_CASE("phi limits as q -> 0") {
    CHECK(std::abs(phi(KernelProfile::gaussian(), 1e-9) - 0.0) <= 1e-3);
    CHECK(std::abs(phi(KernelProfile::laplace(1.0), 1e-9) - 1.0) <= 1e-3);
}

TEST_CASE("gaussian threshold has the closed-form root") {
    for (double xmax : {0.1, 1.0, 3.537642, 100.0}) {
        const auto report = solve_h0(KernelProfile::gaussian(), xmax);
        REQUIRE(report.classification == ThresholdClass::FiniteRoot);
        CHECK(std::abs(*report.q0 - 1.0) <= 1e-9);
        CHECK(std::abs(*report.h0 - 2.0 * xmax) <= 1e-9 * xmax);
        CHECK(std::abs(phi(KernelProfile::gaussian(), *report.q0) - 1.0) <= 1e-10);
    }
}

TEST_CASE("degenerate xmax") {
    const auto report = solve_h0(KernelProfile::gaussian(), 0.0);
    REQUIRE(report.classification == ThresholdClass::FiniteRoot);
    CHECK(*report.h0 == 0.0);
}

TEST_CASE("laplace never satisfies the condition") {
    for (double lambda : {0.5, 1.0, 2.0}) {
        const auto report = solve_h0(KernelProfile::laplace(lambda), 1.0);
        CHECK(report.classification == ThresholdClass::ConditionNeverHolds);
        CHECK(!report.q0.has_value());
        CHECK(report.phi_samples.size() == 181);
        for (const auto& [q, value] : report.phi_samples) CHECK(value > 1.0);
    }
}

TEST_CASE("cauchy-type condition holds everywhere when 2*alpha < 1") {
    for (double p : {1.2, 1.5, 1.99}) {
        const auto report = solve_h0(KernelProfile::cauchy_from_p(p), 2.0);
        CHECK(report.classification == ThresholdClass::ConditionAlwaysHolds);
        for (const auto& [q, value] : report.phi_samples) CHECK(value < 1.0);
    }
    const auto alpha03 = solve_h0(KernelProfile::cauchy_alpha(0.3), 5.0);
    CHECK(alpha03.classification == ThresholdClass::ConditionAlwaysHolds);
}

TEST_CASE("stretched exponential roots for alpha > 1/2") {
    // phi = 2(1-a) + 2 l a q^a crosses 1 at q0 = ((2a-1)/(2 l a))^(1/a).
    const double lambda = 1.0, alpha = 0.75;
    const auto report = solve_h0(KernelProfile::stretched_exp(lambda, alpha), 1.5);
    REQUIRE(report.classification == ThresholdClass::FiniteRoot);
    const double expected = std::pow((2 * alpha - 1) / (2 * lambda * alpha), 1.0 / alpha);
    CHECK(*report.q0 == doctest::Approx(expected).epsilon(1e-9));
    CHECK(*report.h0 == doctest::Approx(2.0 * 1.5 / std::sqrt(expected)).epsilon(1e-9));

    const auto low_alpha = solve_h0(KernelProfile::stretched_exp(1.0, 0.3), 1.0);
    CHECK(low_alpha.classification == ThresholdClass::ConditionNeverHolds);
}

TEST_CASE("finite roots are genuine crossings") {
    for (const auto& profile :
         {KernelProfile::gaussian(), KernelProfile::stretched_exp(1.0, 0.75),
          KernelProfile::stretched_exp(0.2, 0.9), KernelProfile::cauchy_alpha(0.75)}) {
        const auto report = solve_h0(profile, 1.0);
        REQUIRE(report.classification == ThresholdClass::FiniteRoot);
        const double q0 = *report.q0;
        const bool forward = phi(profile, q0 / 2) < 1.0 && 1.0 < phi(profile, 2 * q0);
        const bool reverse = phi(profile, q0 / 2) > 1.0 && 1.0 > phi(profile, 2 * q0);
        CHECK((forward || reverse));
    }
}
