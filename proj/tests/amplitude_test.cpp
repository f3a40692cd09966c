#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "pathamp/amplitude.hpp"

using namespace pathamp;
constexpr double pi = std::numbers::pi;

TEST(WrapPhase, LandsInHalfOpenInterval) {
    EXPECT_DOUBLE_EQ(wrap_phase(0.0), 0.0);
    EXPECT_DOUBLE_EQ(wrap_phase(pi), pi);
    EXPECT_DOUBLE_EQ(wrap_phase(-pi), pi);
    EXPECT_NEAR(wrap_phase(3.0 * pi), pi, 1e-15);
    EXPECT_NEAR(wrap_phase(2.5 * pi), 0.5 * pi, 1e-15);
    EXPECT_NEAR(wrap_phase(-2.5 * pi), -0.5 * pi, 1e-15);
    for (double x = -50.0; x < 50.0; x += 0.37) {
        const double w = wrap_phase(x);
        EXPECT_GT(w, -pi);
        EXPECT_LE(w, pi);
        EXPECT_NEAR(std::remainder(w - x, 2.0 * pi), 0.0, 1e-12);
    }
}

TEST(Amplitude, ComplexRoundTrip) {
    const cplx z{-3.0, 4.0};
    const auto a = Amplitude::from_complex(z);
    EXPECT_NEAR(a.log_magnitude, std::log(5.0), 1e-15);
    EXPECT_NEAR(std::abs(a.to_complex() - z), 0.0, 1e-14);
}

TEST(Amplitude, ProductAddsLogsAndPhases) {
    const auto a = Amplitude::from_log_phase(1.5, 2.0);
    const auto b = Amplitude::from_log_phase(-0.5, 2.0);
    const auto c = a * b;
    EXPECT_DOUBLE_EQ(c.log_magnitude, 1.0);
    EXPECT_NEAR(c.phase, 4.0 - 2.0 * pi, 1e-15);
    EXPECT_NEAR(std::abs(c.to_complex() - a.to_complex() * b.to_complex()), 0.0, 1e-13);
}

TEST(Amplitude, LargeLogMagnitudeStaysFinite) {
    const auto a = Amplitude::from_log_phase(5000.0, 0.1);
    EXPECT_TRUE(std::isfinite(a.log_magnitude));
    EXPECT_TRUE(std::isinf(a.magnitude()));
}

TEST(PhaseDistance, WrapsAcrossBranchCut) {
    EXPECT_NEAR(phase_distance(pi - 1e-3, -pi + 1e-3), 2e-3, 1e-12);
    EXPECT_NEAR(phase_distance(0.25, -0.25), 0.5, 1e-15);
}
