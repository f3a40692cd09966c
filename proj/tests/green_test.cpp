#include <cmath>
#include <complex>
#include <numbers>

#include <gtest/gtest.h>

#include "green_quadrature.hpp"
#include "pathamp/green.hpp"

using namespace pathamp;
using namespace pathamp::green;
constexpr double pi = std::numbers::pi;

TEST(Kernels, HandEvaluation) {
    const GreenKernels g(1.0, 2.0, 0.5);
    // denominator 0.25 - 1 = -0.75
    EXPECT_NEAR(g.a_of_omega(1.0), 4.0 / 3.0, 1e-15);
    EXPECT_NEAR(g.b_of_omega(1.0), -2.0 / 3.0, 1e-15);
}

TEST(Kernels, Resonance) {
    const GreenKernels g(1.0, 4.0, 0.5);
    EXPECT_EQ(g.a_of_omega(2.0), 0.0);
    EXPECT_DOUBLE_EQ(g.b_of_omega(2.0), 2.0);
}

TEST(Kernels, ZeroCouplingLimit) {
    const GreenKernels g(1.5, 2.0, 0.0);
    for (double w : {0.3, 0.9, 2.5}) {
        EXPECT_EQ(g.b_of_omega(w), 0.0);
        EXPECT_NEAR(g.a_of_omega(w), -1.0 / (w * w * 1.5 - 2.0), 1e-14);
    }
}

TEST(Kernels, EvenInOmega) {
    const GreenKernels g(1.0, 2.0, 0.5);
    for (double w = 0.05; w < 5.0; w += 0.1) {
        EXPECT_EQ(g.a_of_omega(w), g.a_of_omega(-w));
        EXPECT_EQ(g.b_of_omega(w), g.b_of_omega(-w));
    }
}

TEST(Kernels, PolesAtNormalModes) {
    const auto g = freq_kernels(make_pair_network(1.0, 2.0, 0.5));
    EXPECT_DOUBLE_EQ(g.omega_minus_sq(), 1.5);
    EXPECT_DOUBLE_EQ(g.omega_plus_sq(), 2.5);
    EXPECT_THROW(g.a_of_omega(std::sqrt(1.5)), PoleAtEvaluation);
    EXPECT_THROW(g.b_of_omega(-std::sqrt(2.5)), PoleAtEvaluation);
    OscillatorNetwork one;
    EXPECT_THROW(freq_kernels(one), ValidationError);
}

TEST(TimeDomain, SymmetricAndEven) {
    const auto net = make_pair_network(1.0, 2.0, 0.5);
    for (double tau = -5.0; tau <= 5.0; tau += 0.25) {
        const auto d = time_domain_green(net, tau);
        const auto dm = time_domain_green(net, -tau);
        EXPECT_EQ(d(0, 1), d(1, 0));
        EXPECT_EQ(d(0, 0), d(1, 1));
        EXPECT_EQ(d(0, 0), dm(0, 0));
        EXPECT_EQ(d(0, 1), dm(0, 1));
    }
}

TEST(TimeDomain, DegenerateWithoutCoupling) {
    const auto net = make_pair_network(1.0, 2.0, 0.0);
    const auto d = time_domain_green(net, 0.7);
    EXPECT_TRUE(d.degenerate);
    EXPECT_EQ(d(0, 1), cplx(0.0));
    EXPECT_NEAR(std::abs(d(0, 0) - feynman_mode(2.0, 0.7)), 0.0, 1e-15);
}

TEST(TimeDomain, UnstableModeReported) {
    EXPECT_THROW(time_domain_green(make_pair_network(1.0, 2.0, 2.0), 0.1), UnstableMode);
    EXPECT_THROW(time_domain_green(make_pair_network(1.0, 2.0, -3.0), 0.1), UnstableMode);
}

TEST(TimeDomain, MatchesDampedFrequencyQuadrature) {
    const auto net = make_pair_network(1.0, 2.0, 0.5);
    const testsupport::GreenQuadrature quad{1.0, 2.0, 0.5, 1e-3, 200.0};
    for (double tau : {-4.7, -1.3, 0.0, 0.4, 1.3, 3.9}) {
        const auto d = time_domain_green(net, tau, 1e-3);
        EXPECT_LE(std::abs(d(0, 0) - quad(0, tau)), 1e-3) << tau;
        EXPECT_LE(std::abs(d(0, 1) - quad(1, tau)), 1e-3) << tau;
    }
}

TEST(GreenResidual, ZeroSourceGivesZero) {
    const auto net = make_pair_network(1.0, 2.0, 0.5);
    SourcePulse zero{[](double) { return 0.0; }, [](double) { return 0.0; }, -1.0, 1.0};
    ResidualGrid grid;
    grid.samples = 11;
    EXPECT_EQ(green_residual(net, zero, grid), 0.0);
}

TEST(GreenResidual, GaussianPulseSolvesEquation) {
    const auto net = make_pair_network(1.0, 2.0, 0.5);
    EXPECT_LE(green_residual(net, gaussian_pulse(0.0, 0.25, true, false)), 1e-3);
}

TEST(GreenResidual, SymmetricSourceGivesEqualResponse) {
    const auto net = make_pair_network(1.0, 2.0, 0.5);
    const auto src = gaussian_pulse(0.3, 0.2, true, true);
    for (double t : {-2.0, 0.0, 0.3, 1.7}) {
        const auto q = green_response(net, src, t);
        EXPECT_EQ(q[0], q[1]);
    }
}

TEST(PairwisePhase, Anchors) {
    const auto net = make_pair_network(1.0, 2.0, 0.5);
    EXPECT_NEAR(pairwise_phase({1.0, 1.0, 1.0}, net), -1.0 / (3.0 * pi), 1e-15);
    EXPECT_EQ(pairwise_phase({1.0, 1.0, 0.0}, net), 0.0);
    // omega0^2 m = k
    const double k12 = 0.5, gamma = 1.7, j2 = 0.9;
    EXPECT_NEAR(pairwise_phase({gamma, std::sqrt(2.0), j2}, net), gamma * j2 / (2.0 * pi * k12), 1e-14);
}

TEST(PairwisePhase, LinearInGammaAndImpulse) {
    const auto net = make_pair_network(1.0, 2.0, 0.5);
    const double base = pairwise_phase({0.8, 1.1, 0.6}, net, 1.3);
    for (double s : {2.0, 3.0, -1.0}) {
        EXPECT_NEAR(pairwise_phase({0.8 * s, 1.1, 0.6}, net, 1.3), s * base, 1e-15);
        EXPECT_NEAR(pairwise_phase({0.8, 1.1, 0.6 * s}, net, 1.3), s * base, 1e-15);
    }
}

TEST(PairwisePhase, SelfTermsUseDiagonalKernel) {
    const auto net = make_pair_network(1.0, 2.0, 0.5);
    const SelfTerms self{0.4, 0.7};
    const double plain = pairwise_phase({1.0, 1.0, 1.0}, net);
    const double with = pairwise_phase({1.0, 1.0, 1.0}, net, 1.0, self);
    EXPECT_NEAR(with - plain, (4.0 / 3.0) * (0.4 + 0.7) / (4.0 * pi), 1e-15);
}

TEST(PairwisePhase, ResonantCouplingRejected) {
    // k12^2 = (omega0^2 m - k)^2 at omega0 = 1, m = 1, k = 1.5, k12 = 0.5
    EXPECT_THROW(pairwise_phase({1.0, 1.0, 1.0}, make_pair_network(1.0, 1.5, 0.5)), ResonantCoupling);
    EXPECT_THROW(pairwise_phase({1.0, 0.0, 1.0}, make_pair_network(1.0, 1.5, 0.5)), ValidationError);
}
