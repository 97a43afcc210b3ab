#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qbath/circuit.hpp"

using namespace qbath;
using namespace qbath::circuit;

namespace {

CircuitSpec ladder(double C, std::size_t N, Termination t = Termination::Open) {
    CircuitSpec s;
    s.L = 1.0;
    s.C = C;
    s.Cg = 1.0;
    s.N = N;
    s.termination = t;
    return s;
}

// Semi-infinite ladder: Z = a + bZ/(b + Z) with a the junction impedance and b the
// ground capacitor, i.e. Z^2 - aZ - ab = 0; the physical root has Re >= 0 limit.
cplx fixed_point(const CircuitSpec& s, double w) {
    const cplx a = junction_impedance(s, w).impedance();
    const cplx b = 1.0 / cplx(0.0, w * s.Cg);
    const cplx disc = std::sqrt(a * a + 4.0 * a * b);
    const cplx r1 = 0.5 * (a + disc), r2 = 0.5 * (a - disc);
    // capacitive branch: Z = -i z with z > 0
    return r1.imag() < 0.0 ? r1 : r2;
}

} // namespace

TEST(JunctionImpedance, LowFrequencyInductive) {
    const auto s = ladder(100.0, 1);
    const double w = 1e-5;
    const cplx z = junction_impedance(s, w).impedance();
    EXPECT_NEAR(z.imag() / (w * s.L), 1.0, 1e-6);
    EXPECT_EQ(z.real(), 0.0);
}

TEST(JunctionImpedance, NoShuntCapacitance) {
    const auto s = ladder(0.0, 1);
    for (double w : {1e-3, 0.5, 7.0, 1e3}) {
        const cplx z = junction_impedance(s, w).impedance();
        EXPECT_DOUBLE_EQ(z.imag(), w * s.L);
        EXPECT_EQ(z.real(), 0.0);
    }
}

TEST(JunctionImpedance, TwicePlasmaFrequency) {
    const auto s = ladder(100.0, 1);
    const cplx z = junction_impedance(s, 2.0 * s.plasma_frequency()).impedance();
    EXPECT_NEAR(z.imag(), -2.0 / 3.0 * s.characteristic_impedance(), 1e-14);
}

TEST(JunctionImpedance, PoleAtPlasmaFrequency) {
    const auto s = ladder(100.0, 1);
    EXPECT_TRUE(junction_impedance(s, s.plasma_frequency()).is_pole());
}

TEST(InputImpedance, SingleCellOpen) {
    const auto s = ladder(0.0, 1);
    for (double w : {0.3, 0.9, 2.5}) {
        const cplx z = input_impedance(s, w).impedance();
        EXPECT_NEAR(z.imag(), w * s.L - 1.0 / (w * s.Cg), 1e-13);
    }
    // series LC zero at 1/sqrt(L Cg)
    EXPECT_NEAR(std::abs(input_impedance(s, 1.0).impedance()), 0.0, 1e-15);
}

TEST(InputImpedance, SingleCellShort) {
    const auto s = ladder(0.0, 1, Termination::Short);
    EXPECT_NEAR(input_impedance(s, 0.7).impedance().imag(), 0.7, 1e-15);
}

TEST(InputImpedance, ResistiveLoadAbsorbs) {
    auto s = ladder(0.0, 5, Termination::Load);
    s.load = {1.0, 0.0};
    EXPECT_GT(input_impedance(s, 0.3).impedance().real(), 0.0);
    EXPECT_FALSE(s.lossless());
}

TEST(InputImpedance, CapacitiveAsymptoteMatchesFixedPoint) {
    const auto s = ladder(100.0, 3000);
    const double wp = s.plasma_frequency();
    for (double m = 5.0; m <= 50.0; m += 2.5) {
        const double w = m * wp;
        const cplx z = input_impedance(s, w).impedance();
        const cplx zf = fixed_point(s, w);
        EXPECT_NEAR(std::abs(z) / std::abs(zf), 1.0, 1e-6) << "omega/omega_p = " << m;
    }
}

TEST(InputImpedance, PureCapacitorFixedPointConstant) {
    // a = 1/(iwC), b = 1/(iwCg) with C = 100 Cg gives |Z| w sqrt(C Cg) = (1 + sqrt(401)) / 20
    const double alpha = 1.0, beta = 100.0;
    const double z = 0.5 * (alpha + std::sqrt(alpha * alpha + 4.0 * alpha * beta));
    EXPECT_NEAR(z / std::sqrt(beta), (1.0 + std::sqrt(401.0)) / 20.0, 1e-15);
    EXPECT_NEAR(z / std::sqrt(beta), 1.0512492, 1e-7);
}

TEST(InputImpedance, LosslessAndFoster) {
    for (double C : {0.0, 100.0}) {
        for (auto t : {Termination::Open, Termination::Short}) {
            const auto s = ladder(C, 50, t);
            const double hi = C > 0.0 ? 3.0 * s.plasma_frequency() : 3.0;
            const auto grid = circuit::detail::log_grid(1e-3 * hi, hi, 10000);
            int decreases = 0;
            for (double w : grid) {
                const auto imm = input_impedance(s, w);
                if (imm.is_pole()) continue;
                const cplx z = imm.impedance();
                EXPECT_LE(std::abs(z.real()), 1e-9 * std::abs(z)) << "omega = " << w;
                // reactance rises through every sample point unless a pole sits in the bracket
                const double lo = input_impedance(s, w * (1.0 - 1e-7)).impedance().imag();
                const double up = input_impedance(s, w * (1.0 + 1e-7)).impedance().imag();
                if (!(up > lo) && !(lo > 0.0 && up < 0.0)) ++decreases;
            }
            EXPECT_EQ(decreases, 0) << "C = " << C;
        }
    }
}

TEST(Dispersion, BareLineFirstMode) {
    const auto s = ladder(0.0, 3000);
    EXPECT_NEAR(dispersion(s, 1), std::numbers::pi / 3000.0, 1e-18);
    EXPECT_NEAR(dispersion(s, 1), 1.0472e-3, 1e-7);
}

TEST(Dispersion, DressedMode95) {
    const auto s = ladder(100.0, 3000);
    EXPECT_NEAR(bare_mode_frequency(s, 95), 0.09948, 1e-5);
    const double x = 95.0 * std::numbers::pi / 3000.0 / 0.1;
    EXPECT_NEAR(dispersion(s, 95), 95.0 * std::numbers::pi / 3000.0 / std::sqrt(1.0 + x * x), 1e-16);
    EXPECT_NEAR(dispersion(s, 95), 0.0705, 1e-4);
}

TEST(Dispersion, ApproachesPlasmaFromBelow) {
    const auto s = ladder(100.0, 3000);
    double prev = 0.0;
    for (std::size_t n : {10, 100, 1000, 3000}) {
        const double w = dispersion(s, n);
        EXPECT_LT(w, s.plasma_frequency());
        EXPECT_GT(w, prev);
        prev = w;
    }
    EXPECT_GT(dispersion(s, 3000) / s.plasma_frequency(), 0.995);
}

TEST(Dispersion, ShortTerminationHalfIndex) {
    const auto s = ladder(0.0, 100, Termination::Short);
    EXPECT_DOUBLE_EQ(dispersion(s, 1), 0.5 * std::numbers::pi / 100.0);
}

TEST(Dispersion, LoadUnsupported) {
    auto s = ladder(0.0, 10, Termination::Load);
    EXPECT_THROW(dispersion(s, 1), UnsupportedTermination);
}

TEST(FindModes, NoneAbovePlasma) {
    const auto s = ladder(100.0, 3000);
    EXPECT_TRUE(find_modes(s, 1.1 * s.plasma_frequency(), 50.0 * s.plasma_frequency()).empty());
}

TEST(FindModes, BareLineFirstMode) {
    const auto s = ladder(0.0, 3000);
    const auto modes = find_modes(s, 0.5e-3, 2.5e-3);
    ASSERT_FALSE(modes.empty());
    EXPECT_NEAR(modes.front() / (std::numbers::pi / 3000.0), 1.0, 1e-3);
}

TEST(FindModes, ShortTerminationMatchesDispersion) {
    const auto s = ladder(0.0, 3000, Termination::Short);
    const auto modes = find_modes(s, 0.5 * dispersion(s, 1), 0.5 * (dispersion(s, 10) + dispersion(s, 11)));
    ASSERT_EQ(modes.size(), 10u);
    for (std::size_t n = 1; n <= 10; ++n) EXPECT_NEAR(modes[n - 1] / dispersion(s, n), 1.0, 1e-3);
}

TEST(FindModes, ModeCountBelowPlasma) {
    // N - 1 ladder resonances below omega_p and the junction resonance at omega_p
    const auto s = ladder(100.0, 10);
    const double wp = s.plasma_frequency();
    const auto modes = find_modes(s, 1e-3 * wp, wp * (1.0 + 1e-12), 2000000);
    EXPECT_EQ(modes.size(), s.N);
    for (double w : modes) EXPECT_LE(w, wp * (1.0 + 1e-9));
}

TEST(FindModes, ZeroCapacitanceIsBareLine) {
    const auto s = ladder(0.0, 300);
    for (std::size_t n : {1, 7, 40}) EXPECT_EQ(dispersion(s, n), bare_mode_frequency(s, n));
}

TEST(FindModes, LossyLoadFindsMaxima) {
    auto s = ladder(0.0, 100, Termination::Load);
    s.load = {1e4, 0.0};
    const auto modes = find_modes(s, 0.5 * std::numbers::pi / 100.0, 5.5 * std::numbers::pi / 100.0);
    ASSERT_GE(modes.size(), 4u);
    auto open = ladder(0.0, 100);
    EXPECT_NEAR(modes[0] / dispersion(open, 1), 1.0, 1e-2);
}

TEST(FindModes, BadRange) {
    const auto s = ladder(0.0, 10);
    EXPECT_THROW(find_modes(s, 0.0, 1.0), InvalidArgument);
    EXPECT_THROW(find_modes(s, 2.0, 1.0), InvalidArgument);
}
