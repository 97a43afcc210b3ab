#include <gtest/gtest.h>

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <random>

#include "qbath/bath.hpp"
#include "qbath/core.hpp"

using namespace qbath;

namespace {

BathSpec custom(std::initializer_list<BathMode> modes) {
    BathSpec b;
    b.modes = modes;
    return b;
}

} // namespace

TEST(Lambda0, ZeroCouplings) {
    EXPECT_EQ(lambda0(custom({{1.0, 0.0}, {2.0, 0.0}})), 0.0);
}

TEST(Lambda0, SingleMode) {
    EXPECT_DOUBLE_EQ(lambda0(custom({{1.0, 0.01}})), 0.01);
}

TEST(Lambda0, TransmissionLineClosedForm) {
    const auto b = bath::build_transmission_line_bath({0.01, 0.001, 300});
    const double expected = std::sqrt(0.001 * 0.001 * 300.0 * 301.0 / 2.0);
    EXPECT_NEAR(lambda0(b), expected, 1e-15);
    EXPECT_NEAR(lambda0(b), 0.21249, 1e-5);
}

TEST(Lambda0, PermutationInvariant) {
    bath::UniformTLSParams p;
    p.n_tls = 1000;
    p.gamma_max = 0.01;
    p.seed = 3;
    auto b = bath::build_uniform_tls_bath(p);
    const double ref = lambda0(b);
    std::mt19937_64 rng(11);
    for (int k = 0; k < 5; ++k) {
        std::shuffle(b.modes.begin(), b.modes.end(), rng);
        EXPECT_EQ(lambda0(b), ref);
    }
    std::reverse(b.modes.begin(), b.modes.end());
    EXPECT_EQ(lambda0(b), ref);
}

TEST(NormError, InitialState) {
    EXPECT_EQ(norm_error(AmplitudeState::excited_qubit(5)), 0.0);
}

TEST(NormError, TwoComponent) {
    AmplitudeState s;
    s.amplitudes = {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
    EXPECT_NEAR(norm_error(s), 0.0, 4.0 * DBL_EPSILON);
}

TEST(NormError, SmallExcess) {
    AmplitudeState s;
    s.amplitudes = {1.0, 0.001};
    EXPECT_NEAR(norm_error(s), 1e-6, 4.0 * DBL_EPSILON);
}

TEST(Units, RoundTrip) {
    const FrequencyUnit u(2.0 * M_PI * 5.3e9);
    for (double x : {1e-3, 0.7, 1.0, 42.0, 3.1e5}) {
        EXPECT_DOUBLE_EQ(u.frequency_to_physical(u.frequency_to_internal(x)), x);
        EXPECT_DOUBLE_EQ(u.time_to_physical(u.time_to_internal(x)), x);
    }
    EXPECT_THROW(FrequencyUnit(0.0), InvalidArgument);
}

TEST(BathSpec, Validation) {
    EXPECT_THROW(BathSpec{}.validate(), InvalidArgument);
    EXPECT_THROW(custom({{1.0, -0.1}}).validate(), InvalidArgument);
    EXPECT_THROW(custom({{NAN, 0.1}}).validate(), InvalidArgument);
    EXPECT_NO_THROW(custom({{-1.0, 0.1}}).validate());
}

TEST(BathSpec, KindNames) {
    for (auto k : {BathKind::TransmissionLine, BathKind::JJArray, BathKind::UniformTLS, BathKind::DegenerateTLS,
                   BathKind::Custom}) {
        EXPECT_EQ(bath_kind_from_string(to_string(k)), k);
    }
    EXPECT_FALSE(bath_kind_from_string("ohmic").has_value());
}
