#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qbath/analytics.hpp"

using namespace qbath;
using namespace qbath::analytics;

namespace {

TimeSeries sampled(double t_max, double dt, auto&& f) {
    TimeSeries s;
    for (std::size_t n = 0; static_cast<double>(n) * dt <= t_max + 1e-12; ++n) {
        const double t = static_cast<double>(n) * dt;
        s.samples.push_back({t, f(t), 0.0});
    }
    return s;
}

} // namespace

TEST(DetunedClosedForm, ResonantIsCosSquared) {
    for (double l : {0.001, 0.01, 0.3}) {
        for (double t : {0.0, 1.0, 17.5, 400.0}) {
            EXPECT_NEAR(analytic_detuned_population(l, 0.0, 1.0, t), std::pow(std::cos(l * t), 2), 1e-15);
        }
    }
}

TEST(DetunedClosedForm, StartsAtOne) {
    EXPECT_EQ(analytic_detuned_population(0.05, 0.25, 1.0, 0.0), 1.0);
    EXPECT_EQ(analytic_detuned_population(0.0, 0.0, 1.0, 3.0), 1.0);
}

TEST(DetunedClosedForm, MinimumAndFrequency) {
    EXPECT_NEAR(detuned_population_minimum(0.05, 0.25, 1.0), 1.0 - 0.0025 / 0.018125, 1e-15);
    EXPECT_NEAR(detuned_population_minimum(0.05, 0.25, 1.0), 0.86207, 1e-5);
    EXPECT_NEAR(detuned_rabi_frequency(0.05, 0.25, 1.0), 0.13463, 1e-5);
}

TEST(DetunedClosedForm, Bounds) {
    const double lo = detuned_population_minimum(0.05, 0.25, 1.0);
    for (double t = 0.0; t < 200.0; t += 0.37) {
        const double p = analytic_detuned_population(0.05, 0.25, 1.0, t);
        EXPECT_GE(p, lo - 1e-15);
        EXPECT_LE(p, 1.0);
    }
}

TEST(DetunedClosedForm, InitialCurvature) {
    // amplitude form: |C0|'' (0) = -L^2
    const double l = 0.05, r = 0.25, h = 1e-3;
    auto amp = [&](double t) { return std::sqrt(analytic_detuned_population(l, r, 1.0, t)); };
    const double d1 = (amp(h) - amp(-h)) / (2.0 * h);
    const double d2 = (amp(h) - 2.0 * amp(0.0) + amp(-h)) / (h * h);
    EXPECT_NEAR(d1, 0.0, 1e-12);
    EXPECT_NEAR(d2, -l * l, 1e-7);
}

TEST(Rates, LineDecay) {
    EXPECT_NEAR(decay_rate_line(0.001, 1.0, 0.01), 2.0 * std::numbers::pi * 1e-2, 1e-15);
    EXPECT_NEAR(decay_rate_line(0.001, 1.0, 0.01), 0.062832, 1e-6);
    EXPECT_EQ(decay_rate_line(0.0, 1.0, 0.01), 0.0);
    EXPECT_NEAR(decay_rate_line(0.002, 1.0, 0.01) / decay_rate_line(0.001, 1.0, 0.01), 4.0, 1e-14);
}

TEST(Rates, TlsDecay) {
    const double n = 1000.0, gmax = 0.002;
    const double nu0 = n / 2.0, l2 = n * gmax * gmax / 3.0;
    EXPECT_NEAR(decay_rate_tls(nu0, std::sqrt(l2), 1000), std::numbers::pi * n * gmax * gmax / 3.0, 1e-15);
    EXPECT_EQ(decay_rate_tls(500.0, 0.0, 1000), 0.0);
}

TEST(Rates, Revival) {
    EXPECT_NEAR(revival_time(0.01), 628.32, 1e-2);
    EXPECT_DOUBLE_EQ(revival_time(2.0 * std::numbers::pi), 1.0);
    EXPECT_DOUBLE_EQ(revival_time(0.005), 2.0 * revival_time(0.01));
}

TEST(Rates, Plateau) {
    EXPECT_NEAR(long_time_plateau(1.0, 3000, 0.03), 0.014147, 1e-6);
    EXPECT_NEAR(long_time_plateau(1.0, 100000, 0.03), 4.2441e-4, 1e-8);
    EXPECT_LT(long_time_plateau(1.0, 1000000000, 0.03), 1e-7);
}

TEST(FitExponential, ExactOnExponential) {
    const auto s = sampled(400.0, 0.5, [](double t) { return std::exp(-0.05 * t); });
    const auto fit = fit_exponential(s, 1e-1, 1e-7);
    EXPECT_NEAR(fit.gamma_fit, 0.05, 1e-13);
    EXPECT_NEAR(fit.r_squared, 1.0, 1e-13);
    EXPECT_GE(fit.n_samples, kMinFitSamples);
}

TEST(FitExponential, RescaleInvariant) {
    const auto s = sampled(400.0, 0.5, [](double t) { return std::exp(-0.05 * t); });
    const auto s2 = sampled(400.0, 0.5, [](double t) { return 0.5 * std::exp(-0.05 * t); });
    const auto a = fit_exponential(s, 1e-1, 1e-7);
    const auto b = fit_exponential(s2, 1e-1, 1e-7);
    EXPECT_NEAR(a.gamma_fit, b.gamma_fit, 1e-12);
    EXPECT_NEAR(b.intercept - a.intercept, std::log(0.5), 1e-10);
}

TEST(FitExponential, CosSquaredIsNotExponential) {
    const auto s = sampled(150.0, 0.05, [](double t) { return std::pow(std::cos(0.01 * t), 2); });
    const auto fit = fit_exponential(s, 1.0, 1e-7);
    EXPECT_LT(fit.r_squared, 0.99);
}

TEST(FitExponential, TooFewSamples) {
    const auto s = sampled(10.0, 1.0, [](double) { return 0.5; });
    EXPECT_THROW(fit_exponential(s, 0.1, 1e-3), InsufficientData);
    EXPECT_THROW(fit_exponential(s, 1e-3, 0.1), InvalidArgument);
}

TEST(DetectRevival, MonotoneHasNone) {
    const auto s = sampled(400.0, 0.5, [](double t) { return std::exp(-0.05 * t); });
    EXPECT_FALSE(detect_revival(s, 1e6).has_value());
}

TEST(DetectRevival, CosSquaredFirstRise) {
    const double l = 0.01;
    const auto s = sampled(400.0, 0.1, [&](double t) { return std::pow(std::cos(l * t), 2); });
    const auto t = detect_revival(s, 10.0);
    ASSERT_TRUE(t.has_value());
    EXPECT_NEAR(*t, std::numbers::pi / (2.0 * l), 2.0);
}

TEST(DetectRevival, DecayThenRevival) {
    const auto s = sampled(800.0, 0.5, [](double t) {
        return t < 628.0 ? std::exp(-0.06 * t) : std::exp(-0.06 * t) + 0.3 * (1.0 - std::exp(-(t - 628.0)));
    });
    const auto t = detect_revival(s, 1e6);
    ASSERT_TRUE(t.has_value());
    EXPECT_NEAR(*t, 628.0, 1.0);
}

TEST(TimeAverage, Constant) {
    const auto s = sampled(10.0, 0.1, [](double) { return 0.25; });
    EXPECT_NEAR(time_average(s, 2.0, 7.0), 0.25, 1e-15);
}

TEST(TimeAverage, CosSquaredWholePeriods) {
    const double l = 0.01;
    const double period = std::numbers::pi / l;
    const auto s = sampled(3.0 * period, period / 1000.0, [&](double t) { return std::pow(std::cos(l * t), 2); });
    EXPECT_NEAR(time_average(s, 0.0, 3.0 * period), 0.5, 1e-6);
}

TEST(TimeAverage, EmptyWindow) {
    const auto s = sampled(10.0, 1.0, [](double) { return 1.0; });
    EXPECT_THROW(time_average(s, 20.0, 30.0), InsufficientData);
}
