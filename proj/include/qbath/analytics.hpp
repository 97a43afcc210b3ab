// analytics.hpp: Closed-form laws and the estimators that compare simulations to them

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <vector>

#include "qbath/core.hpp"

namespace qbath::analytics {

struct InsufficientData : Error {
    using Error::Error;
};

// |C0|^2 = 1 - [L^2/(L^2+(r W/2)^2)] sin^2(sqrt(L^2+(r W/2)^2) t) for a bath of
// identical modes at (1-r)W with collective coupling L.
inline double analytic_detuned_population(double lambda0, double r, double omega_q, double t) {
    if (!(lambda0 >= 0.0)) throw InvalidArgument("analytic_detuned_population: lambda0 must be >= 0");
    const double half = 0.5 * r * omega_q;
    const double w2 = lambda0 * lambda0 + half * half;
    if (w2 == 0.0) return 1.0;
    const double s = std::sin(std::sqrt(w2) * t);
    return 1.0 - lambda0 * lambda0 / w2 * s * s;
}

// Lowest value reached by the detuned closed form.
inline double detuned_population_minimum(double lambda0, double r, double omega_q) {
    const double half = 0.5 * r * omega_q;
    const double w2 = lambda0 * lambda0 + half * half;
    return w2 == 0.0 ? 1.0 : 1.0 - lambda0 * lambda0 / w2;
}

// Oscillation angular frequency sqrt(L^2 + (r W/2)^2) of the amplitude envelope.
inline double detuned_rabi_frequency(double lambda0, double r, double omega_q) {
    const double half = 0.5 * r * omega_q;
    return std::sqrt(lambda0 * lambda0 + half * half);
}

// 2 pi g^2 W / dw^2
inline double decay_rate_line(double g, double omega_q, double delta_omega) {
    if (!(delta_omega > 0.0)) throw InvalidArgument("decay_rate_line: delta_omega must be > 0");
    return 2.0 * std::numbers::pi * g * g * omega_q / (delta_omega * delta_omega);
}

// 2 pi nu0 L^2 / N
inline double decay_rate_tls(double nu0, double lambda0, std::size_t n) {
    if (n < 1) throw InvalidArgument("decay_rate_tls: n must be >= 1");
    return 2.0 * std::numbers::pi * nu0 * lambda0 * lambda0 / static_cast<double>(n);
}

inline double revival_time(double delta_omega) {
    if (!(delta_omega > 0.0)) throw InvalidArgument("revival_time: delta_omega must be > 0");
    return 2.0 * std::numbers::pi / delta_omega;
}

// 4 W / (N pi Gamma0)
inline double long_time_plateau(double omega_q, std::size_t n, double gamma0) {
    if (n < 1) throw InvalidArgument("long_time_plateau: n must be >= 1");
    if (!(gamma0 > 0.0)) throw InvalidArgument("long_time_plateau: gamma0 must be > 0");
    return 4.0 * omega_q / (static_cast<double>(n) * std::numbers::pi * gamma0);
}

// ------------------------------ estimators ---------------------------------

struct DecayFit {
    double gamma_fit{0.0};
    double intercept{0.0}; // ln p_e at t = 0 of the fitted line
    double r_squared{0.0};
    double t_lo{0.0};
    double t_hi{0.0};
    std::size_t n_samples{0};
};

inline constexpr std::size_t kMinFitSamples = 10;

// Least squares on (t, ln p_e) over samples with p_lo <= p_e <= p_hi, taken from the
// initial decay only: the window closes at the first sample that falls below p_lo.
inline DecayFit fit_exponential(const TimeSeries& series, double p_hi, double p_lo) {
    if (!(p_hi > p_lo) || !(p_lo > 0.0)) throw InvalidArgument("fit_exponential: require p_hi > p_lo > 0");
    std::vector<double> t, y;
    for (const auto& s : series.samples) {
        if (s.p_e < p_lo) break;
        if (s.p_e <= p_hi) {
            t.push_back(s.t);
            y.push_back(std::log(s.p_e));
        }
    }
    if (t.size() < kMinFitSamples) {
        throw InsufficientData("fit_exponential: " + std::to_string(t.size()) + " samples in window, need " +
                               std::to_string(kMinFitSamples));
    }
    const double n = static_cast<double>(t.size());
    double mt = 0.0, my = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        mt += t[i];
        my += y[i];
    }
    mt /= n;
    my /= n;
    double stt = 0.0, sty = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        stt += (t[i] - mt) * (t[i] - mt);
        sty += (t[i] - mt) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (stt == 0.0) throw InsufficientData("fit_exponential: window spans zero time");
    const double slope = sty / stt;
    DecayFit fit;
    fit.gamma_fit = -slope;
    fit.intercept = my - slope * mt;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double e = y[i] - (fit.intercept + slope * t[i]);
        ss_res += e * e;
    }
    fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    fit.t_lo = t.front();
    fit.t_hi = t.back();
    fit.n_samples = t.size();
    return fit;
}

// Onset of the first revival. p_min is the smallest recorded population; the floor is
// entered at the first sample below floor_factor * p_min, and the revival is the first
// later sample at or above that level reached by three strictly increasing samples.
inline std::optional<double> detect_revival(const TimeSeries& series, double floor_factor) {
    if (!(floor_factor > 1.0)) throw InvalidArgument("detect_revival: floor_factor must be > 1");
    const auto& s = series.samples;
    if (s.size() < 3) return std::nullopt;
    double p_min = s.front().p_e;
    for (const auto& x : s) p_min = std::min(p_min, x.p_e);
    const double level = floor_factor * std::max(p_min, 0.0);

    std::size_t entry = 0;
    while (entry < s.size() && !(s[entry].p_e < level)) ++entry;
    for (std::size_t j = std::max<std::size_t>(entry + 2, 2); j < s.size(); ++j) {
        if (s[j].p_e >= level && s[j - 1].p_e < s[j].p_e && s[j - 2].p_e < s[j - 1].p_e) {
            return s[j].t;
        }
    }
    return std::nullopt;
}

// Trapezoidal mean of p_e over the samples inside [t_lo, t_hi].
inline double time_average(const TimeSeries& series, double t_lo, double t_hi) {
    if (!(t_lo < t_hi)) throw InvalidArgument("time_average: require t_lo < t_hi");
    double area = 0.0, span = 0.0;
    const Sample* prev = nullptr;
    std::size_t count = 0;
    for (const auto& x : series.samples) {
        if (x.t < t_lo || x.t > t_hi) continue;
        if (prev) {
            const double dt = x.t - prev->t;
            area += 0.5 * dt * (x.p_e + prev->p_e);
            span += dt;
        }
        prev = &x;
        ++count;
    }
    if (count == 0) throw InsufficientData("time_average: no samples in window");
    if (count == 1) return prev->p_e;
    return area / span;
}

} // namespace qbath::analytics
