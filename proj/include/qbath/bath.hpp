// bath.hpp: Deterministic, seeded builders for the discretized environments
//
// Random draws use std::mt19937_64 (bit-exact by the standard) mapped to doubles by
// taking the top 53 bits, so mode lists are identical across platforms for a given seed.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qbath/circuit.hpp"
#include "qbath/core.hpp"

namespace qbath::bath {

inline constexpr const char* kGeneratorId = "mt19937_64/top53-v1";

// One stream per builder invocation.
class UniformStream {
public:
    explicit UniformStream(std::uint64_t seed) : engine_(seed) {}

    // uniform on [0, 1)
    double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double next(double lo, double hi) { return lo + (hi - lo) * next(); }

private:
    std::mt19937_64 engine_;
};

struct TransmissionLineParams {
    double delta_omega{0.01};
    double g{0.001};
    std::size_t n_modes{300};
};

struct UniformTLSParams {
    std::size_t n_tls{1000};
    double omega_min{0.0};
    double omega_max{2.0};
    std::optional<double> gamma0;    // target decay rate, or
    std::optional<double> gamma_max; // maximum coupling
    std::uint64_t seed{1};
};

struct DegenerateTLSParams {
    std::size_t n_tls{1000};
    double r{0.0};
    double lambda0_target{0.01};
    std::uint64_t seed{1};
};

// (k dw, g sqrt(k)), k = 1..N
inline BathSpec build_transmission_line_bath(const TransmissionLineParams& p) {
    if (!(p.delta_omega > 0.0)) throw InvalidArgument("line bath: delta_omega must be > 0");
    if (!(p.g >= 0.0)) throw InvalidArgument("line bath: g must be >= 0");
    if (p.n_modes < 1) throw InvalidArgument("line bath: n_modes must be >= 1");
    BathSpec b;
    b.kind = BathKind::TransmissionLine;
    b.modes.reserve(p.n_modes);
    for (std::size_t k = 1; k <= p.n_modes; ++k) {
        const double kd = static_cast<double>(k);
        b.modes.push_back({kd * p.delta_omega, p.g * std::sqrt(kd)});
    }
    return b;
}

// Array modes from the dispersion relation, couplings g sqrt(n). Circuit frequencies
// are taken to be in units of the qubit frequency.
inline BathSpec build_jj_array_bath(const circuit::CircuitSpec& spec, double g, std::size_t max_modes) {
    spec.validate();
    if (!(g >= 0.0)) throw InvalidArgument("jj_array bath: g must be >= 0");
    if (max_modes < 1) throw InvalidArgument("jj_array bath: max_modes must be >= 1");
    BathSpec b;
    b.kind = BathKind::JJArray;
    std::size_t n_max = max_modes;
    if (max_modes > spec.N) {
        n_max = spec.N;
        b.warnings.push_back("jj_array: max_modes " + std::to_string(max_modes) +
                             " exceeds junction count; truncated to " + std::to_string(spec.N));
    }
    b.modes.reserve(n_max);
    for (std::size_t n = 1; n <= n_max; ++n) {
        b.modes.push_back({circuit::dispersion(spec, n), g * std::sqrt(static_cast<double>(n))});
    }
    return b;
}

// gamma_max such that 2 pi nu0 E[Lambda0^2] / N = Gamma0 with nu0 = N / band width and
// E[Lambda0^2] = N gamma_max^2 / 3.
inline double gamma_max_for_rate(double gamma0, std::size_t n_tls, double omega_min, double omega_max) {
    const double width = omega_max - omega_min;
    return std::sqrt(3.0 * width * gamma0 / (2.0 * std::numbers::pi * static_cast<double>(n_tls)));
}

inline BathSpec build_uniform_tls_bath(const UniformTLSParams& p) {
    if (p.n_tls < 1) throw InvalidArgument("uniform bath: n_tls must be >= 1");
    if (!(p.omega_min >= 0.0) || !(p.omega_max > p.omega_min)) {
        throw InvalidArgument("uniform bath: require 0 <= omega_min < omega_max");
    }
    if (p.gamma0.has_value() == p.gamma_max.has_value()) {
        throw InvalidArgument("uniform bath: exactly one of gamma0 / gamma_max must be given");
    }
    const double gmax = p.gamma0 ? gamma_max_for_rate(*p.gamma0, p.n_tls, p.omega_min, p.omega_max)
                                 : *p.gamma_max;
    if (!(gmax >= 0.0) || !std::isfinite(gmax)) {
        throw InvalidArgument("uniform bath: coupling scale must be finite and >= 0");
    }
    BathSpec b;
    b.kind = BathKind::UniformTLS;
    b.seed = p.seed;
    b.modes.reserve(p.n_tls);
    UniformStream rng(p.seed);
    for (std::size_t i = 0; i < p.n_tls; ++i) {
        const double w = rng.next(p.omega_min, p.omega_max);
        const double g = gmax * rng.next();
        b.modes.push_back({w, g});
    }
    return b;
}

// All frequencies (1 - r) Omega; couplings uniform on [0,1], rescaled so sum gamma^2 = Lambda0^2.
inline BathSpec build_degenerate_tls_bath(const DegenerateTLSParams& p, double omega_q = 1.0) {
    if (p.n_tls < 1) throw InvalidArgument("degenerate bath: n_tls must be >= 1");
    if (!(p.lambda0_target > 0.0)) throw InvalidArgument("degenerate bath: lambda0 must be > 0");
    if (!(p.r >= 0.0)) throw InvalidArgument("degenerate bath: r must be >= 0");
    BathSpec b;
    b.kind = BathKind::DegenerateTLS;
    b.seed = p.seed;
    const double w = (1.0 - p.r) * omega_q;
    if (w <= 0.0) {
        b.warnings.push_back("degenerate: r >= 1 gives non-positive bath frequency " + std::to_string(w));
    }
    UniformStream rng(p.seed);
    b.modes.reserve(p.n_tls);
    for (std::size_t i = 0; i < p.n_tls; ++i) {
        double g = rng.next();
        if (g == 0.0) g = 0x1.0p-53; // keep every mode coupled
        b.modes.push_back({w, g});
    }
    const double scale = p.lambda0_target / lambda0(b);
    for (auto& m : b.modes) m.gamma *= scale;
    return b;
}

// Empirical density: modes in [omega - window/2, omega + window/2) divided by window.
// The half-open window counts an equally spaced comb exactly when window is a multiple
// of the spacing; edge comparisons are guarded against rounding of the mode grid.
inline double density_at(const BathSpec& bath, double omega, double window) {
    if (!(window > 0.0)) throw InvalidArgument("density_at: window must be > 0");
    const double guard = 1e-9 * window;
    const double half = 0.5 * window;
    std::size_t count = 0;
    for (const auto& m : bath.modes) {
        const double d = m.omega - omega;
        if (d >= -half - guard && d < half - guard) ++count;
    }
    return static_cast<double>(count) / window;
}

} // namespace qbath::bath
