// circuit.hpp: Linearized Josephson-junction array / LC ladder: impedance, dispersion, modes
//
// Ladder layout seen from the drive port: junction (L parallel C) in series, then the
// island's ground capacitance Cg as a shunt, repeated N times; the termination sits
// after the last shunt.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <vector>

#include "qbath/core.hpp"

namespace qbath::circuit {

enum class Termination { Open, Short, Load };

struct UnsupportedTermination : InvalidArgument {
    using InvalidArgument::InvalidArgument;
};

struct CircuitSpec {
    double L{1.0};  // junction inductance
    double C{0.0};  // junction capacitance (0 -> pure L-Cg line)
    double Cg{1.0}; // ground capacitance per island
    std::size_t N{1};
    Termination termination{Termination::Open};
    cplx load{0.0, 0.0}; // used only for Termination::Load

    void validate() const {
        if (!(L > 0.0) || !(Cg > 0.0) || !(C >= 0.0) || !std::isfinite(L) || !std::isfinite(C) ||
            !std::isfinite(Cg)) {
            throw InvalidArgument("CircuitSpec: require L > 0, Cg > 0, C >= 0");
        }
        if (N < 1) throw InvalidArgument("CircuitSpec: N must be >= 1");
        if (termination == Termination::Load && !(std::isfinite(load.real()) && std::isfinite(load.imag()))) {
            throw InvalidArgument("CircuitSpec: load impedance must be finite");
        }
    }

    // 1/sqrt(LC); infinite when C = 0
    double plasma_frequency() const noexcept {
        return C > 0.0 ? 1.0 / std::sqrt(L * C) : std::numeric_limits<double>::infinity();
    }
    // sqrt(L/C); infinite when C = 0
    double characteristic_impedance() const noexcept {
        return C > 0.0 ? std::sqrt(L / C) : std::numeric_limits<double>::infinity();
    }
    // 1/sqrt(L Cg), the natural frequency unit of the bare line
    double line_frequency() const noexcept { return 1.0 / std::sqrt(L * Cg); }
    // pi/(N sqrt(L Cg)), bare open-line mode spacing
    double mode_spacing() const noexcept {
        return std::numbers::pi / (static_cast<double>(N) * std::sqrt(L * Cg));
    }
    bool lossless() const noexcept {
        return termination != Termination::Load || load.real() == 0.0;
    }
};

// An impedance kept in homogeneous form Z = num/den. A pole is den == 0, a zero
// num == 0; neither representation ever has to hold an infinity.
struct Immittance {
    cplx num{0.0, 0.0};
    cplx den{1.0, 0.0};

    bool is_pole() const noexcept { return den == cplx{0.0, 0.0}; }
    bool is_zero() const noexcept { return num == cplx{0.0, 0.0}; }

    // Z; non-finite at a pole
    cplx impedance() const noexcept {
        if (is_pole()) {
            return {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
        }
        return num / den;
    }
    // Y; non-finite at a zero of Z
    cplx admittance() const noexcept {
        if (is_zero()) {
            return {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
        }
        return den / num;
    }
    // sign of Im Y without division; used for pole bracketing
    double susceptance_sign() const noexcept {
        const double s = std::imag(den * std::conj(num));
        return (s > 0.0) - (s < 0.0);
    }

    void normalize() noexcept {
        const double scale = std::max(std::abs(num), std::abs(den));
        if (scale > 0.0 && std::isfinite(scale)) {
            num /= scale;
            den /= scale;
        }
    }
};

// Y_LC = i(omega C - 1/(omega L)); zero exactly at the junction plasma resonance.
inline cplx junction_admittance(const CircuitSpec& spec, double omega) {
    if (!(omega > 0.0)) throw InvalidArgument("junction_admittance: omega must be > 0");
    return {0.0, omega * spec.C - 1.0 / (omega * spec.L)};
}

// Z_LC = -i Z_inf / (omega/omega_p - omega_p/omega), returned in homogeneous form.
// When |omega - omega_p|/omega_p is at rounding level the admittance is forced to an
// exact zero and the result is reported as a pole.
inline Immittance junction_impedance(const CircuitSpec& spec, double omega) {
    cplx y = junction_admittance(spec, omega);
    const double wp = spec.plasma_frequency();
    if (std::isfinite(wp) && std::abs(omega - wp) <= 4.0 * std::numeric_limits<double>::epsilon() * wp) {
        y = 0.0;
    }
    Immittance z{cplx{1.0, 0.0}, y};
    z.normalize();
    return z;
}

// Input impedance at the drive port, iterating from the termination inward.
inline Immittance input_impedance(const CircuitSpec& spec, double omega) {
    if (!(omega > 0.0)) throw InvalidArgument("input_impedance: omega must be > 0");
    const cplx y_shunt{0.0, omega * spec.Cg};
    const cplx y_junction = junction_impedance(spec, omega).den;
    const cplx z_junction_num = junction_impedance(spec, omega).num;

    Immittance z;
    switch (spec.termination) {
        case Termination::Open: z = {cplx{1.0, 0.0}, cplx{0.0, 0.0}}; break;
        case Termination::Short: z = {cplx{0.0, 0.0}, cplx{1.0, 0.0}}; break;
        case Termination::Load: z = {spec.load, cplx{1.0, 0.0}}; break;
    }
    for (std::size_t k = 0; k < spec.N; ++k) {
        // shunt: Z' = Z / (1 + Y_g Z)
        z.den += y_shunt * z.num;
        // series junction with Z_J = jn/jd: Z' = Z + jn/jd
        z = {z.num * y_junction + z.den * z_junction_num, z.den * y_junction};
        z.normalize();
    }
    return z;
}

// ------------------------------ dispersion ---------------------------------

// omega_{n,0}: n pi/(N sqrt(L Cg)) for an open end, (n - 1/2) pi/(N sqrt(L Cg)) shorted.
inline double bare_mode_frequency(const CircuitSpec& spec, std::size_t n) {
    if (n < 1) throw InvalidArgument("dispersion: mode index must be >= 1");
    double k = 0.0;
    switch (spec.termination) {
        case Termination::Open: k = static_cast<double>(n); break;
        case Termination::Short: k = static_cast<double>(n) - 0.5; break;
        case Termination::Load:
            throw UnsupportedTermination("dispersion: no closed form for a load termination");
    }
    return k * spec.mode_spacing();
}

// omega_n = omega_{n,0} / sqrt(1 + (omega_{n,0}/omega_p)^2)
inline double dispersion(const CircuitSpec& spec, std::size_t n) {
    const double w0 = bare_mode_frequency(spec, n);
    if (spec.C == 0.0) return w0;
    const double x = w0 / spec.plasma_frequency();
    return w0 / std::sqrt(1.0 + x * x);
}

struct DispersionRow {
    std::size_t n{0};
    double omega_n0{0.0};
    double omega_n{0.0};
};

using DispersionTable = std::vector<DispersionRow>;

inline DispersionTable dispersion_table(const CircuitSpec& spec, std::size_t n_max) {
    DispersionTable rows;
    rows.reserve(n_max);
    for (std::size_t n = 1; n <= n_max; ++n) {
        rows.push_back({n, bare_mode_frequency(spec, n), dispersion(spec, n)});
    }
    return rows;
}

// ------------------------------ mode finder --------------------------------

inline constexpr double kModeRelativeTolerance = 1e-9;
inline constexpr std::size_t kGridPointsPerSpacing = 40;

// Log-spaced grid with kGridPointsPerSpacing points per local mode spacing at the top of
// the mode band (omega_max, capped at omega_p when C > 0). The dressed spacing near
// omega_p is d(omega_n)/dn. A range entirely above omega_p gets a fixed coarse grid.
inline std::size_t default_grid_points(const CircuitSpec& spec, double omega_min, double omega_max) {
    double spacing = spec.mode_spacing();
    double top = omega_max;
    if (spec.C > 0.0) {
        const double wp = spec.plasma_frequency();
        if (omega_min >= wp) return 1000;
        top = std::min(omega_max, wp);
        const double x = std::min(top / wp, 0.99);
        spacing *= std::pow(1.0 - x * x, 1.5);
    }
    const double ratio = spacing / static_cast<double>(kGridPointsPerSpacing);
    const double step = std::log1p(ratio / top);
    return static_cast<std::size_t>(std::ceil(std::log(omega_max / omega_min) / step)) + 1;
}

namespace detail {

inline std::vector<double> log_grid(double lo, double hi, std::size_t points) {
    std::vector<double> g(points);
    const double a = std::log(lo);
    const double b = std::log(hi);
    for (std::size_t i = 0; i < points; ++i) {
        g[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(points - 1));
    }
    g.front() = lo;
    g.back() = hi;
    return g;
}

// Bisect on the susceptance sign; a pole of Z is where Im Y crosses zero upward.
inline double refine_pole(const CircuitSpec& spec, double lo, double hi) {
    while ((hi - lo) > kModeRelativeTolerance * hi) {
        const double mid = 0.5 * (lo + hi);
        const Immittance z = input_impedance(spec, mid);
        if (z.is_pole()) return mid;
        if (z.susceptance_sign() < 0.0) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

// Golden-section maximization of |Z| inside a bracket (lossy loads only).
inline double refine_maximum(const CircuitSpec& spec, double lo, double hi) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    auto f = [&](double w) { return std::abs(input_impedance(spec, w).impedance()); };
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while ((b - a) > kModeRelativeTolerance * b) {
        if (fc > fd) {
            b = d; d = c; fd = fc;
            c = b - inv_phi * (b - a); fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + inv_phi * (b - a); fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

} // namespace detail

// Resonances (maxima of |Z|, i.e. poles for a lossless ladder) in [omega_min, omega_max].
inline std::vector<double> find_modes(const CircuitSpec& spec, double omega_min, double omega_max,
                                      std::size_t grid_points) {
    spec.validate();
    if (!(omega_min > 0.0) || !(omega_max > omega_min)) {
        throw InvalidArgument("find_modes: require 0 < omega_min < omega_max");
    }
    if (grid_points < 3) throw InvalidArgument("find_modes: grid_points must be >= 3");

    const auto grid = detail::log_grid(omega_min, omega_max, grid_points);
    std::vector<double> modes;

    if (spec.lossless()) {
        std::vector<Immittance> z(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) z[i] = input_impedance(spec, grid[i]);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (z[i].is_pole()) {
                modes.push_back(grid[i]);
                continue;
            }
            if (i + 1 < grid.size() && !z[i + 1].is_pole() && z[i].susceptance_sign() < 0.0 &&
                z[i + 1].susceptance_sign() > 0.0) {
                modes.push_back(detail::refine_pole(spec, grid[i], grid[i + 1]));
            }
        }
    } else {
        std::vector<double> mag(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) mag[i] = std::abs(input_impedance(spec, grid[i]).impedance());
        for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
            if (mag[i] > mag[i - 1] && mag[i] >= mag[i + 1]) {
                modes.push_back(detail::refine_maximum(spec, grid[i - 1], grid[i + 1]));
            }
        }
    }
    std::sort(modes.begin(), modes.end());
    return modes;
}

inline std::vector<double> find_modes(const CircuitSpec& spec, double omega_min, double omega_max) {
    return find_modes(spec, omega_min, omega_max, default_grid_points(spec, omega_min, omega_max));
}

} // namespace qbath::circuit
