// core.hpp: Unit conventions and shared domain types for qubit + reactive-bath simulations
//
// Internal units: hbar = 1 and the qubit angular frequency Omega = 1. Frequencies,
// couplings and rates are stored in units of Omega; times in units of 1/Omega.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qbath {

using cplx = std::complex<double>;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Domain violation of a type invariant or operation precondition.
struct InvalidArgument : Error {
    using Error::Error;
};

// --------------------------- units -----------------------------------------

// Converts between physical angular frequencies / times and internal units.
struct FrequencyUnit {
    double omega_ref{1.0};

    explicit FrequencyUnit(double omega = 1.0) : omega_ref(omega) {
        if (!(omega > 0.0) || !std::isfinite(omega)) {
            throw InvalidArgument("FrequencyUnit: omega_ref must be positive and finite");
        }
    }

    double frequency_to_internal(double omega) const noexcept { return omega / omega_ref; }
    double frequency_to_physical(double omega) const noexcept { return omega * omega_ref; }
    double time_to_internal(double t) const noexcept { return t * omega_ref; }
    double time_to_physical(double t) const noexcept { return t / omega_ref; }
};

struct QubitSpec {
    double omega{1.0};

    void validate() const {
        if (!(omega > 0.0) || !std::isfinite(omega)) {
            throw InvalidArgument("QubitSpec: omega must be positive");
        }
    }
};

// --------------------------- bath ------------------------------------------

enum class BathKind { TransmissionLine, JJArray, UniformTLS, DegenerateTLS, Custom };

inline std::string_view to_string(BathKind k) noexcept {
    switch (k) {
        case BathKind::TransmissionLine: return "line";
        case BathKind::JJArray: return "jj_array";
        case BathKind::UniformTLS: return "uniform";
        case BathKind::DegenerateTLS: return "degenerate";
        case BathKind::Custom: return "custom";
    }
    return "custom";
}

inline std::optional<BathKind> bath_kind_from_string(std::string_view s) noexcept {
    if (s == "line") return BathKind::TransmissionLine;
    if (s == "jj_array") return BathKind::JJArray;
    if (s == "uniform") return BathKind::UniformTLS;
    if (s == "degenerate") return BathKind::DegenerateTLS;
    if (s == "custom") return BathKind::Custom;
    return std::nullopt;
}

struct BathMode {
    double omega{0.0}; // angular frequency
    double gamma{0.0}; // coupling energy

    friend bool operator==(const BathMode&, const BathMode&) = default;
};

struct BathSpec {
    std::vector<BathMode> modes;
    BathKind kind{BathKind::Custom};
    std::optional<std::uint64_t> seed;
    std::vector<std::string> warnings; // non-fatal notes surfaced in the run manifest

    std::size_t size() const noexcept { return modes.size(); }

    void validate() const {
        if (modes.empty()) {
            throw InvalidArgument("BathSpec: at least one mode is required");
        }
        for (const auto& m : modes) {
            if (!std::isfinite(m.omega) || !std::isfinite(m.gamma)) {
                throw InvalidArgument("BathSpec: non-finite mode parameter");
            }
            if (m.gamma < 0.0) {
                throw InvalidArgument("BathSpec: couplings must be non-negative");
            }
        }
    }

    // Element-wise mode equality; warnings are diagnostics and do not participate.
    friend bool operator==(const BathSpec& a, const BathSpec& b) {
        return a.kind == b.kind && a.seed == b.seed && a.modes == b.modes;
    }
};

// --------------------------- state & series --------------------------------

// Single-excitation wavefunction: index 0 = qubit excited, index i = quantum in bath mode i.
struct AmplitudeState {
    double t{0.0};
    std::vector<cplx> amplitudes;

    static AmplitudeState excited_qubit(std::size_t n_modes) {
        AmplitudeState s;
        s.amplitudes.assign(n_modes + 1, cplx{0.0, 0.0});
        s.amplitudes[0] = 1.0;
        return s;
    }
};

struct Sample {
    double t{0.0};
    double p_e{0.0};
    double norm_error{0.0};
};

struct Snapshot {
    double t{0.0};                   // snapped to the integration grid
    std::vector<double> populations; // |C_i|^2, i = 1..N
};

struct TimeSeries {
    std::vector<Sample> samples;
    std::vector<Snapshot> snapshots;

    bool empty() const noexcept { return samples.empty(); }
    std::size_t size() const noexcept { return samples.size(); }
};

// --------------------------- summation --------------------------------------

namespace detail {

// Fixed-order pairwise summation; the association tree depends only on the length.
template <typename T>
T pairwise_sum(std::span<const T> v) {
    constexpr std::size_t leaf = 32;
    if (v.size() <= leaf) {
        T acc{};
        for (const auto& x : v) acc += x;
        return acc;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

} // namespace detail

// Collective coupling sqrt(sum gamma_i^2). Squares are summed in ascending order,
// which makes the result independent of mode ordering.
inline double lambda0(const BathSpec& bath) {
    std::vector<double> sq;
    sq.reserve(bath.modes.size());
    for (const auto& m : bath.modes) sq.push_back(m.gamma * m.gamma);
    std::sort(sq.begin(), sq.end());
    return std::sqrt(detail::pairwise_sum<double>(sq));
}

inline double total_population(std::span<const cplx> amplitudes) {
    std::vector<double> pop(amplitudes.size());
    std::transform(amplitudes.begin(), amplitudes.end(), pop.begin(),
                   [](const cplx& c) { return std::norm(c); });
    return detail::pairwise_sum<double>(pop);
}

// sum |C_i|^2 - 1
inline double norm_error(const AmplitudeState& state) {
    return total_population(state.amplitudes) - 1.0;
}

} // namespace qbath
