// dynamics.hpp: Exact single-excitation dynamics of a qubit coupled to N bath modes
//
// Two independent engines:
//   evolve         rotating-frame state vector, classical fixed-step RK4
//   evolve_kernel  Volterra form dC0/dt = -int_0^t K(t-s) C0(s) ds, trapezoidal quadrature
//
// Rotating-frame equations (delta_i = omega_i - Omega):
//   dC0/dt = -i sum_i gamma_i C_i
//   dCi/dt = -i delta_i C_i - i gamma_i C0

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "qbath/core.hpp"

namespace qbath::dynamics {

struct EngineConfig {
    std::optional<double> dt;     // nullopt = auto
    double t_max{100.0};
    std::size_t sample_stride{1};
    std::vector<double> snapshot_times;
    double norm_tolerance{1e-7};

    void validate() const {
        if (dt && !(*dt > 0.0)) throw InvalidArgument("engine.dt must be > 0");
        if (!(t_max > 0.0)) throw InvalidArgument("engine.t_max must be > 0");
        if (sample_stride < 1) throw InvalidArgument("engine.sample_stride must be >= 1");
        if (!(norm_tolerance > 0.0)) throw InvalidArgument("engine.norm_tolerance must be > 0");
    }
};

enum class EngineStatus { Ok, NormDrift, NonFinite };

inline const char* to_string(EngineStatus s) noexcept {
    switch (s) {
        case EngineStatus::Ok: return "ok";
        case EngineStatus::NormDrift: return "norm_drift";
        case EngineStatus::NonFinite: return "non_finite";
    }
    return "ok";
}

struct EvolveResult {
    TimeSeries series;
    EngineStatus status{EngineStatus::Ok};
    std::string message;
    AmplitudeState final_state; // empty for the kernel engine
    double dt{0.0};
    std::size_t steps{0};

    bool ok() const noexcept { return status == EngineStatus::Ok; }
};

// ------------------------------ step size ----------------------------------

inline constexpr double kStepsPerRotation = 50.0;

// Largest |omega_i - Omega|, floored by Lambda0 and 1e-3 Omega.
inline double frequency_scale(const QubitSpec& qubit, const BathSpec& bath) {
    double detuning = 0.0;
    for (const auto& m : bath.modes) detuning = std::max(detuning, std::abs(qubit.omega - m.omega));
    return std::max({detuning, lambda0(bath), 1e-3 * qubit.omega});
}

// (2 pi / omega_scale) / 50
inline double rotation_limited_dt(const QubitSpec& qubit, const BathSpec& bath) {
    return 2.0 * std::numbers::pi / frequency_scale(qubit, bath) / kStepsPerRotation;
}

// Step at which the accumulated RK4 phase error of the fastest eigenmode over t_max,
// t_max * rho * (rho dt)^4 / 120, equals norm_tolerance. rho = max detuning + Lambda0
// bounds the spectral radius of the rotating-frame generator.
inline double accuracy_limited_dt(const QubitSpec& qubit, const BathSpec& bath, const EngineConfig& cfg) {
    double detuning = 0.0;
    for (const auto& m : bath.modes) detuning = std::max(detuning, std::abs(qubit.omega - m.omega));
    const double rho = std::max(detuning + lambda0(bath), 1e-3 * qubit.omega);
    const double theta = std::pow(120.0 * cfg.norm_tolerance / (rho * cfg.t_max), 0.25);
    return theta / rho;
}

// Explicit dt is returned unchanged; auto dt is the smaller of the two limits, shrunk
// so that an integer number of steps lands exactly on t_max.
inline double resolve_dt(const QubitSpec& qubit, const BathSpec& bath, const EngineConfig& cfg) {
    if (cfg.dt) return *cfg.dt;
    const double raw = std::min(rotation_limited_dt(qubit, bath), accuracy_limited_dt(qubit, bath, cfg));
    const double steps = std::ceil(cfg.t_max / raw);
    return cfg.t_max / steps;
}

inline std::size_t step_count(double t_max, double dt) {
    return static_cast<std::size_t>(std::ceil(t_max / dt - 1e-9));
}

// |C_i|^2 for i = 1..N
inline std::vector<double> bath_populations(const AmplitudeState& state) {
    if (state.amplitudes.empty()) return {};
    std::vector<double> pop(state.amplitudes.size() - 1);
    for (std::size_t i = 1; i < state.amplitudes.size(); ++i) pop[i - 1] = std::norm(state.amplitudes[i]);
    return pop;
}

namespace detail {

// Grid steps closest to each requested snapshot time (ties round up).
inline std::vector<std::size_t> snapshot_steps(const std::vector<double>& times, double dt, std::size_t n_steps) {
    std::vector<std::size_t> steps;
    for (double t : times) {
        const double s = std::floor(t / dt + 0.5);
        steps.push_back(static_cast<std::size_t>(std::clamp(s, 0.0, static_cast<double>(n_steps))));
    }
    std::sort(steps.begin(), steps.end());
    steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
    return steps;
}

// Deterministic blocked summation of gamma_i * w_i: fixed-size leaves, pairwise tree.
class BlockedSum {
public:
    static constexpr std::size_t kBlock = 256;

    explicit BlockedSum(std::size_t n) : partial_((n + kBlock - 1) / kBlock + 1) {}

    std::vector<cplx>& partials() noexcept { return partial_; }
    cplx total() const { return qbath::detail::pairwise_sum<cplx>(partial_); }

private:
    std::vector<cplx> partial_;
};

} // namespace detail

// ------------------------------ direct engine -------------------------------

// Owns the state vector and advances it with classical RK4, written in the nested
// (Horner) form y + hA(y + h/2 A(y + h/3 A(y + h/4 A y))) which is identical to the
// four-stage scheme for a linear autonomous system.
class DirectEngine {
public:
    DirectEngine(const QubitSpec& qubit, const BathSpec& bath)
        : n_(bath.size()), detuning_(n_), gamma_(n_), state_(AmplitudeState::excited_qubit(n_)),
          work_(n_ + 1), sums_(n_) {
        qubit.validate();
        bath.validate();
        for (std::size_t i = 0; i < n_; ++i) {
            detuning_[i] = bath.modes[i].omega - qubit.omega;
            gamma_[i] = bath.modes[i].gamma;
        }
    }

    const AmplitudeState& state() const noexcept { return state_; }

    // Replace the initial state (used for phase-invariance checks).
    void set_state(AmplitudeState s) {
        if (s.amplitudes.size() != n_ + 1) throw InvalidArgument("DirectEngine: state size mismatch");
        state_ = std::move(s);
    }

    void step(double h) {
        cplx* y = state_.amplitudes.data();
        cplx* w = work_.data();
        std::copy(y, y + n_ + 1, w);
        cplx s = coupled_sum(w);
        for (double c : {h / 4.0, h / 3.0, h / 2.0}) s = apply_stage(y, w, c, s);
        // final: y += h A w
        const double w0r = w[0].real(), w0i = w[0].imag();
        for (std::size_t i = 0; i < n_; ++i) {
            const double ar = detuning_[i] * w[i + 1].real() + gamma_[i] * w0r;
            const double ai = detuning_[i] * w[i + 1].imag() + gamma_[i] * w0i;
            y[i + 1] = {y[i + 1].real() + h * ai, y[i + 1].imag() - h * ar};
        }
        y[0] = {y[0].real() + h * s.imag(), y[0].imag() - h * s.real()};
        state_.t += h;
    }

private:
    cplx coupled_sum(const cplx* w) {
        auto& part = sums_.partials();
        std::fill(part.begin(), part.end(), cplx{});
        for (std::size_t b = 0, i = 0; i < n_; ++b) {
            const std::size_t end = std::min(n_, i + detail::BlockedSum::kBlock);
            double sr = 0.0, si = 0.0;
            for (; i < end; ++i) {
                sr += gamma_[i] * w[i + 1].real();
                si += gamma_[i] * w[i + 1].imag();
            }
            part[b] = {sr, si};
        }
        return sums_.total();
    }

    // w <- y + c A w, returning sum gamma_i w_i of the updated w
    cplx apply_stage(const cplx* y, cplx* w, double c, cplx s) {
        const double w0r = w[0].real(), w0i = w[0].imag();
        auto& part = sums_.partials();
        std::fill(part.begin(), part.end(), cplx{});
        for (std::size_t b = 0, i = 0; i < n_; ++b) {
            const std::size_t end = std::min(n_, i + detail::BlockedSum::kBlock);
            double sr = 0.0, si = 0.0;
            for (; i < end; ++i) {
                const double ar = detuning_[i] * w[i + 1].real() + gamma_[i] * w0r;
                const double ai = detuning_[i] * w[i + 1].imag() + gamma_[i] * w0i;
                const double nr = y[i + 1].real() + c * ai;
                const double ni = y[i + 1].imag() - c * ar;
                w[i + 1] = {nr, ni};
                sr += gamma_[i] * nr;
                si += gamma_[i] * ni;
            }
            part[b] = {sr, si};
        }
        w[0] = {y[0].real() + c * s.imag(), y[0].imag() - c * s.real()};
        return sums_.total();
    }

    std::size_t n_;
    std::vector<double> detuning_;
    std::vector<double> gamma_;
    AmplitudeState state_;
    std::vector<cplx> work_;
    detail::BlockedSum sums_;
};

namespace detail {

inline bool record_sample(EvolveResult& out, double t, double p_e, double norm_err, double tol) {
    out.series.samples.push_back({t, p_e, norm_err});
    if (!std::isfinite(p_e) || !std::isfinite(norm_err)) {
        out.status = EngineStatus::NonFinite;
        out.message = "non-finite amplitude at t = " + std::to_string(t);
        return false;
    }
    if (std::abs(norm_err) > tol) {
        out.status = EngineStatus::NormDrift;
        out.message = "norm error " + std::to_string(norm_err) + " exceeds tolerance at t = " + std::to_string(t);
        return false;
    }
    return true;
}

} // namespace detail

// Starts from the qubit excited and the bath empty unless `initial` is given.
inline EvolveResult evolve(const QubitSpec& qubit, const BathSpec& bath, const EngineConfig& cfg,
                           const std::optional<AmplitudeState>& initial = std::nullopt) {
    cfg.validate();
    DirectEngine engine(qubit, bath);
    if (initial) engine.set_state(*initial);

    EvolveResult out;
    out.dt = resolve_dt(qubit, bath, cfg);
    const std::size_t n_steps = step_count(cfg.t_max, out.dt);
    const auto snaps = detail::snapshot_steps(cfg.snapshot_times, out.dt, n_steps);
    std::size_t next_snap = 0;

    auto observe = [&](std::size_t n) {
        const auto& st = engine.state();
        const double t = static_cast<double>(n) * out.dt;
        bool keep = true;
        if (n % cfg.sample_stride == 0 || n == n_steps) {
            keep = detail::record_sample(out, t, std::norm(st.amplitudes[0]), norm_error(st), cfg.norm_tolerance);
        }
        while (next_snap < snaps.size() && snaps[next_snap] == n) {
            out.series.snapshots.push_back({t, bath_populations(st)});
            ++next_snap;
        }
        return keep;
    };

    bool running = observe(0);
    for (std::size_t n = 1; running && n <= n_steps; ++n) {
        engine.step(out.dt);
        out.steps = n;
        running = observe(n);
    }
    out.final_state = engine.state();
    out.final_state.t = static_cast<double>(out.steps) * out.dt;
    return out;
}

// ------------------------------ kernel engine -------------------------------

struct MemoryKernel {
    double tau_step{0.0};
    std::vector<cplx> k_values; // K(n tau_step), n = 0..steps
};

// K(tau) = sum_i gamma_i^2 exp(i (Omega - omega_i) tau), each term evaluated directly.
inline MemoryKernel build_kernel(const QubitSpec& qubit, const BathSpec& bath, double h, std::size_t steps) {
    MemoryKernel k;
    k.tau_step = h;
    k.k_values.resize(steps + 1);
    std::vector<cplx> terms(bath.size());
    for (std::size_t n = 0; n <= steps; ++n) {
        const double tau = static_cast<double>(n) * h;
        for (std::size_t i = 0; i < bath.size(); ++i) {
            const auto& m = bath.modes[i];
            terms[i] = std::polar(m.gamma * m.gamma, (qubit.omega - m.omega) * tau);
        }
        k.k_values[n] = qbath::detail::pairwise_sum<cplx>(terms);
    }
    return k;
}

namespace detail {

// Trapezoidal product rule for the convolution, trapezoidal rule in time; the implicit
// K(0) C_n term is solved in closed form. Returns C0 at t = n h, n = 0..steps.
inline std::vector<cplx> solve_volterra(const MemoryKernel& kernel, std::size_t steps) {
    const double h = kernel.tau_step;
    const auto& K = kernel.k_values;
    std::vector<cplx> c(steps + 1);
    c[0] = 1.0;
    cplx f_prev{0.0, 0.0}; // F(0) = 0
    const cplx denom = 1.0 + 0.25 * h * h * K[0];
    for (std::size_t n = 1; n <= steps; ++n) {
        // F_n without the C_n term: h [ K_n C_0 / 2 + sum_{j=1}^{n-1} K_{n-j} C_j ]
        cplx acc = 0.5 * K[n] * c[0];
        for (std::size_t j = 1; j < n; ++j) acc += K[n - j] * c[j];
        const cplx g = h * acc;
        c[n] = (c[n - 1] - 0.5 * h * (f_prev + g)) / denom;
        f_prev = g + 0.5 * h * K[0] * c[n];
    }
    return c;
}

} // namespace detail

// Volterra oracle. Runs the trapezoidal scheme at h and h/2 and combines them by
// Richardson extrapolation (the scheme's error expands in even powers of h).
inline EvolveResult evolve_kernel(const QubitSpec& qubit, const BathSpec& bath, const EngineConfig& cfg) {
    cfg.validate();
    qubit.validate();
    bath.validate();
    EvolveResult out;
    out.dt = resolve_dt(qubit, bath, cfg);
    const std::size_t n_steps = step_count(cfg.t_max, out.dt);
    out.steps = n_steps;

    const auto coarse = detail::solve_volterra(build_kernel(qubit, bath, out.dt, n_steps), n_steps);
    const auto fine = detail::solve_volterra(build_kernel(qubit, bath, 0.5 * out.dt, 2 * n_steps), 2 * n_steps);

    for (std::size_t n = 0; n <= n_steps; ++n) {
        if (n % cfg.sample_stride != 0 && n != n_steps) continue;
        const cplx c0 = (4.0 * fine[2 * n] - coarse[n]) / 3.0;
        const double p = std::norm(c0);
        // only |C0| is available in this picture; the recorded norm error is the excess over 1
        const double excess = std::max(0.0, p - 1.0);
        if (!detail::record_sample(out, static_cast<double>(n) * out.dt, p, excess, cfg.norm_tolerance)) break;
    }
    return out;
}

} // namespace qbath::dynamics
