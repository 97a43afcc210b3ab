// runner.hpp: Experiment orchestration: bath construction, engines, analytics, CSV + manifest
//
// Exit codes: 0 success, 1 configuration error, 2 numerical failure, 3 I/O error.

#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <limits>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "qbath/analytics.hpp"
#include "qbath/bath.hpp"
#include "qbath/circuit.hpp"
#include "qbath/config.hpp"
#include "qbath/dynamics.hpp"
#include "qbath/io.hpp"

namespace qbath::runner {

namespace fs = std::filesystem;

inline constexpr const char* kToolVersion = "1.0.0";

enum ExitCode : int { kSuccess = 0, kConfigError = 1, kNumericalFailure = 2, kIoError = 3 };

using KeyValues = std::vector<std::pair<std::string, std::string>>;

inline std::string value_or_none(const std::optional<double>& v) { return v ? io::fmt17(*v) : "none"; }

inline std::string key_values_text(const KeyValues& kv) {
    std::string s;
    for (const auto& [k, v] : kv) s += k + " = " + v + '\n';
    return s;
}

// ------------------------------ bath ---------------------------------------

inline BathSpec build_bath(const config::RunConfig& cfg) {
    const auto& b = *cfg.bath;
    switch (b.kind) {
        case BathKind::TransmissionLine:
            return bath::build_transmission_line_bath({b.delta_omega, b.g, b.n_modes});
        case BathKind::JJArray:
            return bath::build_jj_array_bath(cfg.circuit->spec(), b.g, b.max_modes);
        case BathKind::UniformTLS: {
            bath::UniformTLSParams p;
            p.n_tls = b.n_tls;
            p.omega_min = b.omega_min;
            p.omega_max = b.omega_max;
            p.gamma0 = b.gamma0;
            p.gamma_max = b.gamma_max;
            p.seed = b.seed;
            return bath::build_uniform_tls_bath(p);
        }
        case BathKind::DegenerateTLS:
            return bath::build_degenerate_tls_bath({b.n_tls, b.r, b.lambda0, b.seed}, cfg.qubit.omega);
        case BathKind::Custom: {
            auto spec = io::parse_bath_csv(io::read_text(b.file));
            spec.validate();
            return spec;
        }
    }
    throw InvalidArgument("unknown bath kind");
}

// ------------------------------ predictions --------------------------------

struct Predictions {
    double lambda0{0.0};
    std::optional<double> gamma;
    std::optional<double> revival_time;
    std::optional<double> plateau;
    std::optional<double> oscillation_minimum;
    KeyValues extra;
};

inline Predictions predict(const config::RunConfig& cfg, const BathSpec& spec) {
    Predictions p;
    p.lambda0 = lambda0(spec);
    const double omega = cfg.qubit.omega;
    const auto& b = *cfg.bath;
    switch (b.kind) {
        case BathKind::TransmissionLine:
            p.gamma = analytics::decay_rate_line(b.g, omega, b.delta_omega);
            p.revival_time = analytics::revival_time(b.delta_omega);
            break;
        case BathKind::JJArray: {
            // golden rule with the local spacing and coupling of the mode nearest the qubit
            if (spec.size() >= 2) {
                std::size_t n = 0;
                for (std::size_t i = 1; i < spec.size(); ++i) {
                    if (std::abs(spec.modes[i].omega - omega) < std::abs(spec.modes[n].omega - omega)) n = i;
                }
                const std::size_t hi = std::min(n + 1, spec.size() - 1);
                const std::size_t lo = hi - 1;
                const double spacing = spec.modes[hi].omega - spec.modes[lo].omega;
                const double g2 = spec.modes[n].gamma * spec.modes[n].gamma;
                p.gamma = 2.0 * std::numbers::pi * g2 / spacing;
                p.revival_time = analytics::revival_time(spacing);
                p.extra.emplace_back("local_mode_spacing", io::fmt17(spacing));
            }
            break;
        }
        case BathKind::UniformTLS: {
            const double nu0 = static_cast<double>(spec.size()) / (b.omega_max - b.omega_min);
            const double g0 = analytics::decay_rate_tls(nu0, p.lambda0, spec.size());
            p.gamma = g0;
            if (g0 > 0.0) p.plateau = analytics::long_time_plateau(omega, spec.size(), g0);
            p.extra.emplace_back("nu0_band_average", io::fmt17(nu0));
            p.extra.emplace_back("nu_empirical_at_omega",
                                 io::fmt17(bath::density_at(spec, omega, 0.1 * (b.omega_max - b.omega_min))));
            if (b.gamma0) {
                p.extra.emplace_back("gamma0_target", io::fmt17(*b.gamma0));
                if (*b.gamma0 > 0.0) {
                    p.extra.emplace_back("plateau_target", io::fmt17(analytics::long_time_plateau(omega, spec.size(), *b.gamma0)));
                }
            }
            break;
        }
        case BathKind::DegenerateTLS: {
            p.oscillation_minimum = analytics::detuned_population_minimum(p.lambda0, b.r, omega);
            const double w = analytics::detuned_rabi_frequency(p.lambda0, b.r, omega);
            if (w > 0.0) p.revival_time = std::numbers::pi / w;
            break;
        }
        case BathKind::Custom:
            break;
    }
    return p;
}

// ------------------------------ analysis -----------------------------------

struct AnalysisResult {
    std::optional<analytics::DecayFit> fit;
    std::string fit_status{"not_run"};
    std::optional<double> revival_time;
    std::optional<double> plateau_mean;
};

inline AnalysisResult analyze(const TimeSeries& series, const config::AnalysisSection& a) {
    AnalysisResult r;
    try {
        r.fit = analytics::fit_exponential(series, a.fit_p_hi, a.fit_p_lo);
        r.fit_status = "ok";
    } catch (const analytics::InsufficientData& e) {
        r.fit_status = std::string("insufficient_data: ") + e.what();
    }
    r.revival_time = analytics::detect_revival(series, a.revival_floor_factor);
    if (a.plateau_t_lo) {
        try {
            r.plateau_mean = analytics::time_average(series, *a.plateau_t_lo, *a.plateau_t_hi);
        } catch (const analytics::InsufficientData&) {
        }
    }
    return r;
}

inline std::optional<double> relative_error(const std::optional<double>& measured, const std::optional<double>& predicted) {
    if (!measured || !predicted || *predicted == 0.0) return std::nullopt;
    return (*measured - *predicted) / *predicted;
}

// Flat predicted-vs-measured summary.
inline KeyValues make_report(const std::optional<Predictions>& pred, const AnalysisResult& a) {
    KeyValues kv;
    std::optional<double> gamma_fit;
    if (a.fit) gamma_fit = a.fit->gamma_fit;
    if (pred) kv.emplace_back("lambda0", io::fmt17(pred->lambda0));
    kv.emplace_back("gamma_predicted", value_or_none(pred ? pred->gamma : std::nullopt));
    kv.emplace_back("gamma_fit", value_or_none(gamma_fit));
    kv.emplace_back("gamma_rel_error", value_or_none(relative_error(gamma_fit, pred ? pred->gamma : std::nullopt)));
    kv.emplace_back("fit_status", a.fit_status);
    kv.emplace_back("fit_r_squared", value_or_none(a.fit ? std::optional<double>(a.fit->r_squared) : std::nullopt));
    kv.emplace_back("fit_t_lo", value_or_none(a.fit ? std::optional<double>(a.fit->t_lo) : std::nullopt));
    kv.emplace_back("fit_t_hi", value_or_none(a.fit ? std::optional<double>(a.fit->t_hi) : std::nullopt));
    kv.emplace_back("revival_predicted", value_or_none(pred ? pred->revival_time : std::nullopt));
    kv.emplace_back("revival_detected", value_or_none(a.revival_time));
    kv.emplace_back("revival_rel_error",
                    value_or_none(relative_error(a.revival_time, pred ? pred->revival_time : std::nullopt)));
    kv.emplace_back("plateau_predicted", value_or_none(pred ? pred->plateau : std::nullopt));
    kv.emplace_back("plateau_mean", value_or_none(a.plateau_mean));
    std::optional<double> ratio;
    if (a.plateau_mean && pred && pred->plateau) ratio = *a.plateau_mean / *pred->plateau;
    kv.emplace_back("plateau_ratio", value_or_none(ratio));
    if (pred && pred->oscillation_minimum) kv.emplace_back("oscillation_minimum_predicted", io::fmt17(*pred->oscillation_minimum));
    if (pred) kv.insert(kv.end(), pred->extra.begin(), pred->extra.end());
    return kv;
}

// ------------------------------ manifest -----------------------------------

class Manifest {
public:
    Manifest(fs::path dir, std::string subcommand, const config::RunConfig& cfg)
        : dir_(std::move(dir)), subcommand_(std::move(subcommand)), config_text_(config::serialize_config(cfg)),
          start_(std::chrono::steady_clock::now()) {
        if (cfg.bath && (cfg.bath->kind == BathKind::UniformTLS || cfg.bath->kind == BathKind::DegenerateTLS)) {
            seed_ = cfg.bath->seed;
        }
    }

    fs::path path() const { return dir_ / "manifest.ini"; }

    void add_file(const std::string& name) { files_.push_back(name); }
    void add_derived(std::string k, std::string v) { derived_.emplace_back(std::move(k), std::move(v)); }
    void add_warning(std::string w) { warnings_.push_back(std::move(w)); }
    void set_report(KeyValues r) { report_ = std::move(r); }

    void write_pending() { write("pending", -1, false); }
    void finalize(int exit_code, bool partial) {
        const char* status = exit_code == kSuccess          ? "ok"
                             : exit_code == kNumericalFailure ? "numerical_failure"
                             : exit_code == kIoError          ? "io_error"
                                                              : "config_error";
        write(status, exit_code, partial);
    }

private:
    void write(const std::string& status, int exit_code, bool partial) {
        std::ostringstream os;
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        os << "[manifest]\n";
        os << "tool_version = " << kToolVersion << '\n';
        os << "subcommand = " << subcommand_ << '\n';
        os << "status = " << status << '\n';
        os << "exit_code = " << (exit_code < 0 ? std::string("pending") : std::to_string(exit_code)) << '\n';
        os << "partial_output = " << (partial ? "true" : "false") << '\n';
        os << "seed = " << (seed_ ? std::to_string(*seed_) : std::string("none")) << '\n';
        os << "generator = " << bath::kGeneratorId << '\n';
        os << "wall_clock_seconds = " << io::fmt17(elapsed) << '\n';
        os << "\n[derived]\n" << key_values_text(derived_);
        os << "\n[report]\n" << key_values_text(report_);
        os << "\n[warnings]\n";
        for (std::size_t i = 0; i < warnings_.size(); ++i) os << "warning_" << i + 1 << " = " << warnings_[i] << '\n';
        os << "\n[files]\n";
        for (const auto& f : files_) {
            const fs::path p = dir_ / f;
            os << f << " = " << (fs::exists(p) ? io::sha256_file(p) : std::string("missing")) << '\n';
        }
        // resolved configuration, one [config.<section>] per section
        std::istringstream cfg(config_text_);
        std::string line;
        os << '\n';
        while (std::getline(cfg, line)) {
            if (!line.empty() && line.front() == '[') os << "[config." << line.substr(1) << '\n';
            else os << line << '\n';
        }
        io::write_text(path(), os.str());
    }

    fs::path dir_;
    std::string subcommand_;
    std::string config_text_;
    std::chrono::steady_clock::time_point start_;
    std::optional<std::uint64_t> seed_;
    std::vector<std::string> files_;
    KeyValues derived_;
    KeyValues report_;
    std::vector<std::string> warnings_;
};

// ------------------------------ pipelines ----------------------------------

struct RunOutcome {
    int exit_code{kSuccess};
    fs::path directory;
    std::string message;
    AnalysisResult analysis;
    std::optional<Predictions> predictions;
};

// Frequency unit for circuit CSVs.
inline double circuit_unit(const config::RunConfig& cfg) {
    const auto spec = cfg.circuit->spec();
    switch (cfg.output.units) {
        case config::FrequencyUnits::Plasma: return spec.plasma_frequency();
        case config::FrequencyUnits::Line: return spec.line_frequency();
        case config::FrequencyUnits::Auto: return spec.C > 0.0 ? spec.plasma_frequency() : spec.line_frequency();
    }
    return spec.line_frequency();
}

inline std::vector<io::ImpedanceRow> impedance_sweep(const circuit::CircuitSpec& spec, double lo, double hi,
                                                     std::size_t points, double unit) {
    std::vector<io::ImpedanceRow> rows(points);
    const double a = std::log(lo), b = std::log(hi);
    for (std::size_t i = 0; i < points; ++i) {
        const double w = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(points - 1));
        rows[i] = {w, circuit::input_impedance(spec, w * unit).impedance()};
    }
    return rows;
}

namespace detail {

inline void write_impedance(const config::RunConfig& cfg, const fs::path& dir, Manifest& m) {
    const auto spec = cfg.circuit->spec();
    const double unit = circuit_unit(cfg);
    const double lo = cfg.output.impedance_omega_min.value_or(1e-3);
    const double hi = cfg.output.impedance_omega_max.value_or(2.0);
    io::write_text(dir / "impedance.csv", io::impedance_csv(impedance_sweep(spec, lo, hi, cfg.output.impedance_points, unit)));
    m.add_file("impedance.csv");
    m.add_derived("plasma_frequency", io::fmt17(spec.plasma_frequency()));
    m.add_derived("characteristic_impedance", io::fmt17(spec.characteristic_impedance()));
}

template <typename Body>
RunOutcome guarded(const fs::path& dir, Body&& body) {
    RunOutcome out;
    out.directory = dir;
    try {
        body(out);
    } catch (const config::ConfigError& e) {
        out.exit_code = kConfigError;
        out.message = e.what();
    } catch (const io::IoError& e) {
        out.exit_code = kIoError;
        out.message = e.what();
    } catch (const fs::filesystem_error& e) {
        out.exit_code = kIoError;
        out.message = e.what();
    } catch (const InvalidArgument& e) {
        out.exit_code = kConfigError;
        out.message = e.what();
    }
    return out;
}

} // namespace detail

inline RunOutcome run_impedance(const config::RunConfig& cfg, const fs::path& dir) {
    return detail::guarded(dir, [&](RunOutcome&) {
        if (!cfg.circuit) throw config::MissingSectionError("impedance requires a [circuit] section");
        cfg.circuit->spec().validate();
        fs::create_directories(dir);
        Manifest m(dir, "impedance", cfg);
        m.write_pending();
        m.add_derived("frequency_unit", io::fmt17(circuit_unit(cfg)));
        detail::write_impedance(cfg, dir, m);
        m.finalize(kSuccess, false);
    });
}

// Dispersion table plus resonances located by the impedance scanner over the same band.
inline RunOutcome run_dispersion(const config::RunConfig& cfg, const fs::path& dir) {
    return detail::guarded(dir, [&](RunOutcome&) {
        if (!cfg.circuit) throw config::MissingSectionError("dispersion requires a [circuit] section");
        const auto spec = cfg.circuit->spec();
        spec.validate();
        if (spec.termination == circuit::Termination::Load) {
            throw config::DomainError("circuit.termination: dispersion needs open or short");
        }
        fs::create_directories(dir);
        Manifest m(dir, "dispersion", cfg);
        m.write_pending();
        const double unit = circuit_unit(cfg);
        const std::size_t n = std::min(cfg.output.dispersion_modes, spec.N);
        const auto table = circuit::dispersion_table(spec, n);
        io::write_text(dir / "dispersion.csv", io::dispersion_csv(table, unit));
        m.add_file("dispersion.csv");

        const double lo = 0.5 * table.front().omega_n;
        const double hi = 0.5 * (table.back().omega_n + (n < spec.N ? circuit::dispersion(spec, n + 1) : spec.plasma_frequency()));
        std::string res = "index,omega\n";
        const auto modes = circuit::find_modes(spec, lo, std::isfinite(hi) ? hi : 2.0 * table.back().omega_n);
        for (std::size_t i = 0; i < modes.size(); ++i) res += std::to_string(i + 1) + ',' + io::fmt17(modes[i] / unit) + '\n';
        io::write_text(dir / "resonances.csv", res);
        m.add_file("resonances.csv");
        m.add_derived("frequency_unit", io::fmt17(unit));
        m.add_derived("resonances_found", std::to_string(modes.size()));
        if (cfg.output.emit_impedance_sweep()) detail::write_impedance(cfg, dir, m);
        m.finalize(kSuccess, false);
    });
}

inline RunOutcome run_evolve(const config::RunConfig& cfg, const fs::path& dir) {
    return detail::guarded(dir, [&](RunOutcome& out) {
        if (!cfg.bath || !cfg.engine) throw config::MissingSectionError("evolve requires [bath] and [engine] sections");
        fs::create_directories(dir);
        Manifest m(dir, "evolve", cfg);
        m.write_pending();

        const BathSpec spec = build_bath(cfg);
        for (const auto& w : spec.warnings) m.add_warning(w);
        for (const auto& md : spec.modes) {
            if (md.omega < 0.0) {
                m.add_warning("negative bath frequency present");
                break;
            }
        }
        if (cfg.output.emit_bath_dump) {
            io::write_text(dir / "bath.csv", io::bath_csv(spec));
            m.add_file("bath.csv");
        }
        if (cfg.output.emit_impedance_sweep() && cfg.circuit) detail::write_impedance(cfg, dir, m);

        const auto pred = predict(cfg, spec);
        out.predictions = pred;
        m.add_derived("n_modes", std::to_string(spec.size()));
        m.add_derived("lambda0", io::fmt17(pred.lambda0));
        m.add_derived("predicted_gamma", value_or_none(pred.gamma));
        m.add_derived("predicted_revival_time", value_or_none(pred.revival_time));
        m.add_derived("predicted_plateau", value_or_none(pred.plateau));

        const auto ecfg = cfg.engine->engine_config();
        const auto result = cfg.engine->engine == config::EngineKind::Direct
                                ? dynamics::evolve(cfg.qubit, spec, ecfg)
                                : dynamics::evolve_kernel(cfg.qubit, spec, ecfg);
        m.add_derived("dt", io::fmt17(result.dt));
        m.add_derived("steps", std::to_string(result.steps));
        m.add_derived("engine_status", dynamics::to_string(result.status));

        io::write_text(dir / "series.csv", io::series_csv(result.series));
        m.add_file("series.csv");
        for (std::size_t k = 0; k < result.series.snapshots.size(); ++k) {
            const std::string name = "snapshot_" + std::to_string(k + 1) + ".csv";
            io::write_text(dir / name, io::snapshot_csv(spec, result.series.snapshots[k]));
            m.add_file(name);
            m.add_derived("snapshot_" + std::to_string(k + 1) + "_t", io::fmt17(result.series.snapshots[k].t));
        }

        out.analysis = analyze(result.series, cfg.analysis);
        m.set_report(make_report(pred, out.analysis));
        out.exit_code = result.ok() ? kSuccess : kNumericalFailure;
        out.message = result.message;
        m.finalize(out.exit_code, !result.ok());
    });
}

// ------------------------------ sweep --------------------------------------

struct SweepRow {
    std::string value;
    RunOutcome outcome;
};

// One evolve run per value in <dir>/value_<i>; summary.csv lists the rows in input order.
inline int sweep(const std::string& base_text, const std::string& param, const std::vector<std::string>& values,
                 std::size_t jobs, const fs::path& dir, const std::optional<std::uint64_t>& seed = std::nullopt) {
    if (values.empty()) throw config::DomainError("sweep: value list is empty");
    std::vector<config::RunConfig> configs;
    for (const auto& v : values) {
        std::string text = config::override_key(base_text, param, v);
        if (seed) text = config::override_key(text, "bath.seed", std::to_string(*seed));
        configs.push_back(config::parse_config(text));
    }
    fs::create_directories(dir);

    std::vector<SweepRow> rows(values.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < values.size(); i = next++) {
            rows[i] = {values[i], run_evolve(configs[i], dir / ("value_" + std::to_string(i)))};
        }
    };
    const std::size_t n_threads = std::clamp<std::size_t>(jobs, 1, values.size());
    {
        std::vector<std::jthread> pool;
        for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
        worker();
    }

    int status = kSuccess;
    std::string csv = "value,gamma_fit,revival_time,plateau_mean,status\n";
    auto num = [](const std::optional<double>& v) { return v ? io::fmt17(*v) : std::string("nan"); };
    for (const auto& r : rows) {
        const auto& a = r.outcome.analysis;
        csv += r.value + ',' + num(a.fit ? std::optional<double>(a.fit->gamma_fit) : std::nullopt) + ',' +
               num(a.revival_time) + ',' + num(a.plateau_mean) + ',' + std::to_string(r.outcome.exit_code) + '\n';
        status = std::max(status, r.outcome.exit_code);
    }
    io::write_text(dir / "summary.csv", csv);
    return status;
}

} // namespace qbath::runner
