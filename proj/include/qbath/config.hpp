// config.hpp: Run configuration: flat INI-style grammar, validation, canonical serialization
//
// Grammar:
//   [section]            header on its own line
//   key = value          one assignment per line; lists are comma-separated
//   # comment            full-line or trailing
// Numbers accept decimal or scientific notation. Unknown sections or keys are errors.

#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qbath/bath.hpp"
#include "qbath/circuit.hpp"
#include "qbath/core.hpp"
#include "qbath/dynamics.hpp"

namespace qbath::config {

struct ConfigError : Error {
    using Error::Error;
};
struct SyntaxError : ConfigError {
    using ConfigError::ConfigError;
};
struct UnknownKeyError : ConfigError {
    using ConfigError::ConfigError;
};
struct MissingKeyError : ConfigError {
    using ConfigError::ConfigError;
};
struct MissingSectionError : ConfigError {
    using ConfigError::ConfigError;
};
struct DomainError : ConfigError {
    using ConfigError::ConfigError;
};

enum class EngineKind { Direct, Kernel };
enum class FrequencyUnits { Auto, Plasma, Line };

struct CircuitSection {
    double L{1.0};
    double C{0.0};
    double Cg{1.0};
    std::size_t N{1};
    circuit::Termination termination{circuit::Termination::Open};
    double load_re{0.0};
    double load_im{0.0};

    circuit::CircuitSpec spec() const { return {L, C, Cg, N, termination, cplx{load_re, load_im}}; }
    friend bool operator==(const CircuitSection&, const CircuitSection&) = default;
};

struct BathSection {
    BathKind kind{BathKind::TransmissionLine};
    // line
    double delta_omega{0.01};
    double g{0.001};
    std::size_t n_modes{300};
    // jj_array
    std::size_t max_modes{300};
    // uniform / degenerate
    std::size_t n_tls{1000};
    double omega_min{0.0};
    double omega_max{2.0};
    std::optional<double> gamma0;
    std::optional<double> gamma_max;
    double r{0.0};
    double lambda0{0.01};
    std::uint64_t seed{1};
    // custom
    std::string file;

    friend bool operator==(const BathSection&, const BathSection&) = default;
};

struct EngineSection {
    std::optional<double> dt;
    double t_max{0.0};
    std::size_t sample_stride{1};
    std::vector<double> snapshot_times;
    double norm_tolerance{1e-7};
    EngineKind engine{EngineKind::Direct};

    dynamics::EngineConfig engine_config() const {
        return {dt, t_max, sample_stride, snapshot_times, norm_tolerance};
    }
    friend bool operator==(const EngineSection&, const EngineSection&) = default;
};

struct AnalysisSection {
    double fit_p_hi{1e-1};
    double fit_p_lo{1e-7};
    double revival_floor_factor{1e6};
    std::optional<double> plateau_t_lo;
    std::optional<double> plateau_t_hi;

    friend bool operator==(const AnalysisSection&, const AnalysisSection&) = default;
};

struct OutputSection {
    std::string directory{"out"};
    bool emit_bath_dump{true};
    std::optional<double> impedance_omega_min;
    std::optional<double> impedance_omega_max;
    std::size_t impedance_points{10000};
    FrequencyUnits units{FrequencyUnits::Auto};
    std::size_t dispersion_modes{20};

    bool emit_impedance_sweep() const noexcept { return impedance_omega_min && impedance_omega_max; }
    friend bool operator==(const OutputSection&, const OutputSection&) = default;
};

struct RunConfig {
    QubitSpec qubit;
    std::optional<CircuitSection> circuit;
    std::optional<BathSection> bath;
    std::optional<EngineSection> engine;
    AnalysisSection analysis;
    OutputSection output;

    friend bool operator==(const RunConfig& a, const RunConfig& b) {
        return a.qubit.omega == b.qubit.omega && a.circuit == b.circuit && a.bath == b.bath &&
               a.engine == b.engine && a.analysis == b.analysis && a.output == b.output;
    }
};

// ------------------------------ lexical helpers ----------------------------

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline double parse_double(const std::string& path, const std::string& v) {
    double out = 0.0;
    const char* first = v.data();
    const char* last = v.data() + v.size();
    if (!v.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last || !std::isfinite(out)) {
        throw SyntaxError(path + ": expected a number, got '" + v + "'");
    }
    return out;
}

inline std::uint64_t parse_u64(const std::string& path, const std::string& v) {
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) {
        throw SyntaxError(path + ": expected a non-negative integer, got '" + v + "'");
    }
    return out;
}

// Integers may also be written in scientific notation (e.g. 1e5) if exactly integral.
inline std::size_t parse_count(const std::string& path, const std::string& v) {
    if (v.find_first_of(".eE") == std::string::npos) return static_cast<std::size_t>(parse_u64(path, v));
    const double d = parse_double(path, v);
    if (d < 0.0 || d != std::floor(d) || d > 9.0e15) {
        throw SyntaxError(path + ": expected a non-negative integer, got '" + v + "'");
    }
    return static_cast<std::size_t>(d);
}

inline bool parse_bool(const std::string& path, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw SyntaxError(path + ": expected true/false, got '" + v + "'");
}

inline std::vector<double> parse_list(const std::string& path, const std::string& v) {
    std::vector<double> out;
    if (trim(v).empty()) return out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(path, trim(item)));
    return out;
}

using Section = std::map<std::string, std::string>;
using Document = std::map<std::string, Section>;

inline Document tokenize(std::string_view text) {
    Document doc;
    std::string current;
    std::size_t line_no = 0;
    std::stringstream ss{std::string(text)};
    std::string raw;
    while (std::getline(ss, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(std::string_view(raw).substr(0, hash));
        if (line.empty()) continue;
        const std::string where = "line " + std::to_string(line_no);
        if (line.front() == '[') {
            if (line.back() != ']') throw SyntaxError(where + ": unterminated section header");
            current = trim(std::string_view(line).substr(1, line.size() - 2));
            if (current.empty()) throw SyntaxError(where + ": empty section name");
            if (doc.count(current)) throw SyntaxError(where + ": duplicate section [" + current + "]");
            doc[current];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw SyntaxError(where + ": expected key = value");
        if (current.empty()) throw SyntaxError(where + ": assignment outside any section");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (key.empty()) throw SyntaxError(where + ": empty key");
        auto& sec = doc[current];
        if (sec.count(key)) throw SyntaxError(where + ": duplicate key " + current + "." + key);
        sec[key] = value;
    }
    return doc;
}

// Tracks consumed keys so leftovers can be reported as unknown.
class SectionReader {
public:
    SectionReader(std::string name, const Section& sec) : name_(std::move(name)), sec_(sec) {}

    std::string path(const std::string& key) const { return name_ + "." + key; }

    std::optional<std::string> get(const std::string& key) {
        used_.insert(key);
        const auto it = sec_.find(key);
        if (it == sec_.end()) return std::nullopt;
        return it->second;
    }
    bool has(const std::string& key) const { return sec_.count(key) > 0; }

    std::string require(const std::string& key) {
        auto v = get(key);
        if (!v) throw MissingKeyError("missing required key " + path(key));
        return *v;
    }
    double number(const std::string& key, double fallback) {
        auto v = get(key);
        return v ? parse_double(path(key), *v) : fallback;
    }
    double required_number(const std::string& key) { return parse_double(path(key), require(key)); }
    std::optional<double> optional_number(const std::string& key) {
        auto v = get(key);
        if (!v) return std::nullopt;
        return parse_double(path(key), *v);
    }
    std::size_t count(const std::string& key, std::size_t fallback) {
        auto v = get(key);
        return v ? parse_count(path(key), *v) : fallback;
    }
    std::size_t required_count(const std::string& key) { return parse_count(path(key), require(key)); }

    void reject_unknown() const {
        for (const auto& [k, v] : sec_) {
            if (!used_.count(k)) throw UnknownKeyError("unknown key " + path(k));
        }
    }

private:
    std::string name_;
    const Section& sec_;
    std::set<std::string> used_;
};

inline void require_domain(bool ok, const std::string& path, const std::string& what) {
    if (!ok) throw DomainError(path + ": " + what);
}

} // namespace detail

// ------------------------------ parse --------------------------------------

inline RunConfig parse_config(std::string_view text) {
    using namespace detail;
    const Document doc = tokenize(text);
    static const std::set<std::string> known{"qubit", "circuit", "bath", "engine", "analysis", "output"};
    for (const auto& [name, sec] : doc) {
        if (!known.count(name)) throw UnknownKeyError("unknown section [" + name + "]");
    }
    if (!doc.count("bath") && !doc.count("circuit")) {
        throw MissingSectionError("config must define a [bath] or [circuit] section");
    }

    RunConfig cfg;
    static const Section empty;
    auto section = [&](const std::string& n) -> const Section& {
        const auto it = doc.find(n);
        return it == doc.end() ? empty : it->second;
    };

    {
        SectionReader q("qubit", section("qubit"));
        cfg.qubit.omega = q.number("omega", 1.0);
        require_domain(cfg.qubit.omega > 0.0, q.path("omega"), "must be > 0");
        q.reject_unknown();
    }

    if (doc.count("circuit")) {
        SectionReader c("circuit", section("circuit"));
        CircuitSection cs;
        cs.L = c.required_number("L");
        cs.C = c.number("C", 0.0);
        cs.Cg = c.required_number("Cg");
        cs.N = c.required_count("N");
        const std::string term = c.get("termination").value_or("open");
        if (term == "open") cs.termination = circuit::Termination::Open;
        else if (term == "short") cs.termination = circuit::Termination::Short;
        else if (term == "load") cs.termination = circuit::Termination::Load;
        else throw DomainError(c.path("termination") + ": expected open|short|load, got '" + term + "'");
        if (cs.termination == circuit::Termination::Load) {
            cs.load_re = c.number("load_re", 0.0);
            cs.load_im = c.number("load_im", 0.0);
        } else {
            require_domain(!c.has("load_re") && !c.has("load_im"), c.path("load_re"),
                           "load impedance given without termination = load");
        }
        require_domain(cs.L > 0.0, c.path("L"), "must be > 0");
        require_domain(cs.C >= 0.0, c.path("C"), "must be >= 0");
        require_domain(cs.Cg > 0.0, c.path("Cg"), "must be > 0");
        require_domain(cs.N >= 1, c.path("N"), "must be >= 1");
        c.reject_unknown();
        cfg.circuit = cs;
    }

    if (doc.count("bath")) {
        SectionReader b("bath", section("bath"));
        BathSection bs;
        const std::string kind = b.require("kind");
        const auto k = bath_kind_from_string(kind);
        if (!k) throw DomainError(b.path("kind") + ": expected line|jj_array|uniform|degenerate|custom, got '" + kind + "'");
        bs.kind = *k;
        switch (bs.kind) {
            case BathKind::TransmissionLine:
                bs.delta_omega = b.required_number("delta_omega");
                bs.g = b.required_number("g");
                bs.n_modes = b.required_count("n_modes");
                require_domain(bs.delta_omega > 0.0, b.path("delta_omega"), "must be > 0");
                require_domain(bs.g >= 0.0, b.path("g"), "must be >= 0");
                require_domain(bs.n_modes >= 1, b.path("n_modes"), "must be >= 1");
                break;
            case BathKind::JJArray:
                bs.g = b.required_number("g");
                bs.max_modes = b.required_count("max_modes");
                require_domain(bs.g >= 0.0, b.path("g"), "must be >= 0");
                require_domain(bs.max_modes >= 1, b.path("max_modes"), "must be >= 1");
                if (!doc.count("circuit")) throw MissingSectionError("bath.kind = jj_array requires a [circuit] section");
                require_domain(cfg.circuit->termination != circuit::Termination::Load, "circuit.termination",
                               "jj_array bath requires open or short termination");
                break;
            case BathKind::UniformTLS:
                bs.n_tls = b.required_count("n_tls");
                bs.omega_min = b.number("omega_min", 0.0);
                bs.omega_max = b.number("omega_max", 2.0);
                bs.gamma0 = b.optional_number("gamma0");
                bs.gamma_max = b.optional_number("gamma_max");
                bs.seed = b.has("seed") ? parse_u64(b.path("seed"), *b.get("seed")) : 1;
                require_domain(bs.n_tls >= 1, b.path("n_tls"), "must be >= 1");
                require_domain(bs.omega_min >= 0.0 && bs.omega_max > bs.omega_min, b.path("omega_max"),
                               "require 0 <= omega_min < omega_max");
                require_domain(!(bs.gamma0 && bs.gamma_max), b.path("gamma0"),
                               "gamma0 and gamma_max are mutually exclusive");
                require_domain(bs.gamma0 || bs.gamma_max, b.path("gamma0"), "one of gamma0 / gamma_max is required");
                require_domain(!bs.gamma0 || *bs.gamma0 >= 0.0, b.path("gamma0"), "must be >= 0");
                require_domain(!bs.gamma_max || *bs.gamma_max >= 0.0, b.path("gamma_max"), "must be >= 0");
                break;
            case BathKind::DegenerateTLS:
                bs.n_tls = b.required_count("n_tls");
                bs.r = b.number("r", 0.0);
                bs.lambda0 = b.required_number("lambda0");
                bs.seed = b.has("seed") ? parse_u64(b.path("seed"), *b.get("seed")) : 1;
                require_domain(bs.n_tls >= 1, b.path("n_tls"), "must be >= 1");
                require_domain(bs.r >= 0.0, b.path("r"), "must be >= 0");
                require_domain(bs.lambda0 > 0.0, b.path("lambda0"), "must be > 0");
                break;
            case BathKind::Custom:
                bs.file = b.require("file");
                require_domain(!bs.file.empty(), b.path("file"), "must not be empty");
                break;
        }
        b.reject_unknown();
        cfg.bath = bs;
        if (!doc.count("engine")) throw MissingSectionError("a [bath] section requires an [engine] section");
    }

    if (doc.count("engine")) {
        SectionReader e("engine", section("engine"));
        EngineSection es;
        const std::string dt = e.get("dt").value_or("auto");
        if (dt != "auto") {
            es.dt = parse_double(e.path("dt"), dt);
            require_domain(*es.dt > 0.0, e.path("dt"), "must be > 0 or auto");
        }
        es.t_max = e.required_number("t_max");
        es.sample_stride = e.count("sample_stride", 1);
        if (auto v = e.get("snapshot_times")) es.snapshot_times = parse_list(e.path("snapshot_times"), *v);
        es.norm_tolerance = e.number("norm_tolerance", 1e-7);
        const std::string kind = e.get("engine").value_or("direct");
        if (kind == "direct") es.engine = EngineKind::Direct;
        else if (kind == "kernel") es.engine = EngineKind::Kernel;
        else throw DomainError(e.path("engine") + ": expected direct|kernel, got '" + kind + "'");
        require_domain(es.t_max > 0.0, e.path("t_max"), "must be > 0");
        require_domain(es.sample_stride >= 1, e.path("sample_stride"), "must be >= 1");
        require_domain(es.norm_tolerance > 0.0, e.path("norm_tolerance"), "must be > 0");
        for (double t : es.snapshot_times) {
            require_domain(t >= 0.0 && t <= es.t_max, e.path("snapshot_times"), "times must lie in [0, t_max]");
        }
        e.reject_unknown();
        cfg.engine = es;
    }

    {
        SectionReader a("analysis", section("analysis"));
        auto& an = cfg.analysis;
        an.fit_p_hi = a.number("fit_p_hi", an.fit_p_hi);
        an.fit_p_lo = a.number("fit_p_lo", an.fit_p_lo);
        an.revival_floor_factor = a.number("revival_floor_factor", an.revival_floor_factor);
        an.plateau_t_lo = a.optional_number("plateau_t_lo");
        an.plateau_t_hi = a.optional_number("plateau_t_hi");
        require_domain(an.fit_p_hi > an.fit_p_lo && an.fit_p_lo > 0.0, a.path("fit_p_lo"),
                       "require fit_p_hi > fit_p_lo > 0");
        require_domain(an.revival_floor_factor > 1.0, a.path("revival_floor_factor"), "must be > 1");
        require_domain(an.plateau_t_lo.has_value() == an.plateau_t_hi.has_value(), a.path("plateau_t_hi"),
                       "plateau_t_lo and plateau_t_hi must be given together");
        require_domain(!an.plateau_t_lo || *an.plateau_t_lo < *an.plateau_t_hi, a.path("plateau_t_hi"),
                       "must exceed plateau_t_lo");
        a.reject_unknown();
    }

    {
        SectionReader o("output", section("output"));
        auto& out = cfg.output;
        out.directory = o.get("directory").value_or(out.directory);
        if (auto v = o.get("emit_bath_dump")) out.emit_bath_dump = parse_bool(o.path("emit_bath_dump"), *v);
        out.impedance_omega_min = o.optional_number("impedance_omega_min");
        out.impedance_omega_max = o.optional_number("impedance_omega_max");
        out.impedance_points = o.count("impedance_points", out.impedance_points);
        out.dispersion_modes = o.count("dispersion_modes", out.dispersion_modes);
        const std::string units = o.get("units").value_or("auto");
        if (units == "auto") out.units = FrequencyUnits::Auto;
        else if (units == "plasma") out.units = FrequencyUnits::Plasma;
        else if (units == "line") out.units = FrequencyUnits::Line;
        else throw DomainError(o.path("units") + ": expected auto|plasma|line, got '" + units + "'");
        require_domain(out.impedance_omega_min.has_value() == out.impedance_omega_max.has_value(),
                       o.path("impedance_omega_max"), "impedance_omega_min and impedance_omega_max go together");
        require_domain(!out.impedance_omega_min ||
                           (*out.impedance_omega_min > 0.0 && *out.impedance_omega_max > *out.impedance_omega_min),
                       o.path("impedance_omega_max"), "require 0 < impedance_omega_min < impedance_omega_max");
        require_domain(out.impedance_points >= 2, o.path("impedance_points"), "must be >= 2");
        require_domain(out.dispersion_modes >= 1, o.path("dispersion_modes"), "must be >= 1");
        require_domain(!(out.units == FrequencyUnits::Plasma && cfg.circuit && cfg.circuit->C == 0.0),
                       o.path("units"), "plasma units need C > 0");
        o.reject_unknown();
    }
    return cfg;
}

// ------------------------------ serialize ----------------------------------

// Canonical text with every default expanded; parse_config(serialize_config(c)) == c.
inline std::string serialize_config(const RunConfig& cfg) {
    using detail::format_double;
    std::ostringstream os;
    auto kv = [&](const char* k, const std::string& v) { os << k << " = " << v << '\n'; };

    os << "[qubit]\n";
    kv("omega", format_double(cfg.qubit.omega));

    if (cfg.circuit) {
        const auto& c = *cfg.circuit;
        os << "\n[circuit]\n";
        kv("L", format_double(c.L));
        kv("C", format_double(c.C));
        kv("Cg", format_double(c.Cg));
        kv("N", std::to_string(c.N));
        const char* term = c.termination == circuit::Termination::Open    ? "open"
                           : c.termination == circuit::Termination::Short ? "short"
                                                                          : "load";
        kv("termination", term);
        if (c.termination == circuit::Termination::Load) {
            kv("load_re", format_double(c.load_re));
            kv("load_im", format_double(c.load_im));
        }
    }

    if (cfg.bath) {
        const auto& b = *cfg.bath;
        os << "\n[bath]\n";
        kv("kind", std::string(to_string(b.kind)));
        switch (b.kind) {
            case BathKind::TransmissionLine:
                kv("delta_omega", format_double(b.delta_omega));
                kv("g", format_double(b.g));
                kv("n_modes", std::to_string(b.n_modes));
                break;
            case BathKind::JJArray:
                kv("g", format_double(b.g));
                kv("max_modes", std::to_string(b.max_modes));
                break;
            case BathKind::UniformTLS:
                kv("n_tls", std::to_string(b.n_tls));
                kv("omega_min", format_double(b.omega_min));
                kv("omega_max", format_double(b.omega_max));
                if (b.gamma0) kv("gamma0", format_double(*b.gamma0));
                if (b.gamma_max) kv("gamma_max", format_double(*b.gamma_max));
                kv("seed", std::to_string(b.seed));
                break;
            case BathKind::DegenerateTLS:
                kv("n_tls", std::to_string(b.n_tls));
                kv("r", format_double(b.r));
                kv("lambda0", format_double(b.lambda0));
                kv("seed", std::to_string(b.seed));
                break;
            case BathKind::Custom:
                kv("file", b.file);
                break;
        }
    }

    if (cfg.engine) {
        const auto& e = *cfg.engine;
        os << "\n[engine]\n";
        kv("dt", e.dt ? format_double(*e.dt) : "auto");
        kv("t_max", format_double(e.t_max));
        kv("sample_stride", std::to_string(e.sample_stride));
        std::string snaps;
        for (std::size_t i = 0; i < e.snapshot_times.size(); ++i) {
            if (i) snaps += ", ";
            snaps += format_double(e.snapshot_times[i]);
        }
        kv("snapshot_times", snaps);
        kv("norm_tolerance", format_double(e.norm_tolerance));
        kv("engine", e.engine == EngineKind::Direct ? "direct" : "kernel");
    }

    const auto& a = cfg.analysis;
    os << "\n[analysis]\n";
    kv("fit_p_hi", format_double(a.fit_p_hi));
    kv("fit_p_lo", format_double(a.fit_p_lo));
    kv("revival_floor_factor", format_double(a.revival_floor_factor));
    if (a.plateau_t_lo) {
        kv("plateau_t_lo", format_double(*a.plateau_t_lo));
        kv("plateau_t_hi", format_double(*a.plateau_t_hi));
    }

    const auto& o = cfg.output;
    os << "\n[output]\n";
    kv("directory", o.directory);
    kv("emit_bath_dump", o.emit_bath_dump ? "true" : "false");
    if (o.impedance_omega_min) {
        kv("impedance_omega_min", format_double(*o.impedance_omega_min));
        kv("impedance_omega_max", format_double(*o.impedance_omega_max));
    }
    kv("impedance_points", std::to_string(o.impedance_points));
    kv("units", o.units == FrequencyUnits::Auto ? "auto" : o.units == FrequencyUnits::Plasma ? "plasma" : "line");
    kv("dispersion_modes", std::to_string(o.dispersion_modes));
    return os.str();
}

// Replace one scalar `section.key` in the document text (used by parameter sweeps).
inline std::string override_key(std::string_view text, const std::string& path, const std::string& value) {
    const auto dot = path.find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == path.size()) {
        throw SyntaxError("parameter path must be section.key, got '" + path + "'");
    }
    const std::string section = path.substr(0, dot);
    const std::string key = path.substr(dot + 1);

    std::ostringstream out;
    std::stringstream ss{std::string(text)};
    std::string raw, current;
    bool replaced = false, section_seen = false;
    while (std::getline(ss, raw)) {
        const std::string line = detail::trim(std::string_view(raw).substr(0, raw.find('#')));
        if (!line.empty() && line.front() == '[') {
            if (current == section && !replaced) {
                out << key << " = " << value << '\n';
                replaced = true;
            }
            current = detail::trim(std::string_view(line).substr(1, line.size() - 2));
            section_seen = section_seen || current == section;
        } else if (current == section && !line.empty()) {
            const auto eq = line.find('=');
            if (eq != std::string::npos && detail::trim(std::string_view(line).substr(0, eq)) == key) {
                out << key << " = " << value << '\n';
                replaced = true;
                continue;
            }
        }
        out << raw << '\n';
    }
    if (!replaced) {
        if (!section_seen) out << '[' << section << "]\n";
        out << key << " = " << value << '\n';
    }
    return out.str();
}

} // namespace qbath::config
