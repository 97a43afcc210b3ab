// io.hpp: CSV formats and file checksums
//
// Floating-point values are written with 17 significant digits (exact round trip).

#pragma once

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "qbath/circuit.hpp"
#include "qbath/core.hpp"

namespace qbath::io {

struct IoError : Error {
    using Error::Error;
};

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + path.string() + " for writing");
    f << text;
    f.close();
    if (!f) throw IoError("write failed: " + path.string());
}

inline std::string read_text(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

inline std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw IoError("sha256 failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xF]);
    }
    return out;
}

inline std::string sha256_file(const std::filesystem::path& path) { return sha256_hex(read_text(path)); }

// ------------------------------ writers ------------------------------------

// t,p_e,norm_error
inline std::string series_csv(const TimeSeries& series) {
    std::string s = "t,p_e,norm_error\n";
    for (const auto& x : series.samples) s += fmt17(x.t) + ',' + fmt17(x.p_e) + ',' + fmt17(x.norm_error) + '\n';
    return s;
}

// index,omega,gamma,population
inline std::string snapshot_csv(const BathSpec& bath, const Snapshot& snap) {
    std::string s = "index,omega,gamma,population\n";
    for (std::size_t i = 0; i < bath.size(); ++i) {
        s += std::to_string(i + 1) + ',' + fmt17(bath.modes[i].omega) + ',' + fmt17(bath.modes[i].gamma) + ',' +
             fmt17(snap.populations[i]) + '\n';
    }
    return s;
}

// index,omega,gamma
inline std::string bath_csv(const BathSpec& bath) {
    std::string s = "index,omega,gamma\n";
    for (std::size_t i = 0; i < bath.size(); ++i) {
        s += std::to_string(i + 1) + ',' + fmt17(bath.modes[i].omega) + ',' + fmt17(bath.modes[i].gamma) + '\n';
    }
    return s;
}

struct ImpedanceRow {
    double omega{0.0}; // in the chosen output unit
    cplx z;
};

// omega,re_z,im_z,abs_z; a pole is written as inf
inline std::string impedance_csv(const std::vector<ImpedanceRow>& rows) {
    std::string s = "omega,re_z,im_z,abs_z\n";
    for (const auto& r : rows) {
        s += fmt17(r.omega) + ',' + fmt17(r.z.real()) + ',' + fmt17(r.z.imag()) + ',' + fmt17(std::abs(r.z)) + '\n';
    }
    return s;
}

// n,omega_n0,omega_n
inline std::string dispersion_csv(const circuit::DispersionTable& table, double unit) {
    std::string s = "n,omega_n0,omega_n\n";
    for (const auto& r : table) {
        s += std::to_string(r.n) + ',' + fmt17(r.omega_n0 / unit) + ',' + fmt17(r.omega_n / unit) + '\n';
    }
    return s;
}

// ------------------------------ readers ------------------------------------

namespace detail {

inline std::vector<std::vector<double>> read_numeric_csv(const std::string& text, const std::string& header,
                                                         const std::string& what) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw IoError(what + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != header) throw IoError(what + ": expected header '" + header + "', got '" + line + "'");
    const std::size_t cols = static_cast<std::size_t>(std::count(header.begin(), header.end(), ',')) + 1;
    std::vector<std::vector<double>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(cell, &used));
                if (used != cell.size()) throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw IoError(what + ": bad number '" + cell + "' on line " + std::to_string(line_no));
            }
        }
        if (row.size() != cols) throw IoError(what + ": wrong column count on line " + std::to_string(line_no));
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace detail

inline TimeSeries parse_series_csv(const std::string& text) {
    TimeSeries s;
    for (const auto& r : detail::read_numeric_csv(text, "t,p_e,norm_error", "series csv")) {
        s.samples.push_back({r[0], r[1], r[2]});
    }
    return s;
}

inline BathSpec parse_bath_csv(const std::string& text) {
    BathSpec b;
    b.kind = BathKind::Custom;
    for (const auto& r : detail::read_numeric_csv(text, "index,omega,gamma", "bath csv")) {
        b.modes.push_back({r[1], r[2]});
    }
    return b;
}

} // namespace qbath::io
