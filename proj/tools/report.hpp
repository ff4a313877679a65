#pragma once

// Report document helpers for the command-line tool.

#include "cyclebound/pifield.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <unistd.h>

namespace cyclebound::report {

using Json = nlohmann::ordered_json;

inline constexpr int kSchema = 1;

inline Json exact(const std::string& v) { return Json{{"value", v}, {"provenance", "exact"}}; }
inline Json exact(long long v) { return Json{{"value", v}, {"provenance", "exact"}}; }
inline Json exact(const Rational& q) { return exact(q.get_str()); }

inline std::string tol_string(double tol) {
    std::ostringstream os;
    os << std::setprecision(3) << tol;
    return "float(" + os.str() + ")";
}

inline Json approx(double v, double tol) {
    Json j{{"value", nullptr}, {"provenance", tol_string(tol)}};
    if (std::isfinite(v)) j["value"] = v;
    else j["value"] = v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
    return j;
}

/// Unit roundoff: provenance of quantities converted from exact values to double.
inline constexpr double kRound = 1.1102230246251565e-16;

inline std::string format_double(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

/// Polynomial with every Q(pi) coefficient rounded to a double.
inline std::string numeric_poly_string(const PiPoly& p) {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : p.terms()) {
        double c = t.coeff.value();
        if (!first) os << (c < 0 ? " - " : " + ");
        else if (c < 0) os << "-";
        os << format_double(std::abs(c));
        for (std::size_t i = 0; i < p.nvars(); ++i) {
            unsigned e = t.mono[i];
            if (e == 0) continue;
            os << "*" << p.ring()->name(i);
            if (e > 1) os << "^" << e;
        }
        first = false;
    }
    return os.str();
}

/// Exact rendering in symbolic mode, doubles otherwise.
inline Json poly_entry(const PiPoly& p, bool symbolic) {
    if (symbolic) return exact(p.to_string());
    if (p.is_zero() || (p.size() == 1 && p.terms()[0].mono.is_one()))
        return approx(p.is_zero() ? 0.0 : p.terms()[0].coeff.value(), kRound);
    return Json{{"value", numeric_poly_string(p)}, {"provenance", tol_string(kRound)}};
}

inline Json make_report(const std::string& command) {
    Json r;
    r["schema"] = kSchema;
    r["command"] = command;
    r["inputs"] = Json::object();
    r["results"] = Json::object();
    r["certificates"] = Json::object();
    r["violations"] = Json::array();
    r["timings"] = Json::object();
    return r;
}

inline std::string to_json_text(const Json& r) { return r.dump(2) + "\n"; }

namespace detail {

inline bool is_number_entry(const Json& j) {
    return j.is_object() && j.size() == 2 && j.contains("value") && j.contains("provenance");
}

inline std::string scalar_text(const Json& j) {
    if (j.is_string()) return j.get<std::string>();
    return j.dump();
}

inline void render(std::ostringstream& os, const Json& j, int indent) {
    const std::string pad(indent, ' ');
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) {
            if (is_number_entry(v)) {
                os << pad << k << ": " << scalar_text(v["value"]) << "  [" << v["provenance"].get<std::string>()
                   << "]\n";
            } else if (v.is_structured() && !v.empty()) {
                os << pad << k << ":\n";
                render(os, v, indent + 2);
            } else {
                os << pad << k << ": " << (v.is_structured() ? (v.is_array() ? "(none)" : "-") : scalar_text(v))
                   << "\n";
            }
        }
    } else if (j.is_array()) {
        for (const auto& v : j) {
            if (is_number_entry(v)) {
                os << pad << "- " << scalar_text(v["value"]) << "  [" << v["provenance"].get<std::string>() << "]\n";
            } else if (v.is_structured()) {
                os << pad << "-\n";
                render(os, v, indent + 2);
            } else {
                os << pad << "- " << scalar_text(v) << "\n";
            }
        }
    }
}

} // namespace detail

inline std::string to_text(const Json& r) {
    std::ostringstream os;
    detail::render(os, r, 0);
    return os.str();
}

/// Writes via a temporary file in the target directory and renames it into place.
inline void write_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InputError("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw InputError("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw InputError("cannot move report into place: " + ec.message());
    }
}

} // namespace cyclebound::report
