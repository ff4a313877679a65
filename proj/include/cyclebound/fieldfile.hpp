#pragma once

/**
 * @file fieldfile.hpp
 * @brief Plain-text field and parameter-point files.
 *
 * Field file:
 *   degree 2
 *   a 2 0 1/10     # coefficient of x^2 in P
 *   b 1 1 sym      # symbolic parameter b11
 * Missing entries are zero; duplicates are rejected.
 *
 * Point file: one `<name> <rational>` per line, e.g. `a20 -1/20`.
 */

#include "bautin.hpp"
#include "melnikov.hpp"

#include <fstream>
#include <sstream>

namespace cyclebound {

struct FieldEntry {
    char kind = 'a';
    unsigned i = 0, j = 0;
    std::optional<Rational> value;  ///< empty for `sym`
    std::size_t line = 0;
};

struct FieldFile {
    unsigned degree = 0;
    std::vector<FieldEntry> entries;
};

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace detail {

inline std::vector<std::pair<std::size_t, std::vector<std::string>>> tokenized_lines(const std::string& text) {
    std::vector<std::pair<std::size_t, std::vector<std::string>>> out;
    std::istringstream in(text);
    std::string line;
    std::size_t no = 0;
    while (std::getline(in, line)) {
        ++no;
        if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
        std::istringstream ls(line);
        std::vector<std::string> toks;
        for (std::string t; ls >> t;) toks.push_back(t);
        if (!toks.empty()) out.emplace_back(no, std::move(toks));
    }
    return out;
}

inline unsigned parse_small_uint(const std::string& s, std::size_t line, const char* what) {
    if (s.empty() || s.size() > 3 || s.find_first_not_of("0123456789") != std::string::npos)
        throw InputError("line " + std::to_string(line) + ": bad " + what + " '" + s + "'");
    return static_cast<unsigned>(std::stoul(s));
}

inline Rational parse_rational_at(const std::string& s, std::size_t line) {
    try {
        return parse_rational(s);
    } catch (const InputError& e) {
        throw InputError("line " + std::to_string(line) + ": " + e.what());
    }
}

} // namespace detail

inline FieldFile parse_field_file(const std::string& text) {
    FieldFile ff;
    bool have_degree = false;
    std::set<std::tuple<char, unsigned, unsigned>> seen;
    for (const auto& [no, toks] : detail::tokenized_lines(text)) {
        const std::string L = "line " + std::to_string(no) + ": ";
        if (toks[0] == "degree") {
            if (have_degree) throw InputError(L + "duplicate degree header");
            if (toks.size() != 2) throw InputError(L + "expected 'degree <d>'");
            ff.degree = detail::parse_small_uint(toks[1], no, "degree");
            have_degree = true;
            continue;
        }
        if (toks[0] != "a" && toks[0] != "b")
            throw InputError(L + "expected 'degree', 'a' or 'b', found '" + toks[0] + "'");
        if (!have_degree) throw InputError(L + "coefficient before the degree header");
        if (toks.size() != 4) throw InputError(L + "expected '" + toks[0] + " <i> <j> <rational|sym>'");
        FieldEntry e;
        e.kind = toks[0][0];
        e.i = detail::parse_small_uint(toks[1], no, "exponent");
        e.j = detail::parse_small_uint(toks[2], no, "exponent");
        e.line = no;
        if (e.i + e.j > ff.degree)
            throw InputError(L + "monomial degree " + std::to_string(e.i + e.j) + " exceeds the declared degree");
        if (toks[3] != "sym") e.value = detail::parse_rational_at(toks[3], no);
        if (!seen.insert({e.kind, e.i, e.j}).second)
            throw InputError(L + "duplicate entry " + toks[0] + " " + toks[1] + " " + toks[2]);
        ff.entries.push_back(e);
    }
    if (!have_degree) throw InputError("missing 'degree <d>' header");
    return ff;
}

/// Homogeneous perturbation from a field file (every entry must have i + j = d).
inline FieldSpec field_spec_from_file(const FieldFile& ff) {
    const unsigned d = ff.degree;
    if (d < 2) throw InputError("perturbation degree must be at least 2");
    std::vector<std::optional<Rational>> a(d + 1, Rational(0)), b(d + 1, Rational(0));
    for (const auto& e : ff.entries) {
        if (e.i + e.j != d)
            throw InputError("line " + std::to_string(e.line) + ": term is not of degree " + std::to_string(d) +
                             " (homogeneous field expected)");
        (e.kind == 'a' ? a : b)[e.i] = e.value;
    }
    return FieldSpec::mixed(d, a, b);
}

inline std::string planar_param_name(char kind, unsigned i, unsigned j) {
    if (i < 10 && j < 10) return FieldSpec::param_name(kind, i, j);
    return std::string(1, kind) + "_" + std::to_string(i) + "_" + std::to_string(j);
}

/// Arbitrary polynomial perturbation X1 = P d/dx + Q d/dy from a field file.
inline PlanarField planar_field_from_file(const FieldFile& ff) {
    std::vector<std::string> params;
    for (const auto& e : ff.entries)
        if (!e.value) params.push_back(planar_param_name(e.kind, e.i, e.j));
    PlanarField X;
    X.ring = PlanarField::make_field_ring(params);
    X.P = ParamPoly(X.ring);
    X.Q = ParamPoly(X.ring);
    for (const auto& e : ff.entries) {
        std::vector<unsigned> ex(X.ring->size(), 0);
        ex[0] = e.i;
        ex[1] = e.j;
        ParamPoly term = ParamPoly::monomial(X.ring, Monomial::from_exponents(ex), Rational(1));
        ParamPoly coeff = e.value ? ParamPoly::constant(X.ring, *e.value)
                                  : ParamPoly::variable(X.ring, planar_param_name(e.kind, e.i, e.j));
        (e.kind == 'a' ? X.P : X.Q) += coeff * term;
    }
    return X;
}

/// Values for named parameters; every name in `names` must be assigned exactly once.
inline std::vector<Rational> parse_point_file(const std::string& text, const std::vector<std::string>& names) {
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < names.size(); ++i) index[names[i]] = i;
    std::vector<std::optional<Rational>> vals(names.size());
    for (const auto& [no, toks] : detail::tokenized_lines(text)) {
        const std::string L = "line " + std::to_string(no) + ": ";
        if (toks.size() != 2) throw InputError(L + "expected '<name> <rational>'");
        auto it = index.find(toks[0]);
        if (it == index.end()) throw InputError(L + "unknown parameter '" + toks[0] + "'");
        if (vals[it->second]) throw InputError(L + "duplicate parameter '" + toks[0] + "'");
        vals[it->second] = detail::parse_rational_at(toks[1], no);
    }
    std::vector<Rational> out;
    std::string missing;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (!vals[i]) missing += (missing.empty() ? "" : ", ") + names[i];
        else out.push_back(*vals[i]);
    }
    if (!missing.empty()) throw InputError("parameter point is missing: " + missing);
    return out;
}

} // namespace cyclebound
