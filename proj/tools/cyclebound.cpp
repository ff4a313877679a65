// cyclebound: focal values, ideal computations, displacement certificates
// and Melnikov functions from plain-text field files.

#include "cyclebound/fieldfile.hpp"
#include "cyclebound/pipeline.hpp"
#include "report.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <iostream>

using namespace cyclebound;
using report::Json;

namespace {

struct OutputOptions {
    std::string format = "json";
    std::string out;
    bool no_timings = false;
};

struct Loaded {
    std::string path;
    FieldFile file;
};

Loaded load_field(const std::string& path) {
    Loaded l;
    l.path = path;
    try {
        l.file = parse_field_file(read_text_file(path));
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
    return l;
}

Json echo_field(const Loaded& l) {
    Json j;
    j["field"] = l.path;
    j["degree"] = l.file.degree;
    Json entries = Json::array();
    for (const auto& e : l.file.entries)
        entries.push_back(Json{{"kind", std::string(1, e.kind)},
                               {"i", e.i},
                               {"j", e.j},
                               {"value", e.value ? e.value->get_str() : std::string("sym")}});
    j["entries"] = entries;
    return j;
}

Json string_list(const std::vector<std::string>& v) {
    Json a = Json::array();
    for (const auto& s : v) a.push_back(s);
    return a;
}

Json uint_list(const std::vector<unsigned>& v) {
    Json a = Json::array();
    for (unsigned k : v) a.push_back(k);
    return a;
}

FieldSpec homogeneous_spec(const Loaded& l) {
    try {
        return field_spec_from_file(l.file);
    } catch (const InputError& e) {
        throw InputError(l.path + ": " + e.what());
    }
}

unsigned resolve_order(int order, unsigned d) {
    if (order < 0) return default_order(d);
    if (static_cast<unsigned>(order) < d) throw InputError("--order must be at least the field degree");
    return static_cast<unsigned>(order);
}

Json a0_json(const A0Cert& a0) {
    Json j;
    j["K1"] = report::exact(a0.K1);
    j["K2"] = report::exact(a0.K2);
    j["K3"] = report::approx(a0.K3, report::kRound);
    j["K4"] = report::approx(a0.K4, report::kRound);
    j["K3_series"] = report::approx(a0.K3v, 1e-12);
    j["K4_series"] = report::approx(a0.K4v, 1e-12);
    j["checked_upto"] = report::exact(static_cast<long long>(a0.verified_upto));
    j["valid"] = a0.valid();
    return j;
}

Json cmd_lyapunov(const std::string& field, int order, bool symbolic) {
    Loaded l = load_field(field);
    FieldSpec f = homogeneous_spec(l);
    const unsigned K = resolve_order(order, f.d);
    Json r = report::make_report("lyapunov");
    r["inputs"] = echo_field(l);
    r["inputs"]["order"] = K;
    r["inputs"]["symbolic"] = symbolic;
    ReturnSeries rs = run_recursion(f, K);
    Json L = Json::array();
    for (unsigned k = f.d; k <= K; ++k) L.push_back(Json{{"k", k}, {"value", report::poly_entry(rs.L[k], symbolic)}});
    r["results"]["d"] = f.d;
    r["results"]["parameters"] = string_list(f.ring->names());
    r["results"]["L"] = L;
    A0Cert a0 = a0_certify(rs);
    r["certificates"]["a0_series"] = a0_json(a0);
    for (const auto& v : a0.violations) r["violations"].push_back(v);
    return r;
}

Json cmd_certify(const std::string& field, const std::string& lambda_path, int order) {
    Loaded l = load_field(field);
    FieldSpec f = homogeneous_spec(l);
    const unsigned K = resolve_order(order, f.d);
    std::vector<Rational> point;
    if (!lambda_path.empty()) {
        try {
            point = parse_point_file(read_text_file(lambda_path), f.ring->names());
        } catch (const InputError& e) {
            throw InputError(lambda_path + ": " + e.what());
        }
    } else if (!f.is_concrete()) {
        throw InputError("field has symbolic entries; --lambda is required");
    }
    Json r = report::make_report("certify");
    r["inputs"] = echo_field(l);
    r["inputs"]["lambda_file"] = lambda_path;
    Json lam = Json::object();
    for (std::size_t i = 0; i < point.size(); ++i) lam[f.ring->name(i)] = report::exact(point[i]);
    r["inputs"]["lambda"] = lam;
    r["inputs"]["order"] = K;

    IdealData D = build_ideal_data(f, K, false, false);
    CertifyOutcome out = certify_point(D, f, point);

    r["results"]["bautin_index"] = report::exact(static_cast<long long>(out.bautin_index));
    r["results"]["generators"] = uint_list(D.index.new_generators);
    r["results"]["members"] = uint_list(D.index.members);
    r["results"]["identically_center"] = D.index.identically_center;
    r["results"]["division_constants"] = Json{{"C", report::approx(D.constants.C, 1e-9)},
                                              {"C1", report::approx(D.constants.C1, 1e-9)},
                                              {"M", report::approx(D.constants.M, 1e-9)}};
    Json zeros = Json::array();
    for (double z : out.zeros.zeros) zeros.push_back(report::approx(z, 1e-10));
    r["results"]["zero_count"] = Json{{"count", out.zeros.count},
                                      {"undetermined_samples", out.zeros.undetermined},
                                      {"samples", out.zeros.grid.size()},
                                      {"center_like", out.zeros.center_like},
                                      {"zeros", zeros}};
    const auto& c = out.cert;
    r["certificates"]["displacement"] = Json{{"index_used", c.d},
                                             {"lambda_bar", report::approx(c.lambda_bar, report::kRound)},
                                             {"K1", report::approx(c.K1, report::kRound)},
                                             {"K2", report::approx(c.K2, report::kRound)},
                                             {"K3", report::approx(c.K3, 1e-12)},
                                             {"K4", report::approx(c.K4, 1e-12)},
                                             {"R", report::approx(c.R, 1e-9)},
                                             {"c", report::approx(c.c, 1e-9)},
                                             {"R2", report::approx(c.R2, 1e-9)},
                                             {"zero_bound", report::exact(static_cast<long long>(c.zero_bound))},
                                             {"count_within_bound", out.zeros.count <= c.zero_bound}};
    for (const auto& v : out.violations) r["violations"].push_back(v);
    return r;
}

Json cmd_melnikov(const std::string& field, unsigned kmax, bool validate) {
    Loaded l = load_field(field);
    PlanarField X = planar_field_from_file(l.file);
    Json r = report::make_report("melnikov");
    r["inputs"] = echo_field(l);
    r["inputs"]["kmax"] = kmax;
    r["inputs"]["validate"] = validate;
    MelnikovResult m = successive_melnikov(X, kmax);
    Json L = Json::array();
    for (std::size_t k = 0; k < m.L.size(); ++k)
        L.push_back(Json{{"k", k + 1}, {"value", report::exact(m.L[k].to_string())}});
    r["results"]["k_star"] = m.k_star ? Json(*m.k_star) : Json("none");
    r["results"]["M"] = report::exact(m.M.to_string());
    r["results"]["L"] = L;
    if (validate) {
        if (X.nparams() != 0) throw InputError("--validate needs a field without symbolic entries");
        NumericPlanarField X1 = NumericPlanarField::from_field(X);
        unsigned k = m.k_star.value_or(1);
        PiPoly M = m.M;
        auto Mc = [&](double c) {
            std::vector<double> pt{c};
            return M.is_zero() ? 0.0 : M.evaluate_double(pt);
        };
        const std::vector<double> eps{4e-3, 2e-3, 1e-3, 5e-4};
        const std::vector<double> cgrid{0.005, 0.01, 0.02};
        ScalingReport sr = epsilon_scaling(X1, k, Mc, eps, cgrid);
        Json tab;
        tab["k"] = k;
        Json cj = Json::array(), mj = Json::array(), rows = Json::array(), ratios = Json::array();
        for (double c : sr.c_grid) cj.push_back(c);
        for (double v : sr.M_values) mj.push_back(report::approx(v, report::kRound));
        for (const auto& row : sr.rows) {
            Json sc = Json::array();
            for (double v : row.scaled) sc.push_back(report::approx(v, 1e-8));
            rows.push_back(Json{{"eps", row.eps}, {"deviation", report::approx(row.deviation, 1e-8)}, {"scaled", sc}});
        }
        for (double q : sr.ratios) ratios.push_back(report::approx(q, 1e-6));
        tab["c"] = cj;
        tab["M"] = mj;
        tab["rows"] = rows;
        tab["ratios"] = ratios;
        r["results"]["epsilon_scaling"] = tab;
        if (m.k_star) {
            for (double q : sr.ratios)
                if (q < 0.35 || q > 0.65)
                    r["violations"].push_back("eps-halving deviation ratio " + report::format_double(q) +
                                              " outside [0.35, 0.65]");
        } else if (sr.max_abs_scaled >= 1e-8) {
            r["violations"].push_back("scaled displacement " + report::format_double(sr.max_abs_scaled) +
                                      " is not below 1e-8 although every computed order vanished");
        }
    }
    return r;
}

Json cmd_ideal(const std::string& field, int order, bool use_invariants, bool numerify) {
    Loaded l = load_field(field);
    FieldSpec f = homogeneous_spec(l);
    const unsigned K = resolve_order(order, f.d);
    Json r = report::make_report("ideal");
    r["inputs"] = echo_field(l);
    r["inputs"]["order"] = K;
    r["inputs"]["use_invariants"] = use_invariants;
    r["inputs"]["numerify"] = numerify;
    ReturnSeries rs = run_recursion(f, K);
    auto coeffs = generator_candidates(rs, use_invariants, numerify);
    std::vector<PiPoly> inputs;
    std::vector<unsigned> orders;
    for (unsigned k = f.d; k <= K; ++k)
        if (!coeffs[k - f.d].is_zero()) {
            inputs.push_back(coeffs[k - f.d]);
            orders.push_back(k);
        }
    r["results"]["parameters"] = string_list(f.ring->names());
    r["results"]["input_orders"] = uint_list(orders);
    if (inputs.empty()) {
        r["results"]["basis"] = Json::array();
        r["results"]["zero_ideal"] = true;
        return r;
    }
    BuchbergerOptions opt;
    if (all_homogeneous(inputs)) opt.degree_bound = max_degree(inputs);
    GrobnerBasis<PiFrac> gb = buchberger(inputs, opt);
    Json basis = Json::array();
    for (std::size_t j = 0; j < gb.gens.size(); ++j) {
        Json cof = Json::array();
        for (std::size_t i = 0; i < gb.inputs.size(); ++i)
            if (!gb.cofactors[j][i].is_zero())
                cof.push_back(Json{{"order", orders[i]}, {"value", report::exact(gb.cofactors[j][i].to_string())}});
        basis.push_back(Json{{"generator", report::exact(gb.gens[j].to_string())}, {"cofactors", cof}});
    }
    r["results"]["zero_ideal"] = false;
    r["results"]["basis"] = basis;
    r["results"]["degree_bound"] = gb.degree_bound ? Json(*gb.degree_bound) : Json(nullptr);
    r["results"]["pairs"] = Json{{"reduced", gb.pairs_reduced},
                                 {"product_criterion", gb.pairs_product},
                                 {"chain_criterion", gb.pairs_chain},
                                 {"over_degree_bound", gb.pairs_over_bound}};
    r["certificates"]["division"] = Json{{"C", report::approx(NormTraits<PiFrac>::to_double(division_C(gb.gens)), 1e-9)},
                                         {"G", report::approx(NormTraits<PiFrac>::to_double(division_G(gb.gens)), 1e-9)},
                                         {"M", report::approx(gb.cofactor_norm(), 1e-9)}};
    Json checks = Json::array();
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        auto mem = ideal_member(inputs[i], gb);
        checks.push_back(Json{{"order", orders[i]}, {"member", mem.member}});
        if (!mem.member) r["violations"].push_back("input of order " + std::to_string(orders[i]) + " does not reduce to 0");
    }
    r["certificates"]["inputs_reduce_to_zero"] = checks;
    return r;
}

Json cmd_index(const std::string& field, int order, bool use_invariants, bool numerify) {
    Loaded l = load_field(field);
    FieldSpec f = homogeneous_spec(l);
    const unsigned K = resolve_order(order, f.d);
    Json r = report::make_report("index");
    r["inputs"] = echo_field(l);
    r["inputs"]["order"] = K;
    r["inputs"]["use_invariants"] = use_invariants;
    r["inputs"]["numerify"] = numerify;
    IdealData D = build_ideal_data(f, K, use_invariants, numerify);
    r["results"]["parameters"] = string_list(f.ring->names());
    r["results"]["k0"] = report::exact(static_cast<long long>(D.index.k0));
    r["results"]["truncation"] = D.index.truncation;
    r["results"]["identically_center"] = D.index.identically_center;
    r["results"]["new_generators"] = uint_list(D.index.new_generators);
    r["results"]["members"] = uint_list(D.index.members);
    r["results"]["caveat"] = D.index.caveat;
    Json gens = Json::array();
    for (unsigned k : D.index.new_generators)
        gens.push_back(Json{{"k", k}, {"value", report::exact(D.coeffs[k - f.d].to_string())}});
    r["results"]["generators"] = gens;
    Json certs = Json::array();
    for (unsigned k : D.index.members) {
        const PiPoly& Lk = D.coeffs[k - f.d];
        Json cof = Json::array();
        if (!Lk.is_zero()) {
            auto mem = ideal_member(Lk, D.basis);
            if (!mem.member) {
                r["violations"].push_back("order " + std::to_string(k) + " was classified as a member but has a remainder");
                continue;
            }
            for (std::size_t i = 0; i < mem.input_cofactors.size(); ++i)
                if (!mem.input_cofactors[i].is_zero())
                    cof.push_back(Json{{"generator", D.index.new_generators[i]},
                                       {"value", report::exact(mem.input_cofactors[i].to_string())}});
        }
        certs.push_back(Json{{"k", k}, {"zero", Lk.is_zero()}, {"cofactors", cof}});
    }
    r["certificates"]["membership"] = certs;
    return r;
}

void emit(const Json& r, const OutputOptions& o) {
    std::string text = o.format == "text" ? report::to_text(r) : report::to_json_text(r);
    if (o.out.empty()) std::cout << text << std::flush;
    else report::write_atomic(o.out, text);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cyclebound: small limit cycles of planar polynomial perturbations of a center"};
    app.require_subcommand(1);
    OutputOptions out;
    app.add_option("--format", out.format, "Report format")->check(CLI::IsMember({"json", "text"}));
    app.add_option("--out", out.out, "Write the report to FILE (atomically) instead of stdout");
    app.add_flag("--no-timings", out.no_timings, "Leave the timings section empty");

    std::string field, lambda;
    int order = -1;
    unsigned kmax = 5;
    bool symbolic = false, validate = false, use_inv = false, numerify = false;

    auto* lyap = app.add_subcommand("lyapunov", "Focal values L_d..L_K of a homogeneous perturbation");
    lyap->add_option("--field", field, "Field file")->required();
    lyap->add_option("--order", order, "Truncation order K");
    lyap->add_flag("--symbolic", symbolic, "Render pi exactly instead of as floats");

    auto* cert = app.add_subcommand("certify", "Displacement certificate at a parameter point");
    cert->add_option("--field", field, "Field file")->required();
    cert->add_option("--lambda", lambda, "Parameter point file");
    cert->add_option("--order", order, "Truncation order K");

    auto* mel = app.add_subcommand("melnikov", "Successive Melnikov functions of the rotation plus eps X1");
    mel->add_option("--field", field, "Field file (arbitrary support)")->required();
    mel->add_option("--kmax", kmax, "Highest order")->check(CLI::Range(1u, 12u));
    mel->add_flag("--validate", validate, "Add the eps-scaling table");

    auto* ideal = app.add_subcommand("ideal", "Standard basis of the ideal of L_d..L_K");
    auto* index = app.add_subcommand("index", "Bautin index of the sequence L_d..L_K");
    for (auto* sc : {ideal, index}) {
        sc->add_option("--field", field, "Field file")->required();
        sc->add_option("--order", order, "Truncation order K");
        sc->add_flag("--use-invariants", use_inv, "Use the rotation-invariant z_k instead of L_k");
        sc->add_flag("--numerify", numerify, "Replace pi by 355/113 and work over Q");
    }
    for (auto* sc : {lyap, cert, mel, ideal, index}) {
        sc->add_option("--format", out.format, "Report format")->check(CLI::IsMember({"json", "text"}));
        sc->add_option("--out", out.out, "Write the report to FILE (atomically) instead of stdout");
        sc->add_flag("--no-timings", out.no_timings, "Leave the timings section empty");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    auto start = std::chrono::steady_clock::now();
    try {
        Json r;
        if (*lyap) r = cmd_lyapunov(field, order, symbolic);
        else if (*cert) r = cmd_certify(field, lambda, order);
        else if (*mel) r = cmd_melnikov(field, kmax, validate);
        else if (*ideal) r = cmd_ideal(field, order, use_inv, numerify);
        else r = cmd_index(field, order, use_inv, numerify);
        if (!out.no_timings)
            r["timings"]["total_seconds"] = report::approx(
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), 1e-3);
        emit(r, out);
        return r["violations"].empty() ? 0 : 2;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "computation failed: " << e.what() << "\n";
        return 2;
    }
}
