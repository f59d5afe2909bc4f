// Command-line front end: transforms, measures, valuations, profile
// recovery, Abel transforms, and the self-check battery.
//
// Exit codes: 0 success, 1 validation error, 2 numeric-certification
// failure, 64 usage error.

#include "hessval/abel.hpp"
#include "hessval/body.hpp"
#include "hessval/constants.hpp"
#include "hessval/hessian_measure.hpp"
#include "hessval/io_csv.hpp"
#include "hessval/io_json.hpp"
#include "hessval/ps_volume.hpp"
#include "hessval/selfcheck.hpp"
#include "hessval/transforms.hpp"
#include "hessval/valuation.hpp"
#include "hessval/zeta_recovery.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <array>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <vector>

namespace {

using namespace hessval;
using nlohmann::json;

std::uint64_t seed_from_env(std::uint64_t fallback = 42) {
    if (const char* s = std::getenv("HESSVAL_SEED")) return std::strtoull(s, nullptr, 10);
    return fallback;
}

Vec parse_vec(const std::string& csv) {
    std::vector<double> vals;
    std::size_t pos = 0;
    while (pos < csv.size()) {
        std::size_t next = csv.find(',', pos);
        if (next == std::string::npos) next = csv.size();
        vals.push_back(std::stod(csv.substr(pos, next - pos)));
        pos = next + 1;
    }
    Vec v(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i) v[i] = vals[i];
    return v;
}

Side parse_side(const std::string& s) {
    if (s == "primal") return Side::Primal;
    if (s == "dual") return Side::Dual;
    throw UsageError("side must be primal or dual");
}

Route parse_route(const std::string& s) {
    if (s == "quadrature") return Route::Quadrature;
    if (s == "closed-form") return Route::ClosedForm;
    if (s == "moreau") return Route::Moreau;
    throw UsageError("route must be quadrature, closed-form, or moreau");
}

void emit_rows(bool as_json, const std::vector<std::vector<std::string>>& rows,
               const std::vector<std::string>& header) {
    if (as_json) {
        json out = json::array();
        for (const auto& r : rows) {
            json o;
            for (std::size_t i = 0; i < header.size(); ++i) o[header[i]] = r[i];
            out.push_back(o);
        }
        std::cout << out.dump(2) << "\n";
    } else {
        for (std::size_t i = 0; i < header.size(); ++i)
            std::cout << header[i] << (i + 1 < header.size() ? "," : "\n");
        for (const auto& r : rows)
            for (std::size_t i = 0; i < r.size(); ++i)
                std::cout << r[i] << (i + 1 < r.size() ? "," : "\n");
    }
}

int cmd_transform(const std::string& fn_path, const std::string& op, double lambda, int rotations,
                  const std::string& out_path) {
    ConvexFunction f = load_convex_function(fn_path);
    ConvexFunction result = [&] {
        if (op == "legendre") return legendre(f);
        if (op == "moreau") return moreau_yosida(f, lambda);
        if (op == "symmetrize") return rotational_episymmetrize(f, rotations);
        throw UsageError("transform --op must be legendre, moreau, or symmetrize");
    }();
    if (result.variant() != Variant::Grid && result.variant() != Variant::Quadratic) {
        // sample analytic outputs so the result is always serializable
        Vec lo = Vec::Constant(f.dim(), -4.0), hi = Vec::Constant(f.dim(), 4.0);
        result = ConvexFunction::grid(
            sample_to_grid(result, lo, hi, std::vector<int>(f.dim(), 129)));
    }
    save_convex_function(result, out_path);
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

int cmd_measure(const std::string& fn_path, int j, const std::string& lo_s,
                const std::string& hi_s, bool theta, bool as_json, std::uint64_t seed) {
    ConvexFunction f = load_convex_function(fn_path);
    const int n = f.dim();
    Vec lo = lo_s.empty() ? Vec::Constant(n, -1.0) : parse_vec(lo_s);
    Vec hi = hi_s.empty() ? Vec::Constant(n, 1.0) : parse_vec(hi_s);
    std::vector<std::vector<std::string>> rows;
    std::string region = "box";
    if (theta) {
        std::vector<double> s_grid;
        for (int k = 0; k < 8; ++k) s_grid.push_back(0.2 * (k + 1));
        ThetaCoefficients tc =
            theta_coefficients(f, BaseRegion::box(lo, hi), s_grid, 1000000, seed);
        for (int jj = 0; jj <= n; ++jj)
            rows.push_back({region, std::to_string(jj), format_double(tc.value[n - jj]),
                            format_double(tc.std_error[n - jj])});
        emit_rows(as_json, rows, {"region", "j", "value", "mc_stderr"});
        return 0;
    }
    std::vector<int> degrees;
    if (j >= 0)
        degrees.push_back(j);
    else
        for (int jj = 0; jj <= n; ++jj) degrees.push_back(jj);
    for (int jj : degrees) {
        double v = phi_measure(f, jj).measure_of_box(lo, hi);
        rows.push_back({region, std::to_string(jj), format_double(v), "0"});
    }
    emit_rows(as_json, rows, {"region", "j", "value", "mc_stderr"});
    return 0;
}

int cmd_valuate(const std::string& fn_path, const std::string& zeta_path, int j,
                const std::string& side, const std::string& route, bool as_json) {
    ConvexFunction f = load_convex_function(fn_path);
    ZetaProfile z = load_profile_csv(zeta_path);
    ValuationSpec spec;
    spec.dim = f.dim();
    spec.degree = j;
    spec.zeta = std::move(z);
    spec.side = parse_side(side);
    spec.route = parse_route(route);

    double value = 0.0, est_error = 0.0;
    if (spec.route == Route::ClosedForm) {
        if (f.variant() != Variant::RadialConeU && f.variant() != Variant::RadialConeV)
            throw UsageError("closed-form route needs a radial cone input");
        const RadialConeData& c = f.cone_data();
        double factor = f.variant() == Variant::RadialConeU ? c.ball_radius : c.scale;
        value = std::pow(factor, j) * valuate_cone(spec, c.t);
    } else {
        value = valuate(spec, f);
        if (spec.route == Route::Moreau) {
            MoreauResult mr = valuate_moreau(spec, f);
            est_error = std::abs(mr.value) * mr.condition * 1e-16;
        }
    }
    emit_rows(as_json,
              {{"Z_" + std::to_string(j), format_double(value), format_double(est_error)}},
              {"quantity", "value", "est_error"});
    return 0;
}

int cmd_decompose(const std::string& fn_path, const std::string& spec_path, bool as_json) {
    ConvexFunction f = load_convex_function(fn_path);
    std::ifstream in(spec_path);
    if (!in) throw UsageError("cannot open " + spec_path);
    json js;
    in >> js;
    ValuationSpec spec;
    spec.dim = f.dim();
    spec.degree = js.value("j", f.dim());
    spec.side = parse_side(js.value("side", "primal"));
    spec.route = parse_route(js.value("route", "quadrature"));
    spec.zeta = load_profile_csv(js.at("zeta_csv").get<std::string>());

    auto Z = [&](const ConvexFunction& g) { return valuate(spec, g); };
    std::vector<double> comps = homogeneous_components(Z, f, f.dim());
    std::vector<std::vector<std::string>> rows;
    double total = 0.0;
    for (std::size_t i = 0; i < comps.size(); ++i) {
        rows.push_back({"Z_" + std::to_string(i), format_double(comps[i]), "0"});
        total += comps[i];
    }
    rows.push_back({"sum", format_double(total), "0"});
    emit_rows(as_json, rows, {"quantity", "value", "est_error"});
    return 0;
}

int cmd_recover(const std::string& cone_path, int n, const std::string& out_path,
                double threshold, bool as_json) {
    ZetaProfile Z = load_profile_csv(cone_path);
    RecoveryResult rec = recover_zeta_from_cone_values(Z, n, threshold);
    if (!out_path.empty()) save_profile_csv(rec.zeta, out_path);
    emit_rows(as_json,
              {{"decay_certificate", format_double(rec.decay_certificate), ""},
               {"tail_certificate", format_double(rec.tail_certificate), ""},
               {"limit_certificate", format_double(rec.limit_certificate), ""}},
              {"quantity", "value", "est_error"});
    return 0;
}

int cmd_abel(const std::string& profile_path, bool forward, bool inverse,
             const std::string& out_path) {
    if (forward == inverse) throw UsageError("abel: exactly one of --forward/--inverse");
    ZetaProfile z = load_profile_csv(profile_path);
    const int nodes = 1024;
    const double S = z.support_bound();
    std::vector<double> s(nodes), v(nodes);
    for (int i = 0; i < nodes; ++i) {
        s[i] = S * (i + 1) / nodes;
        v[i] = forward ? abel_forward(z, s[i]) : abel_inverse(z, s[i]);
    }
    ZetaProfile out = ZetaProfile::from_samples(std::move(s), std::move(v), S);
    save_profile_csv(out, out_path);
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

int cmd_selfcheck(const std::string& suite_name, bool as_json, std::uint64_t seed) {
    Suite suite = suite_name == "full" ? Suite::Full : Suite::Fast;
    auto results = run_selfcheck(suite, seed);
    bool all_pass = true;
    if (as_json) {
        json out = json::array();
        for (const auto& r : results) {
            out.push_back({{"criterion", r.criterion},
                           {"name", r.name},
                           {"pass", r.pass},
                           {"worst", r.worst},
                           {"bound", r.bound},
                           {"seconds", r.seconds},
                           {"detail", r.detail}});
            all_pass &= r.pass;
        }
        std::cout << out.dump(2) << "\n";
    } else {
        std::printf("%-4s %-28s %-6s %-12s %-12s %s\n", "crit", "check", "pass", "worst", "bound",
                    "time");
        for (const auto& r : results) {
            std::printf("%-4d %-28s %-6s %-12.3g %-12.3g %.2fs\n", r.criterion, r.name.c_str(),
                        r.pass ? "ok" : "FAIL", r.worst, r.bound, r.seconds);
            all_pass &= r.pass;
        }
    }
    return all_pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical calculus of singular Hessian valuations on convex functions"};
    app.require_subcommand(1);

    std::string fn_path, zeta_path, out_path = "out.json", op = "legendre";
    std::string side = "primal", route = "quadrature", lo_s, hi_s, spec_path;
    std::string suite = "fast", cone_path;
    double lambda = 1.0, threshold = 1e-3;
    int j = -1, n = 2, rotations = 64;
    bool as_json = false, theta = false, abel_fwd = false, abel_inv = false;

    app.add_flag("--json", as_json, "tabular output as JSON");

    auto* t = app.add_subcommand("transform", "Legendre transform, Moreau envelope, symmetrize");
    t->add_option("--fn", fn_path, "input function (json)")->required();
    t->add_option("--op", op, "legendre|moreau|symmetrize");
    t->add_option("--lambda", lambda, "Moreau parameter");
    t->add_option("--rotations", rotations, "rotation count for symmetrize");
    t->add_option("--out", out_path, "output path");

    auto* m = app.add_subcommand("measure", "Hessian measure of a box region");
    m->add_option("--fn", fn_path)->required();
    m->add_option("--j", j, "degree (default: all)");
    m->add_option("--lo", lo_s, "box lower corner, comma separated");
    m->add_option("--hi", hi_s, "box upper corner, comma separated");
    m->add_flag("--theta", theta, "Monte-Carlo volume-polynomial coefficients");

    auto* v = app.add_subcommand("valuate", "evaluate a valuation");
    v->add_option("--fn", fn_path)->required();
    v->add_option("--zeta", zeta_path, "weight profile (csv)")->required();
    v->add_option("--j", j, "degree")->required();
    v->add_option("--side", side, "primal|dual");
    v->add_option("--route", route, "quadrature|closed-form|moreau");

    auto* d = app.add_subcommand("decompose", "homogeneous decomposition of a valuation");
    d->add_option("--fn", fn_path)->required();
    d->add_option("--valuation", spec_path, "valuation spec (json)")->required();

    auto* r = app.add_subcommand("recover-zeta", "solve the cone-value integral equation");
    r->add_option("--cone-values", cone_path, "profile t -> Z(u_t) (csv)")->required();
    r->add_option("--n", n, "ambient dimension")->required();
    r->add_option("--out", out_path, "recovered profile output");
    r->add_option("--threshold", threshold, "certification threshold");

    auto* a = app.add_subcommand("abel", "Abel transform of a profile");
    a->add_option("--profile", zeta_path)->required();
    a->add_flag("--forward", abel_fwd);
    a->add_flag("--inverse", abel_inv);
    a->add_option("--out", out_path, "output profile path");

    auto* s = app.add_subcommand("selfcheck", "run the acceptance battery");
    s->add_option("--suite", suite, "fast|full");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 64;
    }

    try {
        std::uint64_t seed = seed_from_env();
        if (t->parsed()) return cmd_transform(fn_path, op, lambda, rotations, out_path);
        if (m->parsed()) return cmd_measure(fn_path, j, lo_s, hi_s, theta, as_json, seed);
        if (v->parsed()) return cmd_valuate(fn_path, zeta_path, j, side, route, as_json);
        if (d->parsed()) return cmd_decompose(fn_path, spec_path, as_json);
        if (r->parsed()) return cmd_recover(cone_path, n, out_path, threshold, as_json);
        if (a->parsed()) return cmd_abel(zeta_path, abel_fwd, abel_inv, out_path);
        if (s->parsed()) return cmd_selfcheck(suite, as_json, seed);
    } catch (const hessval::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 64;
    } catch (const hessval::ClassViolation& e) {
        std::cerr << "certification failure: " << e.what() << "\n";
        return 2;
    } catch (const hessval::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
