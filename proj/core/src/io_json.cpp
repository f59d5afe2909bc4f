#include "hessval/io_json.hpp"

#include <nlohmann/json.hpp>

#include <fstream>

namespace hessval {

using nlohmann::json;

namespace {

json vec_to_json(const Vec& v) {
    json a = json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

Vec vec_from_json(const json& a) {
    Vec v(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) v[i] = a[i].get<double>();
    return v;
}

json mat_to_json(const Mat& m) {
    json rows = json::array();
    for (int r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(row);
    }
    return rows;
}

Mat mat_from_json(const json& rows) {
    const int r = static_cast<int>(rows.size());
    const int c = r > 0 ? static_cast<int>(rows[0].size()) : 0;
    Mat m(r, c);
    for (int i = 0; i < r; ++i)
        for (int k = 0; k < c; ++k) m(i, k) = rows[i][k].get<double>();
    return m;
}

json value_to_json(double v) {
    if (std::isinf(v)) return "inf";
    return v;
}

double value_from_json(const json& j) {
    if (j.is_string()) {
        if (j.get<std::string>() == "inf") return kInf;
        throw UsageError("unknown value token: " + j.get<std::string>());
    }
    return j.get<double>();
}

}  // namespace

json polytope_to_json(const Polytope& p) {
    json out;
    json verts = json::array();
    for (const Vec& v : p.vertices()) verts.push_back(vec_to_json(v));
    out["vertices"] = verts;
    json hs = json::array();
    for (const HalfSpace& h : p.halfspaces())
        hs.push_back({{"normal", vec_to_json(h.normal)}, {"offset", h.offset}});
    out["halfspaces"] = hs;
    return out;
}

Polytope polytope_from_json(const json& j) {
    if (j.contains("box"))
        return Polytope::box(vec_from_json(j["box"]["lo"]), vec_from_json(j["box"]["hi"]));
    if (j.contains("interval"))
        return Polytope::interval(j["interval"][0].get<double>(), j["interval"][1].get<double>());
    if (j.contains("point")) return Polytope::point(vec_from_json(j["point"]));
    if (j.contains("vertices")) {
        std::vector<Vec> vs;
        for (const auto& v : j["vertices"]) vs.push_back(vec_from_json(v));
        if (vs.empty()) throw UsageError("polytope: empty vertex list");
        const int dim = static_cast<int>(vs[0].size());
        if (dim == 1) {
            double lo = kInf, hi = -kInf;
            for (const Vec& v : vs) {
                lo = std::min(lo, v[0]);
                hi = std::max(hi, v[0]);
            }
            return Polytope::interval(lo, hi);
        }
        if (dim == 2) return Polytope::hull_2d(vs);
        throw UsageError("polytope: vertex input supported in dimensions 1 and 2");
    }
    throw UsageError("polytope: expected box, interval, point, or vertices");
}

json convex_function_to_json(const ConvexFunction& f) {
    json out;
    out["dim"] = f.dim();
    switch (f.variant()) {
        case Variant::Grid: {
            const GridData& g = f.grid_data();
            out["type"] = "grid";
            out["box"] = {{"lo", vec_to_json(g.lo)}, {"hi", vec_to_json(g.hi)}};
            out["shape"] = g.shape;
            json vals = json::array();
            for (double v : g.values) vals.push_back(value_to_json(v));
            out["values"] = vals;
            break;
        }
        case Variant::Quadratic: {
            const QuadraticData& q = f.quadratic_data();
            out["type"] = "quadratic";
            out["Q"] = mat_to_json(q.Q);
            out["b"] = vec_to_json(q.b);
            out["c"] = q.c;
            break;
        }
        case Variant::RadialConeU: {
            out["type"] = "radial_cone_u";
            out["t"] = f.cone_data().t;
            out["ball_radius"] = f.cone_data().ball_radius;
            break;
        }
        case Variant::RadialConeV: {
            out["type"] = "radial_cone_v";
            out["t"] = f.cone_data().t;
            out["scale"] = f.cone_data().scale;
            break;
        }
        case Variant::RadialProfile: {
            const RadialProfileData& p = f.profile_data();
            if (p.analytic())
                throw UsageError("cannot serialize an analytic radial profile; sample it first");
            out["type"] = "radial_profile";
            out["r_max"] = p.r_max;
            out["values"] = p.samples;
            break;
        }
        case Variant::PiecewiseAffine: {
            out["type"] = "piecewise_affine";
            json pieces = json::array();
            for (const PwaPiece& p : f.pwa_pieces())
                pieces.push_back({{"slope", vec_to_json(p.slope)},
                                  {"offset", p.offset},
                                  {"polytope", polytope_to_json(p.region)}});
            out["pieces"] = pieces;
            break;
        }
        case Variant::IndicatorLinear: {
            const IndicatorLinearData& d = f.indicator_data();
            out["type"] = "indicator_linear";
            out["polytope"] = polytope_to_json(d.region);
            out["slope"] = vec_to_json(d.slope);
            break;
        }
        case Variant::KinkSum: {
            const KinkSumData& d = f.kink_data();
            out["type"] = "kink_sum";
            out["xbar"] = vec_to_json(d.xbar);
            out["axes"] = d.axes;
            break;
        }
    }
    return out;
}

ConvexFunction convex_function_from_json(const json& j) {
    const std::string type = j.at("type").get<std::string>();
    const int dim = j.at("dim").get<int>();
    if (type == "grid") {
        GridData g = GridData::make(vec_from_json(j.at("box").at("lo")),
                                    vec_from_json(j.at("box").at("hi")),
                                    j.at("shape").get<std::vector<int>>());
        const auto& vals = j.at("values");
        if (vals.size() != g.size()) throw UsageError("grid: values length mismatch");
        for (std::size_t k = 0; k < g.size(); ++k) g.values[k] = value_from_json(vals[k]);
        return ConvexFunction::grid(std::move(g));
    }
    if (type == "quadratic")
        return ConvexFunction::quadratic(mat_from_json(j.at("Q")), vec_from_json(j.at("b")),
                                         j.at("c").get<double>());
    if (type == "radial_cone_u")
        return ConvexFunction::radial_cone_u(dim, j.at("t").get<double>(),
                                             j.value("ball_radius", 1.0));
    if (type == "radial_cone_v")
        return ConvexFunction::radial_cone_v(dim, j.at("t").get<double>(), j.value("scale", 1.0));
    if (type == "radial_profile")
        return ConvexFunction::radial_profile(dim, j.at("r_max").get<double>(),
                                              j.at("values").get<std::vector<double>>());
    if (type == "piecewise_affine") {
        std::vector<PwaPiece> pieces;
        for (const auto& p : j.at("pieces"))
            pieces.push_back({vec_from_json(p.at("slope")), p.at("offset").get<double>(),
                              polytope_from_json(p.at("polytope"))});
        return ConvexFunction::piecewise_affine(dim, std::move(pieces));
    }
    if (type == "indicator_linear")
        return ConvexFunction::indicator_linear(polytope_from_json(j.at("polytope")),
                                                vec_from_json(j.at("slope")));
    if (type == "kink_sum")
        return ConvexFunction::kink_sum(dim, vec_from_json(j.at("xbar")),
                                        j.at("axes").get<std::vector<int>>());
    throw UsageError("unknown convex function type: " + type);
}

ConvexFunction load_convex_function(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open " + path);
    json j;
    in >> j;
    return convex_function_from_json(j);
}

void save_convex_function(const ConvexFunction& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot open " + path + " for writing");
    out << convex_function_to_json(f).dump(2) << "\n";
}

}  // namespace hessval
