#include "config.hpp"

#include "talenti/error.hpp"

#include <fstream>
#include <map>
#include <set>

namespace talenti::cli {

namespace {

// Top-level keys accepted by each command.
const std::map<std::string, std::set<std::string>> command_keys = {
    {"norm-check", {"name", "norm", "seed", "samples"}},
    {"solve", {"name", "norm", "domain", "beta", "f", "refine", "solver"}},
    {"radial", {"name", "norm", "beta", "radius", "f", "fstar", "samples"}},
    {"symmetrize", {"name", "norm", "domain", "beta", "f", "refine", "solver", "samples"}},
    {"compare", {"name", "norm", "domain", "beta", "f", "refine", "solver", "with_eigen", "eigen"}},
    {"eigen", {"name", "norm", "domain", "beta", "refine", "eigen"}},
    {"counterexample", {"name", "norm", "beta", "radii"}},
    {"explore-open-problems", {"name", "beta", "radii", "loads"}},
};

void check_keys(const Json& j, const std::string& where, const std::set<std::string>& allowed) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& [key, value] : j.items())
        if (!allowed.contains(key)) throw ConfigError(where + ": unknown key \"" + key + "\"");
}

double get_number(const Json& j, const std::string& where) {
    if (!j.is_number()) throw ConfigError(where + ": expected a number");
    return j.get<double>();
}

double positive(const Json& j, const std::string& where) {
    const double x = get_number(j, where);
    if (!(x > 0.0) || !std::isfinite(x)) throw ConfigError(where + ": expected a positive number");
    return x;
}

int get_int(const Json& j, const std::string& where, int lo) {
    if (!j.is_number_integer()) throw ConfigError(where + ": expected an integer");
    const auto v = j.get<long long>();
    if (v < lo || v > 1'000'000'000) throw ConfigError(where + ": out of range");
    return static_cast<int>(v);
}

std::vector<double> number_list(const Json& j, const std::string& where) {
    if (!j.is_array()) throw ConfigError(where + ": expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_number(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

Vec2 point(const Json& j, const std::string& where) {
    const auto xs = number_list(j, where);
    if (xs.size() != 2) throw ConfigError(where + ": expected [x, y]");
    return {xs[0], xs[1]};
}

AnisotropicNorm parse_norm(const Json& j, RunConfig& cfg) {
    const std::string where = "norm";
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        throw ConfigError(where + ": expected an object with a string \"kind\"");
    const std::string kind = j["kind"];
    try {
        AnisotropicNorm norm = AnisotropicNorm::euclidean(2);
        if (kind == "euclidean") {
            check_keys(j, where, {"kind", "dim", "normalize"});
            norm = AnisotropicNorm::euclidean(j.contains("dim") ? get_int(j["dim"], where + ".dim", 2) : 2);
        } else if (kind == "quadratic") {
            check_keys(j, where, {"kind", "A", "normalize"});
            if (!j.contains("A") || !j["A"].is_array()) throw ConfigError(where + ".A: expected a matrix");
            const auto& rows = j["A"];
            const auto n = static_cast<Eigen::Index>(rows.size());
            Eigen::MatrixXd A(n, n);
            for (Eigen::Index r = 0; r < n; ++r) {
                const auto row = number_list(rows[r], where + ".A");
                if (static_cast<Eigen::Index>(row.size()) != n) throw ConfigError(where + ".A: matrix must be square");
                for (Eigen::Index c = 0; c < n; ++c) A(r, c) = row[c];
            }
            norm = AnisotropicNorm::quadratic(A);
        } else if (kind == "weighted_p") {
            check_keys(j, where, {"kind", "p", "weights", "normalize"});
            if (!j.contains("p") || !j.contains("weights")) throw ConfigError(where + ": needs \"p\" and \"weights\"");
            norm = AnisotropicNorm::weighted_p(get_number(j["p"], where + ".p"),
                                               number_list(j["weights"], where + ".weights"));
        } else {
            throw ConfigError(where + ": unknown kind \"" + kind + "\"");
        }
        cfg.raw_scale = norm.scale();
        if (j.contains("normalize")) {
            if (!j["normalize"].is_boolean()) throw ConfigError(where + ".normalize: expected true or false");
            if (j["normalize"].get<bool>()) {
                norm = normalize_gauge(norm);
                cfg.normalized = true;
            }
        }
        return norm;
    } catch (const InvalidInput& e) {
        throw ConfigError(where + ": " + e.what());
    }
}

DomainComponent parse_component(const Json& j, const std::string& where, const AnisotropicNorm& norm) {
    if (!j.is_object() || j.size() != 1) throw ConfigError(where + ": expected an object with exactly one shape key");
    const std::string kind = j.begin().key();
    const Json& body = j.begin().value();
    if (kind == "polygon") {
        if (!body.is_array() || body.size() < 3) throw ConfigError(where + ".polygon: expected at least 3 points");
        Polygon poly;
        for (std::size_t i = 0; i < body.size(); ++i) poly.push_back(point(body[i], where + ".polygon"));
        return poly;
    }
    if (kind == "rectangle") {
        check_keys(body, where + ".rectangle", {"min", "max"});
        if (!body.contains("min") || !body.contains("max")) throw ConfigError(where + ".rectangle: needs min and max");
        const Vec2 a = point(body["min"], where + ".rectangle.min");
        const Vec2 b = point(body["max"], where + ".rectangle.max");
        if (!(b.x() > a.x() && b.y() > a.y())) throw ConfigError(where + ".rectangle: max must exceed min");
        return Polygon{a, {b.x(), a.y()}, b, {a.x(), b.y()}};
    }
    if (kind == "wulff" || kind == "disk") {
        check_keys(body, where + "." + kind, {"center", "radius", "segments", "match_area"});
        WulffComponent w{.norm = kind == "wulff" ? norm : AnisotropicNorm::euclidean(2)};
        if (body.contains("center")) w.center = point(body["center"], where + ".center");
        if (body.contains("radius")) w.radius = positive(body["radius"], where + ".radius");
        if (body.contains("segments")) w.segments = get_int(body["segments"], where + ".segments", 3);
        if (body.contains("match_area")) w.match_area = body["match_area"].get<bool>();
        return w;
    }
    throw ConfigError(where + ": unknown shape \"" + kind + "\" (polygon, rectangle, wulff, disk)");
}

DomainSpec parse_domain(const Json& j, const AnisotropicNorm& norm) {
    check_keys(j, "domain", {"h", "components"});
    DomainSpec d;
    if (j.contains("h")) d.target_h = positive(j["h"], "domain.h");
    if (!j.contains("components") || !j["components"].is_array() || j["components"].empty())
        throw ConfigError("domain.components: expected a non-empty array");
    for (std::size_t i = 0; i < j["components"].size(); ++i)
        d.components.push_back(
            parse_component(j["components"][i], "domain.components[" + std::to_string(i) + "]", norm));
    return d;
}

LoadSpec parse_load(const Json& j, RunConfig& cfg) {
    if (j.is_number()) return std::vector<double>{get_number(j, "f")};
    if (j.is_array()) return number_list(j, "f");
    check_keys(j, "f", {"affine", "field"});
    if (j.size() != 1) throw ConfigError("f: give exactly one of \"affine\" or \"field\"");
    if (j.contains("field")) {
        if (!j["field"].is_string()) throw ConfigError("f.field: expected a path");
        cfg.f_field = j["field"].get<std::string>();
        return std::vector<double>{1.0};
    }
    const auto c = number_list(j["affine"], "f.affine");
    if (c.size() != 3) throw ConfigError("f.affine: expected [a, b, c] for a + b x + c y");
    return [a = c[0], b = c[1], e = c[2]](const Vec2& x) { return a + b * x.x() + e * x.y(); };
}

SolveOptions parse_solver(const Json& j) {
    check_keys(j, "solver", {"method", "grad_tol", "max_iters", "regularization_eps"});
    SolveOptions o;
    if (j.contains("method")) {
        static const std::map<std::string, SolveMethod> methods = {{"auto", SolveMethod::automatic},
                                                                   {"direct", SolveMethod::direct},
                                                                   {"newton", SolveMethod::newton},
                                                                   {"lbfgs", SolveMethod::lbfgs}};
        const auto it = j["method"].is_string() ? methods.find(j["method"].get<std::string>()) : methods.end();
        if (it == methods.end()) throw ConfigError("solver.method: one of auto, direct, newton, lbfgs");
        o.method = it->second;
    }
    if (j.contains("grad_tol")) o.grad_tol = positive(j["grad_tol"], "solver.grad_tol");
    if (j.contains("max_iters")) o.max_iters = get_int(j["max_iters"], "solver.max_iters", 1);
    if (j.contains("regularization_eps"))
        o.regularization_eps = get_number(j["regularization_eps"], "solver.regularization_eps");
    return o;
}

}  // namespace

RunConfig parse_config(const Json& j, const std::string& command) {
    const auto keys = command_keys.find(command);
    if (keys == command_keys.end()) throw ConfigError("unknown command " + command);
    check_keys(j, "config", keys->second);

    RunConfig cfg;
    cfg.source = j;
    if (j.contains("name")) {
        if (!j["name"].is_string()) throw ConfigError("name: expected a string");
        cfg.name = j["name"];
    }
    if (j.contains("norm")) cfg.norm = parse_norm(j["norm"], cfg);
    if (j.contains("beta")) cfg.beta = positive(j["beta"], "beta");
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) throw ConfigError("seed: expected a nonnegative integer");
        cfg.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("samples")) cfg.samples = cfg.csv_samples = get_int(j["samples"], "samples", 1);
    if (j.contains("refine")) cfg.refine = get_int(j["refine"], "refine", 0);
    if (j.contains("with_eigen")) {
        if (!j["with_eigen"].is_boolean()) throw ConfigError("with_eigen: expected true or false");
        cfg.with_eigen = j["with_eigen"];
    }

    const bool planar = command != "norm-check" && command != "radial" && command != "counterexample" &&
                        command != "explore-open-problems";
    if (planar && cfg.norm.dim() != 2) throw ConfigError("norm: " + command + " works in the plane (dim 2)");

    cfg.domain.components = {Polygon{{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}}};
    if (j.contains("domain")) cfg.domain = parse_domain(j["domain"], cfg.norm);
    if (j.contains("f")) cfg.f = parse_load(j["f"], cfg);
    if (j.contains("solver")) cfg.solver = parse_solver(j["solver"]);
    if (j.contains("eigen")) {
        check_keys(j["eigen"], "eigen", {"tol", "max_iters"});
        if (j["eigen"].contains("tol")) cfg.eigen.tol = positive(j["eigen"]["tol"], "eigen.tol");
        if (j["eigen"].contains("max_iters"))
            cfg.eigen.max_iters = get_int(j["eigen"]["max_iters"], "eigen.max_iters", 1);
    }

    if (command == "radial") {
        if (j.contains("radius")) cfg.radius = positive(j["radius"], "radius");
        if (j.contains("fstar")) {
            if (j.contains("f")) throw ConfigError("radial: give either \"f\" or \"fstar\", not both");
            check_keys(j["fstar"], "fstar", {"knots", "values"});
            if (!j["fstar"].contains("knots") || !j["fstar"].contains("values"))
                throw ConfigError("fstar: needs knots and values");
            try {
                cfg.fstar = PiecewiseLinear(number_list(j["fstar"]["knots"], "fstar.knots"),
                                            number_list(j["fstar"]["values"], "fstar.values"));
            } catch (const InvalidInput& e) {
                throw ConfigError(std::string("fstar: ") + e.what());
            }
        } else if (!std::holds_alternative<std::vector<double>>(cfg.f) ||
                   std::get<std::vector<double>>(cfg.f).size() != 1 || cfg.f_field) {
            throw ConfigError("radial: f must be a single constant");
        }
    }
    if (j.contains("radii")) {
        cfg.radii = number_list(j["radii"], "radii");
        for (double r : cfg.radii)
            if (!(r > 0.0 && r < 1.0)) throw ConfigError("radii: each radius must lie in (0, 1)");
        if (cfg.radii.size() < 2) throw ConfigError("radii: need at least two radii");
    }
    if (j.contains("loads")) {
        cfg.loads = number_list(j["loads"], "loads");
        for (double l : cfg.loads)
            if (!(l >= 0.0)) throw ConfigError("loads: must be nonnegative");
    }
    return cfg;
}

RunConfig load_config(const std::string& path, const std::string& command) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path);
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return parse_config(j, command);
}

}  // namespace talenti::cli
