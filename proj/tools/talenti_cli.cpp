#include "config.hpp"

#include "talenti/error.hpp"
#include "talenti/report.hpp"

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>

namespace fs = std::filesystem;
using namespace talenti;
using talenti::cli::ConfigError;
using talenti::cli::RunConfig;

namespace {

struct Options {
    std::string command;
    std::string config;
    std::string out = ".";
    std::optional<std::uint64_t> seed;
    std::optional<int> refine;
    bool json = false;
    bool csv = false;
    std::string mesh_in;
    std::string mesh_out;
    std::string example = "6.1";

    bool want_json() const { return json || !csv; }
    bool want_csv() const { return csv || !json; }
};

/// Failure inside a pipeline stage; reported with the stage name, exit 1.
struct StageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::ofstream open_output(const Options& o, const std::string& file) {
    const fs::path path = fs::path(o.out) / file;
    std::ofstream out(path);
    if (!out) throw StageError("cannot write " + path.string());
    out.precision(17);
    return out;
}

Json header(const RunConfig& cfg, const std::string& command) {
    Json j;
    j["command"] = command;
    j["name"] = cfg.name;
    j["config"] = cfg.source;
    return j;
}

void print_checks(const std::vector<CheckRecord>& checks) {
    for (const auto& c : checks)
        std::cout << (c.pass ? "PASS  " : "FAIL  ") << c.name << "  (margin " << c.margin << ", tol " << c.tolerance
                  << ")\n";
}

MeshPtr load_or_mesh(const RunConfig& cfg, const Options& o) {
    TriMesh mesh = [&] {
        if (o.mesh_in.empty()) return mesh_domain(cfg.domain);
        std::ifstream in(o.mesh_in);
        if (!in) throw StageError("cannot open mesh " + o.mesh_in);
        return read_mesh(in);
    }();
    for (int i = 0; i < cfg.refine; ++i) mesh = refine(mesh);
    auto ptr = std::make_shared<const TriMesh>(std::move(mesh));
    if (!o.mesh_out.empty()) {
        std::ofstream out(o.mesh_out);
        if (!out) throw StageError("cannot write mesh " + o.mesh_out);
        write_mesh(out, *ptr);
    }
    return ptr;
}

ScalarField load_field(const RunConfig& cfg, MeshPtr mesh) {
    if (cfg.f_field) {
        std::ifstream in(*cfg.f_field);
        if (!in) throw StageError("cannot open field " + *cfg.f_field);
        return ScalarField(mesh, read_field(in));
    }
    if (const auto* c = std::get_if<std::vector<double>>(&cfg.f)) {
        if (c->size() == 1) return ScalarField::constant(mesh, c->front());
        return ScalarField::per_component(mesh, *c);
    }
    return ScalarField::sample(mesh, std::get<std::function<double(const Vec2&)>>(cfg.f));
}

SolveOptions solve_options(const RunConfig& cfg) {
    SolveOptions s = cfg.solver;
    s.beta = cfg.beta.value_or(1.0);
    return s;
}

// ------------------------------------------------------------------ commands

int cmd_norm_check(const RunConfig& cfg, const Options& o) {
    const auto checks = anisotropy_identities(cfg.norm, cfg.samples, cfg.seed);
    const AnisotropicNorm unit = normalize_gauge(cfg.norm);
    bool pass = true;
    for (const auto& c : checks) {
        std::cout << (c.pass ? "PASS  " : "FAIL  ") << c.name << "  (worst " << c.worst << ", tol " << c.tolerance
                  << ")\n";
        pass = pass && c.pass;
    }
    std::cout << "normalization scale s = " << unit.scale() << "  (|K| = " << unit.gauge_volume()
              << ", Wulff volume k_n = " << unit.wulff_volume() << ")\n";

    if (o.want_json()) {
        Json j = header(cfg, "norm-check");
        j["seed"] = cfg.seed;
        j["samples"] = cfg.samples;
        j["pass"] = pass;
        j["identities"] = Json::array();
        for (const auto& c : checks) j["identities"].push_back(to_json(c));
        j["normalization"] = {{"scale", unit.scale()},
                              {"gauge_volume", unit.gauge_volume()},
                              {"unit_ball_volume", unit_ball_volume(unit.dim())},
                              {"wulff_volume", unit.wulff_volume()},
                              {"gamma", unit.gamma()},
                              {"delta", unit.delta()}};
        if (cfg.norm.dim() == 2) {
            const Polygon square{{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
            const auto iso = check_isoperimetric(cfg.norm, square);
            j["isoperimetric_unit_square"] = {{"perimeter_H", iso.lhs}, {"bound", iso.rhs}, {"margin", iso.margin}};
        }
        auto out = open_output(o, "norm_check.json");
        write_json(out, j);
    }
    if (o.want_csv()) {
        auto out = open_output(o, "norm_check.csv");
        out << "name,worst,tolerance,pass\n";
        for (const auto& c : checks) out << '"' << c.name << "\"," << c.worst << ',' << c.tolerance << ','
                                         << (c.pass ? "true" : "false") << '\n';
    }
    return pass ? 0 : 1;
}

int cmd_solve(const RunConfig& cfg, const Options& o) {
    MeshPtr mesh = load_or_mesh(cfg, o);
    const ScalarField f = load_field(cfg, mesh);
    const SolveOptions opts = solve_options(cfg);
    const SolveResult r = solve_robin(f, cfg.norm, opts);
    const double flux = opts.beta * boundary_integral_H(r.u, cfg.norm);
    const double load = integral(f);
    std::cout << "solved with " << r.method << " in " << r.iterations << " iterations, |grad E| = "
              << r.gradient_norm << "\nu in [" << r.u.min() << ", " << r.u.max() << "]\n";

    if (o.want_json()) {
        Json j = header(cfg, "solve");
        j["mesh"] = {{"vertices", mesh->vertex_count()},
                     {"triangles", mesh->triangle_count()},
                     {"h", mesh->max_edge_length()},
                     {"area", mesh->area()},
                     {"components", mesh->component_count()}};
        j["method"] = r.method;
        j["iterations"] = r.iterations;
        j["gradient_norm"] = r.gradient_norm;
        j["energy"] = energy(r.u, f, cfg.norm, opts.beta);
        j["u_min"] = r.u.min();
        j["u_max"] = r.u.max();
        j["flux"] = {{"beta_boundary_integral", flux}, {"load", load}, {"residual", flux - load}};
        auto out = open_output(o, "solve.json");
        write_json(out, j);
    }
    {
        auto out = open_output(o, "u.txt");
        write_field(out, r.u);
    }
    if (o.want_csv()) {
        auto out = open_output(o, "u.csv");
        write_field_csv(out, r.u);
    }
    return 0;
}

int cmd_radial(const RunConfig& cfg, const Options& o) {
    const double beta = cfg.beta.value_or(1.0);
    const RadialProblem p =
        cfg.fstar ? RadialProblem::on_wulff(cfg.norm, cfg.radius, beta, *cfg.fstar)
                  : RadialProblem::constant_load(cfg.norm, cfg.radius, beta, std::get<std::vector<double>>(cfg.f)[0]);
    const RadialSolution v(p);
    std::cout << "v_max = v(0) = " << v.v_max() << ", v_min = v(R) = " << v.v_min() << "\n";
    if (o.want_json()) {
        Json j = header(cfg, "radial");
        j["n"] = v.n();
        j["R"] = v.R();
        j["beta"] = beta;
        j["kappa"] = v.kappa();
        j["measure"] = v.measure();
        j["load"] = v.load();
        j["v_max"] = v.v_max();
        j["v_min"] = v.v_min();
        j["L1"] = v.lq_norm(1.0);
        j["L2"] = v.lq_norm(2.0);
        auto out = open_output(o, "radial.json");
        write_json(out, j);
    }
    if (o.want_csv()) {
        auto out = open_output(o, "radial.csv");
        v.write_csv(out, cfg.csv_samples);
    }
    return 0;
}

int cmd_symmetrize(const RunConfig& cfg, const Options& o) {
    MeshPtr mesh = load_or_mesh(cfg, o);
    const ScalarField f = load_field(cfg, mesh);
    const SolveResult r = solve_robin(f, cfg.norm, solve_options(cfg));

    const double R = std::sqrt(mesh->area() / cfg.norm.wulff_volume());
    DomainSpec wulff;
    wulff.components.push_back(WulffComponent{cfg.norm, Vec2::Zero(), R, 256, true});
    wulff.target_h = mesh->max_edge_length();
    auto target = std::make_shared<const TriMesh>(mesh_domain(wulff));

    const DistributionFunction mu = distribution_of_field(r.u);
    const RearrangedFunction ustar_1d = decreasing_rearrangement(mu);
    const ScalarField ustar = convex_symmetrization(ustar_1d, cfg.norm, target);

    // Equimeasurability: the norms of u and u* agree up to the target mesh.
    const double l1 = std::abs(integral(r.u)), l1s = std::abs(integral(ustar));
    const double l2 = l2_norm(r.u), l2s = l2_norm(ustar);
    const double l2_exact = std::sqrt(rearranged_power_integral(ustar_1d, 2.0));
    std::cout << "L1: " << l1 << " -> " << l1s << "\nL2: " << l2 << " -> " << l2s << " (exact " << l2_exact << ")\n";

    if (o.want_json()) {
        Json j = header(cfg, "symmetrize");
        j["measure"] = mesh->area();
        j["wulff_radius"] = R;
        j["u"] = {{"min", r.u.min()}, {"max", r.u.max()}, {"L1", l1}, {"L2", l2}};
        j["ustar"] = {{"min", ustar.min()}, {"max", ustar.max()}, {"L1", l1s}, {"L2", l2s}};
        j["L2_of_rearrangement"] = l2_exact;
        auto out = open_output(o, "symmetrize.json");
        write_json(out, j);
    }
    if (o.want_csv()) {
        auto a = open_output(o, "ustar.csv");
        write_field_csv(a, ustar);
        auto b = open_output(o, "distribution.csv");
        write_distribution_csv(b, mu);
        auto c = open_output(o, "rearrangement.csv");
        write_rearrangement_csv(c, ustar_1d, cfg.csv_samples);
    }
    return 0;
}

ComparisonCase comparison_case(const RunConfig& cfg) {
    ComparisonCase c;
    c.name = cfg.name;
    c.domain = cfg.domain;
    c.norm = cfg.norm;
    c.beta = cfg.beta.value_or(1.0);
    c.f = cfg.f;
    c.refinement_levels = cfg.refine;
    c.solver = cfg.solver;
    return c;
}

void emit_report(const ComparisonReport& rep, const RunConfig& cfg, const Options& o, const std::string& command,
                 const std::string& stem) {
    if (o.want_json()) {
        Json j = header(cfg, command);
        j["report"] = to_json(rep);
        auto out = open_output(o, stem + ".json");
        write_json(out, j);
    }
    if (o.want_csv()) {
        if (!rep.checks.empty()) {
            auto out = open_output(o, stem + "_checks.csv");
            write_checks_csv(out, rep.checks);
        }
        auto out = open_output(o, stem + "_table.csv");
        write_table_csv(out, rep.table);
    }
}

int cmd_compare(const RunConfig& cfg, const Options& o) {
    if (cfg.f_field) throw ConfigError("compare: f must be constants per component or affine");
    const ComparisonReport rep = run_comparison(comparison_case(cfg), cfg.with_eigen);
    print_checks(rep.checks);
    for (const auto& [k, v] : rep.info) std::cout << k << " = " << v << '\n';
    emit_report(rep, cfg, o, "compare", "compare");
    const auto failed = std::count_if(rep.checks.begin(), rep.checks.end(), [](const auto& c) { return !c.pass; });
    std::cout << rep.checks.size() - failed << "/" << rep.checks.size() << " checks pass\n";
    return failed == 0 ? 0 : 1;
}

int cmd_eigen(const RunConfig& cfg, const Options& o) {
    MeshPtr mesh = load_or_mesh(cfg, o);
    const double beta = cfg.beta.value_or(1.0);
    const Eigenpair e = first_eigenpair(mesh, cfg.norm, beta, cfg.eigen);
    std::cout << "lambda_1 = " << e.lambda << " (" << e.iterations << " iterations)\n";
    if (o.want_json()) {
        Json j = header(cfg, "eigen");
        j["beta"] = beta;
        j["h"] = mesh->max_edge_length();
        j["area"] = mesh->area();
        j["lambda"] = e.lambda;
        j["iterations"] = e.iterations;
        j["rayleigh_quotient"] = rayleigh_quotient(e.u, cfg.norm, beta);
        auto out = open_output(o, "eigen.json");
        write_json(out, j);
    }
    if (o.want_csv()) {
        auto out = open_output(o, "eigenfunction.csv");
        write_field_csv(out, e.u);
    }
    return 0;
}

int cmd_counterexample(const RunConfig& cfg, const Options& o) {
    if (o.example != "6.1" && o.example != "6.2") throw ConfigError("--example must be 6.1 or 6.2");
    const int n = o.example == "6.1" ? 2 : 3;
    if (cfg.source.contains("norm") && cfg.norm.dim() != n)
        throw ConfigError("norm: example " + o.example + " needs dim " + std::to_string(n));
    const AnisotropicNorm norm = cfg.source.contains("norm") ? cfg.norm : AnisotropicNorm::euclidean(n);
    const std::vector<double> radii = cfg.radii.empty() ? std::vector<double>{0.05, 0.1, 0.2} : cfg.radii;
    const double beta = cfg.beta.value_or(0.5);
    const CounterexampleReport r = n == 2 ? counterexample_61(radii, norm, beta) : counterexample_62(radii, norm, beta);
    std::cout << (n == 2 ? "c_estimate = " : "d_estimate = ") << r.estimate << "  (power fit " << r.power_fit
              << ", log-log slope " << r.slope << ")\n";
    for (std::size_t i = 0; i < r.r.size(); ++i)
        std::cout << "  r0 = " << r.r[i] << "  delta = " << r.delta[i] << "  delta / r0^" << n
                  << " = " << r.normalized[i] << '\n';
    std::cout << (r.pass ? "PASS" : "FAIL") << '\n';
    if (o.want_json()) {
        Json j = header(cfg, "counterexample");
        j["example"] = o.example;
        j["beta"] = beta;
        j["result"] = to_json(r);
        auto out = open_output(o, "counterexample_" + o.example + ".json");
        write_json(out, j);
    }
    if (o.want_csv()) {
        auto out = open_output(o, "counterexample_" + o.example + ".csv");
        out << "r0,delta,normalized\n";
        for (std::size_t i = 0; i < r.r.size(); ++i) out << r.r[i] << ',' << r.delta[i] << ',' << r.normalized[i] << '\n';
    }
    return r.pass ? 0 : 1;
}

int cmd_explore(const RunConfig& cfg, const Options& o) {
    const std::vector<double> radii = cfg.radii.empty() ? std::vector<double>{0.05, 0.1, 0.2, 0.4} : cfg.radii;
    const std::vector<double> loads = cfg.loads.empty() ? std::vector<double>{0.0, 0.5, 1.0} : cfg.loads;
    const ComparisonReport rep = explore_open_problems(radii, loads, cfg.beta.value_or(0.5));
    for (const auto& row : rep.table) {
        for (const auto& [k, v] : row) std::cout << k << " = " << v << "  ";
        std::cout << '\n';
    }
    emit_report(rep, cfg, o, "explore-open-problems", "explore");
    return 0;
}

void configure_logging() {
    spdlog::set_level(spdlog::level::warn);
    if (const char* env = std::getenv("TALENTI_LOG")) {
        const auto level = spdlog::level::from_str(env);
        // from_str maps anything unrecognized to off
        if (level != spdlog::level::off || std::string_view(env) == "off") spdlog::set_level(level);
    }
}

}  // namespace

int main(int argc, char** argv) {
    configure_logging();
    CLI::App app{"Anisotropic Robin problems, convex symmetrization and comparison checks"};
    app.require_subcommand(1);
    Options o;

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"norm-check", "identity suite and normalization of a gauge"},
        {"solve", "FEM solution of the anisotropic Robin problem"},
        {"radial", "closed-form symmetrized solution on a Wulff shape"},
        {"symmetrize", "solve, then convex-symmetrize the solution"},
        {"compare", "comparison harness: u on the domain against v on the Wulff shape"},
        {"eigen", "first Robin eigenpair"},
        {"counterexample", "two-component counterexamples"},
        {"explore-open-problems", "data for the open comparison questions (nothing asserted)"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", o.config, "JSON configuration file")->check(CLI::ExistingFile);
        sub->add_option("--out", o.out, "output directory")->capture_default_str();
        sub->add_option("--seed", o.seed, "seed for randomized sweeps (overrides the config)");
        sub->add_option("--refine", o.refine, "uniform refinements (overrides the config)")->check(CLI::NonNegativeNumber);
        sub->add_flag("--json", o.json, "write JSON output only");
        sub->add_flag("--csv", o.csv, "write CSV output only");
        if (name == "solve" || name == "eigen" || name == "symmetrize") {
            sub->add_option("--mesh-in", o.mesh_in, "read the mesh instead of meshing the domain")
                ->check(CLI::ExistingFile);
            sub->add_option("--mesh-out", o.mesh_out, "write the mesh used");
        }
        if (name == "counterexample")
            sub->add_option("--example", o.example, "6.1 (n = 2) or 6.2 (n = 3)")->check(CLI::IsMember({"6.1", "6.2"}));
        sub->callback([&o, name] { o.command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    RunConfig cfg;
    try {
        cfg = o.config.empty() ? talenti::cli::parse_config(Json::object(), o.command)
                               : talenti::cli::load_config(o.config, o.command);
        if (o.seed) {
            cfg.seed = *o.seed;
            cfg.source["seed"] = *o.seed;
        }
        if (o.refine) {
            cfg.refine = *o.refine;
            cfg.source["refine"] = *o.refine;
        }
        std::error_code ec;
        fs::create_directories(o.out, ec);
        if (ec) throw ConfigError("cannot create output directory " + o.out + ": " + ec.message());
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const Json::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    }

    std::cout.precision(10);
    try {
        if (o.command == "norm-check") return cmd_norm_check(cfg, o);
        if (o.command == "solve") return cmd_solve(cfg, o);
        if (o.command == "radial") return cmd_radial(cfg, o);
        if (o.command == "symmetrize") return cmd_symmetrize(cfg, o);
        if (o.command == "compare") return cmd_compare(cfg, o);
        if (o.command == "eigen") return cmd_eigen(cfg, o);
        if (o.command == "counterexample") return cmd_counterexample(cfg, o);
        if (o.command == "explore-open-problems") return cmd_explore(cfg, o);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << o.command << ": " << e.what() << '\n';
        return 1;
    }
    return 2;
}
