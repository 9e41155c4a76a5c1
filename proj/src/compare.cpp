#include "talenti/compare.hpp"

#include "talenti/error.hpp"
#include "talenti/quadrature.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace talenti {

CheckRecord make_check(std::string name, double lhs, double rhs, double margin, double tolerance, std::string note) {
    CheckRecord r{std::move(name), lhs, rhs, margin, tolerance, false, std::move(note)};
    r.pass = std::isfinite(margin) && margin >= -tolerance;
    return r;
}

bool ComparisonReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.pass; });
}

void ComparisonReport::append(const ComparisonReport& other) {
    checks.insert(checks.end(), other.checks.begin(), other.checks.end());
    table.insert(table.end(), other.table.begin(), other.table.end());
    info.insert(info.end(), other.info.begin(), other.info.end());
    notes.insert(notes.end(), other.notes.begin(), other.notes.end());
}

namespace {

std::string fmt_p(double p) {
    std::ostringstream os;
    os.precision(6);
    os << p;
    return os.str();
}

bool is_unit_load(const LoadSpec& f) {
    const auto* c = std::get_if<std::vector<double>>(&f);
    return c && std::all_of(c->begin(), c->end(), [](double x) { return x == 1.0; });
}

double domain_measure(const DomainSpec& d) {
    double a = 0.0;
    for (const auto& c : d.components) a += std::abs(polygon_signed_area(component_polygon(c)));
    return a;
}

MeshPtr refined(TriMesh mesh, int level) {
    for (int i = 0; i < level; ++i) mesh = refine(mesh);
    return std::make_shared<const TriMesh>(std::move(mesh));
}

MeshPtr wulff_mesh(const AnisotropicNorm& norm, double R, double h, int segments, int level) {
    DomainSpec d;
    d.components.push_back(WulffComponent{norm, Vec2::Zero(), R, segments, true});
    d.target_h = h;
    return refined(mesh_domain(d), level);
}

double polar_radius(const AnisotropicNorm& norm, const Vec2& x, double R) { return std::min(norm.polar(x), R); }

}  // namespace

PiecewiseLinear piecewise_constant_rearrangement(std::vector<double> values, std::vector<double> measures) {
    if (values.size() != measures.size() || values.empty())
        throw InvalidInput("need one load value per component measure");
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    std::vector<double> knots{0.0}, vals;
    double s = 0.0;
    for (std::size_t i : order) {
        if (!(measures[i] >= 0.0)) throw InvalidInput("negative component measure");
        if (measures[i] == 0.0) continue;
        vals.push_back(values[i]);
        s += measures[i];
        knots.push_back(s);
        vals.push_back(values[i]);
        knots.push_back(s);
    }
    knots.pop_back();
    return PiecewiseLinear(std::move(knots), std::move(vals));
}

// ---------------------------------------------------------------- pipeline

CaseSolution solve_case(const ComparisonCase& c, int level) {
    if (c.norm.dim() != 2) throw InvalidInput("finite-element cases are planar");
    if (!(c.beta > 0.0)) throw InvalidInput("beta must be positive");
    MeshPtr mesh = refined(mesh_domain(c.domain), level);

    ScalarField f = std::visit(
        [&](const auto& spec) -> ScalarField {
            using T = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<T, std::vector<double>>) {
                if (spec.size() == 1 && mesh->component_count() > 1)
                    return ScalarField::constant(mesh, spec.front());
                return ScalarField::per_component(mesh, spec);
            } else {
                return ScalarField::sample(mesh, spec);
            }
        },
        c.f);
    if (f.min() < 0.0) throw InvalidInput("load must be nonnegative");
    if (f.max() <= 0.0) throw InvalidInput("load must not vanish identically");

    const double measure = mesh->area();
    const double k = c.norm.wulff_volume();
    const double R = std::sqrt(measure / k);

    double l1 = 0.0;
    PiecewiseLinear fstar = [&] {
        if (const auto* consts = std::get_if<std::vector<double>>(&c.f)) {
            if (consts->size() == 1) return PiecewiseLinear::constant(consts->front(), measure);
            return piecewise_constant_rearrangement(*consts, mesh->component_areas());
        }
        return approximate_rearrangement(RearrangedFunction(distribution_of_field(f)), 2, &l1);
    }();
    RadialSolution v(RadialProblem::on_wulff(c.norm, R, c.beta, std::move(fstar)));

    SolveOptions opts = c.solver;
    opts.beta = c.beta;
    SolveResult u = solve_robin(f, c.norm, opts);
    MeshPtr target = wulff_mesh(c.norm, R, c.domain.target_h, c.wulff_segments, level);

    spdlog::debug("case {} level {}: {} vertices, h = {:.4g}, {} in {} iterations", c.name, level,
                  mesh->vertex_count(), mesh->max_edge_length(), u.method, u.iterations);
    return CaseSolution{level,          mesh->max_edge_length(), mesh,          std::move(f),
                        std::move(u),   measure,                 R,             v.problem().fstar,
                        l1,             std::move(v),            std::move(target), mesh->component_count()};
}

std::vector<double> p_grid(double endpoint, int points) {
    std::vector<double> p(points);
    for (int i = 0; i < points; ++i)
        p[i] = points == 1 ? endpoint : endpoint * std::pow(10.0, -static_cast<double>(points - 1 - i) / (points - 1));
    p.back() = endpoint;
    return p;
}

namespace {

struct LorentzPair {
    double p, q, u, v;
};

std::vector<LorentzPair> lorentz_pairs(const DistributionFunction& mu, const DistributionFunction& phi,
                                       std::span<const double> grid, double q, double p_factor) {
    std::vector<LorentzPair> out;
    for (double p : grid) {
        const double pp = p_factor * p;
        out.push_back({pp, q, lorentz_norm(mu, pp, q), lorentz_norm(phi, pp, q)});
    }
    return out;
}

void append_lorentz(std::vector<CheckRecord>& out, const std::string& family, const std::vector<LorentzPair>& pairs,
                    double tol, const std::string& note) {
    for (const auto& x : pairs) {
        const std::string name = family + " L^(" + fmt_p(x.p) + "," + fmt_p(x.q) + ")";
        out.push_back(make_check(name, x.u, x.v, (x.v - x.u) / x.v, tol, note));
    }
}

double max_relative_gap(const std::vector<LorentzPair>& pairs) {
    double g = 0.0;
    for (const auto& x : pairs) g = std::max(g, std::abs(x.v - x.u) / x.v);
    return g;
}

ScalarField radial_on_mesh(const RadialSolution& v, const AnisotropicNorm& norm, MeshPtr target) {
    return ScalarField::sample(std::move(target),
                               [&](const Vec2& x) { return v.eval(polar_radius(norm, x, v.R())); });
}

}  // namespace

Calibration calibrate(const ComparisonCase& c, int level) {
    ComparisonCase eq = c;
    eq.name = c.name + " (equality case)";
    const double R = std::sqrt(domain_measure(c.domain) / c.norm.wulff_volume());
    eq.domain.components.clear();
    eq.domain.components.push_back(WulffComponent{c.norm, Vec2::Zero(), R, c.wulff_segments, true});
    eq.f = std::vector<double>{1.0};
    const CaseSolution s = solve_case(eq, level);

    const ScalarField ustar = convex_symmetrization(s.u.u, c.norm, s.target);
    const ScalarField v = radial_on_mesh(*s.v, c.norm, s.target);
    Calibration cal;
    cal.h = s.h;
    cal.equality_error = (ustar.values - v.values).cwiseAbs().maxCoeff();

    const auto mu = distribution_of_field(s.u.u);
    const auto phi = distribution_of_radial(*s.v);
    const double n = 2.0;
    cal.equality_lorentz_error =
        std::max(max_relative_gap(lorentz_pairs(mu, phi, p_grid(n / (2 * n - 2)), 1.0, 1.0)),
                 max_relative_gap(lorentz_pairs(mu, phi, p_grid(n / (3 * n - 4)), 2.0, 2.0)));
    cal.pointwise.c = std::max(2.0 * cal.equality_error / s.h, 1e-6);
    cal.lorentz.c = std::max(2.0 * cal.equality_lorentz_error / s.h, 1e-9);
    return cal;
}

// ---------------------------------------------------------------- checks

std::vector<CheckRecord> check_umin_vmin(const ComparisonCase& c, const CaseSolution& s, const Calibration& cal) {
    std::vector<CheckRecord> out;
    const double umin = s.u.u.min(), vmin = s.v->v_min();
    out.push_back(make_check("u_min <= v_min", umin, vmin, vmin - umin, cal.pointwise(s.h)));
    const double flux = c.beta * boundary_integral_H(s.u.u, c.norm);
    const double load = integral(s.f);
    out.push_back(make_check("boundary flux balances the load", flux, load, -std::abs(flux - load),
                             1e-8 * std::max(1.0, load)));
    return out;
}

PointwiseResult check_pointwise_n2(const ComparisonCase& c, const CaseSolution& s, const Calibration& cal) {
    if (!is_unit_load(c.f)) throw InvalidInput("the pointwise comparison needs f = 1");
    const ScalarField ustar = convex_symmetrization(s.u.u, c.norm, s.target);
    const ScalarField v = radial_on_mesh(*s.v, c.norm, s.target);
    const Vec diff = ustar.values - v.values;
    Eigen::Index worst = 0;
    const double max_violation = diff.maxCoeff(&worst);
    const Vec lumped = mass_matrix(*s.target) * Vec::Ones(diff.size());
    double measure = 0.0;
    for (Eigen::Index i = 0; i < diff.size(); ++i)
        if (diff[i] > 0.0) measure += lumped[i];

    const double tol = cal.pointwise(s.h);
    PointwiseResult r{{}, max_violation, measure, ustar};
    r.checks.push_back(make_check("u* <= v at every node of the symmetrized domain", ustar.values[worst],
                                  v.values[worst], -max_violation, tol));

    // mu(t + tol) <= phi(t) for all t: the same statement on distributions
    const auto mu = distribution_of_field(s.u.u);
    const auto phi = distribution_of_radial(*s.v);
    double margin = std::numeric_limits<double>::infinity(), at = 0.0;
    const int samples = 128;
    for (int i = 0; i <= samples; ++i) {
        const double t = s.v->v_max() * i / samples;
        const double m = phi(t) - mu(t + tol);
        if (m < margin) {
            margin = m;
            at = t;
        }
    }
    r.checks.push_back(make_check("mu(t + tol) <= phi(t)", mu(at + tol), phi(at), margin, 1e-12 * s.measure,
                                  "worst level t = " + fmt_p(at)));
    return r;
}

std::vector<CheckRecord> check_lorentz_theorems(const ComparisonCase& c, const CaseSolution& s,
                                                const Calibration& cal) {
    const double n = 2.0;
    const auto mu = distribution_of_field(s.u.u);
    const auto phi = distribution_of_radial(*s.v);
    const double tol = cal.lorentz(s.h);
    const std::string note = "relative margin (|v| - |u|) / |v|";
    std::vector<CheckRecord> out;
    append_lorentz(out, "general f", lorentz_pairs(mu, phi, p_grid(n / (2 * n - 2)), 1.0, 1.0), tol, note);
    append_lorentz(out, "general f", lorentz_pairs(mu, phi, p_grid(n / (3 * n - 4)), 2.0, 2.0), tol, note);
    (void)c;
    return out;
}

std::vector<CheckRecord> check_lorentz_closed_form(const AnisotropicNorm& norm, std::span<const WulffLoad> components,
                                                   double beta, double tolerance) {
    const int n = norm.dim();
    const double k = norm.wulff_volume();
    const auto u = multi_wulff_solution(components, norm, beta);
    std::vector<double> values, measures;
    for (const auto& c : components) {
        values.push_back(c.f);
        measures.push_back(k * std::pow(c.R, n));
    }
    const double total = std::accumulate(measures.begin(), measures.end(), 0.0);
    const RadialSolution v(RadialProblem::on_wulff(norm, std::pow(total / k, 1.0 / n), beta,
                                                   piecewise_constant_rearrangement(values, measures)));
    const auto mu = distribution_of_radial(u);
    const auto phi = distribution_of_radial(v);

    const double nd = n;
    const std::string note = "closed form; relative margin (|v| - |u|) / |v|";
    std::vector<CheckRecord> out;
    append_lorentz(out, "general f", lorentz_pairs(mu, phi, p_grid(nd / (2 * nd - 2)), 1.0, 1.0), tolerance, note);
    append_lorentz(out, "general f", lorentz_pairs(mu, phi, p_grid(nd / (3 * nd - 4)), 2.0, 2.0), tolerance, note);
    const bool unit = std::all_of(components.begin(), components.end(), [](const WulffLoad& c) { return c.f == 1.0; });
    if (unit && n >= 3) {
        const double e = nd / (nd - 2);
        append_lorentz(out, "f = 1", lorentz_pairs(mu, phi, p_grid(e), 1.0, 1.0), tolerance, note);
        append_lorentz(out, "f = 1", lorentz_pairs(mu, phi, p_grid(e), 2.0, 2.0), tolerance, note);
    }
    return out;
}

std::vector<CheckRecord> check_lemma_identities(const AnisotropicNorm& norm, double R, double beta,
                                                const PiecewiseLinear& fstar, int samples) {
    const RadialSolution v(RadialProblem::on_wulff(norm, R, beta, fstar));
    const auto phi = distribution_of_radial(v);
    const int n = v.n();
    const double k = v.kappa();
    const double C = n * n * std::pow(k, 2.0 / n);
    const double perimeter = n * k * std::pow(R, n - 1);  // P_H(W_R)
    const double vmin = v.v_min(), vmax = v.v_max();
    const bool unit = std::all_of(fstar.pieces().begin(), fstar.pieces().end(),
                                  [](const PiecewiseLinear::Piece& p) { return p.a == 1.0 && p.b == 1.0; });
    const double tol = unit ? 1e-8 : 1e-6;
    const std::string tag = unit ? " (f = 1)" : " (general f*)";

    // int_{dV_t cap dW_R} H(nu) / v; v = v_min on the whole boundary
    auto trace = [&](double t) { return t < vmin ? perimeter / vmin : 0.0; };
    auto boundary_term = [&](double t) { return trace(t) / beta; };

    std::vector<CheckRecord> out;
    double worst = 0.0, worst_lhs = 0.0, worst_rhs = 0.0;
    double detach = std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
        const double t = vmax * (i + 0.5) / samples;
        if (std::abs(t - vmin) < 1e-9 * vmax) continue;
        const double ph = phi(t);
        double lhs = 0.0, rhs = 0.0;
        if (unit) {
            lhs = C * std::pow(ph, (n - 2.0) / n);
            rhs = -phi.derivative(t) + boundary_term(t);
        } else {
            lhs = C * std::pow(ph, (2.0 * n - 2.0) / n);
            rhs = (-phi.derivative(t) + boundary_term(t)) * fstar.integral(std::min(ph, fstar.length()));
        }
        const double res = std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
        if (res >= worst) {
            worst = res;
            worst_lhs = lhs;
            worst_rhs = rhs;
        }
        if (t > vmin) detach = std::min(detach, R - v.radius_at_level(t));
    }
    out.push_back(make_check("level-set distribution identity" + tag, worst_lhs, worst_rhs, -worst, tol,
                             "max relative residual over " + std::to_string(samples) + " levels"));
    if (std::isfinite(detach))
        out.push_back(make_check("level sets above v_min stay off the boundary", R - detach, R, detach, 0.0));

    const double target = fstar.integral(fstar.length()) / (2.0 * beta);
    double worst_int = 0.0, at_lhs = 0.0;
    for (int i = 0; i <= 10; ++i) {
        const double t = vmin + (vmax - vmin) * i / 10.0;
        double lhs = quad::integrate([&](double tau) { return tau * trace(tau); }, 0.0, vmin);
        if (t > vmin) lhs += quad::integrate([&](double tau) { return tau * trace(tau); }, vmin, t);
        const double res = std::abs(lhs - target) / std::max(1.0, target);
        if (res >= worst_int) {
            worst_int = res;
            at_lhs = lhs;
        }
    }
    out.push_back(make_check("boundary integral up to t >= v_min" + tag, at_lhs, target, -worst_int, tol,
                             "right side: int f* / (2 beta)"));
    return out;
}

// ---------------------------------------------------------------- counterexamples

namespace {

void fit_power(CounterexampleReport& rep, int m) {
    std::vector<double> x, g;
    for (std::size_t i = 0; i < rep.r.size(); ++i) {
        const double r = rep.r[i];
        rep.normalized.push_back(r > 0.0 ? rep.delta[i] / std::pow(r, m) : 0.0);
        if (r > 0.0) {
            x.push_back(std::pow(r, m));
            g.push_back(rep.normalized.back());
        }
    }
    if (x.empty()) throw InvalidInput("need at least one positive radius");
    double sxx = 0.0, sxd = 0.0;
    for (std::size_t i = 0; i < rep.r.size(); ++i) {
        if (rep.r[i] <= 0.0) continue;
        const double xm = std::pow(rep.r[i], m);
        sxx += xm * xm;
        sxd += xm * rep.delta[i];
    }
    rep.power_fit = sxd / sxx;

    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
        const std::size_t a = order[i], b = order[i + 1];
        rep.richardson.push_back((g[a] * x[b] - g[b] * x[a]) / (x[b] - x[a]));
    }

    if (x.size() == 1) {
        rep.estimate = g.front();
        return;
    }
    const double N = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / N;
    const double mg = std::accumulate(g.begin(), g.end(), 0.0) / N;
    double sxy = 0.0, sx2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (g[i] - mg);
        sx2 += (x[i] - mx) * (x[i] - mx);
    }
    const double d = sxy / sx2;
    rep.estimate = mg - d * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) ss += std::pow(g[i] - rep.estimate - d * x[i], 2);
    rep.fit_residual = std::sqrt(ss / N);

    std::vector<double> lr, ld;
    for (std::size_t i = 0; i < rep.r.size(); ++i)
        if (rep.r[i] > 0.0 && rep.delta[i] > 0.0) {
            lr.push_back(std::log(rep.r[i]));
            ld.push_back(std::log(rep.delta[i]));
        }
    if (lr.size() >= 2) {
        const double M = static_cast<double>(lr.size());
        const double ml = std::accumulate(lr.begin(), lr.end(), 0.0) / M;
        const double md = std::accumulate(ld.begin(), ld.end(), 0.0) / M;
        double a = 0.0, b = 0.0;
        for (std::size_t i = 0; i < lr.size(); ++i) {
            a += (lr[i] - ml) * (ld[i] - md);
            b += (lr[i] - ml) * (lr[i] - ml);
        }
        rep.slope = a / b;
    }
}

// u on W_1 (f = 1) and W_r0 (f = 0); v on the Wulff shape of the same total measure.
std::pair<std::vector<RadialSolution>, RadialSolution> two_component_case(const AnisotropicNorm& norm, double r0,
                                                                          double beta) {
    const int n = norm.dim();
    const double k = norm.wulff_volume();
    std::vector<WulffLoad> comps{{1.0, 1.0}};
    if (r0 > 0.0) comps.push_back({r0, 0.0});
    auto u = multi_wulff_solution(comps, norm, beta);
    const double total = k * (1.0 + std::pow(r0, n));
    const double Rs = std::pow(total / k, 1.0 / n);
    RadialSolution v(RadialProblem::on_wulff(norm, Rs, beta,
                                             r0 > 0.0 ? PiecewiseLinear::indicator(k, total)
                                                      : PiecewiseLinear::constant(1.0, total)));
    return {std::move(u), std::move(v)};
}

}  // namespace

CounterexampleReport counterexample_61(std::span<const double> radii, const AnisotropicNorm& norm, double beta) {
    if (norm.dim() != 2) throw InvalidInput("the L^inf counterexample is planar");
    CounterexampleReport rep;
    rep.n = 2;
    for (double r0 : radii) {
        if (!(r0 >= 0.0) || r0 >= 1.0) throw InvalidInput("radii must lie in [0, 1)");
        const auto [u, v] = two_component_case(norm, r0, beta);
        double umax = 0.0;
        for (const auto& part : u) umax = std::max(umax, part.v_max());
        rep.r.push_back(r0);
        rep.delta.push_back(umax - v.v_max());
    }
    fit_power(rep, 2);
    rep.pass = rep.estimate > 0.0;
    for (std::size_t i = 0; i < rep.r.size(); ++i)
        if (rep.r[i] > 0.0 && !(rep.delta[i] > 0.0)) rep.pass = false;
    return rep;
}

CounterexampleReport counterexample_62(std::span<const double> radii, const AnisotropicNorm& norm, double beta) {
    if (norm.dim() != 3) throw InvalidInput("the L^2 counterexample is three-dimensional");
    CounterexampleReport rep;
    rep.n = 3;
    for (double r0 : radii) {
        if (!(r0 >= 0.0) || r0 >= 1.0) throw InvalidInput("radii must lie in [0, 1)");
        const auto [u, v] = two_component_case(norm, r0, beta);
        rep.r.push_back(r0);
        rep.delta.push_back(lq_norm(u, 2.0) - v.lq_norm(2.0));
    }
    fit_power(rep, 3);
    rep.pass = rep.estimate > 0.0 && rep.slope >= 2.8 && rep.slope <= 3.2;
    return rep;
}

// ---------------------------------------------------------------- eigenvalues

BosselDanersResult bossel_daners_check(const ComparisonCase& c, int level, const Calibration& cal,
                                       const EigenOptions& opts) {
    MeshPtr mesh = refined(mesh_domain(c.domain), level);
    const double R = std::sqrt(mesh->area() / c.norm.wulff_volume());
    MeshPtr target = wulff_mesh(c.norm, R, c.domain.target_h, c.wulff_segments, level);
    BosselDanersResult r;
    r.lambda_domain = first_eigenpair(mesh, c.norm, c.beta, opts).lambda;
    r.lambda_wulff = first_eigenpair(target, c.norm, c.beta, opts).lambda;
    r.domain_is_wulff =
        c.domain.components.size() == 1 && std::holds_alternative<WulffComponent>(c.domain.components.front());
    const double h = mesh->max_edge_length();
    r.check = make_check("lambda_1(Omega) >= lambda_1(Omega*)", r.lambda_domain, r.lambda_wulff,
                         r.lambda_domain - r.lambda_wulff, cal.lorentz(h) * r.lambda_wulff,
                         r.domain_is_wulff ? "equality case: domain is a Wulff shape" : "");
    return r;
}

// ---------------------------------------------------------------- harness

ComparisonReport run_comparison(const ComparisonCase& c, bool with_eigen) {
    ComparisonReport rep;
    rep.name = c.name;
    const Calibration cal = calibrate(c, 0);
    rep.info = {{"C_tol pointwise", cal.pointwise.c},
                {"C_tol lorentz (relative)", cal.lorentz.c},
                {"equality case max |u* - v|", cal.equality_error},
                {"equality case max relative Lorentz gap", cal.equality_lorentz_error},
                {"calibration h", cal.h}};
    const bool unit = is_unit_load(c.f);

    double first_violation = 0.0, last_violation = 0.0;
    for (int level = 0; level <= c.refinement_levels; ++level) {
        const CaseSolution s = solve_case(c, level);
        const std::string prefix = "level " + std::to_string(level) + ": ";
        if (level == 0) {
            rep.info.emplace_back("connected components", s.components);
            rep.info.emplace_back("measure", s.measure);
            rep.info.emplace_back("Wulff radius R", s.R);
            if (s.fstar_l1_error > 0.0) rep.info.emplace_back("f* approximation L1 error", s.fstar_l1_error);
        }
        TableRow row{{"level", level}, {"h", s.h}, {"vertices", static_cast<double>(s.mesh->vertex_count())}};

        auto add = [&](std::vector<CheckRecord> checks) {
            for (auto& ch : checks) {
                ch.name = prefix + ch.name;
                rep.checks.push_back(std::move(ch));
            }
        };
        const auto um = check_umin_vmin(c, s, cal);
        row.emplace_back("u_min", um[0].lhs);
        row.emplace_back("v_min", um[0].rhs);
        row.emplace_back("flux residual", -um[1].margin);
        add(um);

        if (unit) {
            auto pw = check_pointwise_n2(c, s, cal);
            row.emplace_back("max(u* - v)", pw.max_violation);
            row.emplace_back("violation measure", pw.violation_measure);
            if (level == 0) first_violation = pw.violation_measure;
            last_violation = pw.violation_measure;
            add(std::move(pw.checks));
        }
        auto lz = check_lorentz_theorems(c, s, cal);
        double worst = std::numeric_limits<double>::infinity();
        for (const auto& ch : lz) worst = std::min(worst, ch.margin);
        row.emplace_back("min Lorentz margin", worst);
        add(std::move(lz));
        rep.table.push_back(std::move(row));
    }
    if (unit && c.refinement_levels > 0)
        rep.checks.push_back(make_check("violation measure does not grow under refinement", last_violation,
                                        first_violation, first_violation - last_violation, 1e-12));

    const double R = std::sqrt(domain_measure(c.domain) / c.norm.wulff_volume());
    const double S = c.norm.wulff_volume() * R * R;
    for (auto& ch : check_lemma_identities(c.norm, R, c.beta, PiecewiseLinear::constant(1.0, S))) {
        ch.name = "Wulff domain: " + ch.name;
        rep.checks.push_back(std::move(ch));
    }

    if (with_eigen) {
        for (int level : {0, c.refinement_levels}) {
            auto bd = bossel_daners_check(c, level, cal);
            bd.check.name = "level " + std::to_string(level) + ": " + bd.check.name;
            rep.checks.push_back(bd.check);
            if (c.refinement_levels == 0) break;
        }
    }
    return rep;
}

ComparisonReport explore_open_problems(std::span<const double> radii, std::span<const double> loads, double beta) {
    ComparisonReport rep;
    rep.name = "open problems (n = 3, two balls)";
    rep.notes.push_back("exploratory data only; nothing is asserted");
    rep.notes.push_back("l1_gap = |u|_1 - |v|_1 (positive would answer the L^1 question negatively)");
    rep.notes.push_back("pointwise_gap = max_s u*(s) - v*(s) (positive would break the pointwise comparison)");
    const auto norm = AnisotropicNorm::euclidean(3);
    const double k = norm.wulff_volume();
    for (double r0 : radii) {
        for (double load : loads) {
            std::vector<WulffLoad> comps{{1.0, 1.0}, {r0, load}};
            const auto u = multi_wulff_solution(comps, norm, beta);
            const double total = k * (1.0 + std::pow(r0, 3));
            const RadialSolution v(RadialProblem::on_wulff(
                norm, std::cbrt(total / k), beta,
                piecewise_constant_rearrangement({1.0, load}, {k, k * std::pow(r0, 3)})));
            const RearrangedFunction ustar(distribution_of_radial(u));
            double gap = -std::numeric_limits<double>::infinity();
            const int samples = 200;
            for (int i = 0; i <= samples; ++i) {
                const double s = total * i / samples;
                const double r = std::cbrt(s / k);
                gap = std::max(gap, ustar(s) - v.eval(std::min(r, v.R())));
            }
            rep.table.push_back({{"r0", r0},
                                 {"load on small ball", load},
                                 {"l1_gap", lq_norm(u, 1.0) - v.lq_norm(1.0)},
                                 {"l2_gap", lq_norm(u, 2.0) - v.lq_norm(2.0)},
                                 {"pointwise_gap", gap}});
        }
    }
    return rep;
}

}  // namespace talenti
