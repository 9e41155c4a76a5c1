#include "talenti/fem.hpp"

#include "talenti/error.hpp"
#include "talenti/kernels.hpp"

#include <spdlog/spdlog.h>

#include <Eigen/SparseCholesky>

#include <cmath>
#include <deque>
#include <istream>
#include <ostream>
#include <sstream>

namespace talenti {

ScalarField::ScalarField(MeshPtr m, Vec v) : mesh(std::move(m)), values(std::move(v)) {
    if (!mesh) throw InvalidInput("field without a mesh");
    if (values.size() != static_cast<Eigen::Index>(mesh->vertex_count()))
        throw InvalidInput("field has " + std::to_string(values.size()) + " values for " +
                           std::to_string(mesh->vertex_count()) + " vertices");
    if (!values.allFinite()) throw InvalidInput("field has non-finite values");
}

ScalarField ScalarField::constant(MeshPtr m, double c) {
    const auto n = static_cast<Eigen::Index>(m->vertex_count());
    return ScalarField(std::move(m), Vec::Constant(n, c));
}

ScalarField ScalarField::sample(MeshPtr m, const std::function<double(const Vec2&)>& f) {
    Vec v(m->vertex_count());
    for (std::size_t i = 0; i < m->vertex_count(); ++i) v[i] = f(m->vertices()[i]);
    return ScalarField(std::move(m), std::move(v));
}

ScalarField ScalarField::per_component(MeshPtr m, const std::vector<double>& constants) {
    if (static_cast<int>(constants.size()) != m->component_count())
        throw InvalidInput("need one constant per connected component");
    Vec v(m->vertex_count());
    for (std::size_t i = 0; i < m->vertex_count(); ++i) v[i] = constants[m->vertex_components()[i]];
    return ScalarField(std::move(m), std::move(v));
}

void require_same_mesh(const ScalarField& a, const ScalarField& b) {
    if (a.mesh != b.mesh) throw InvalidInput("fields live on different meshes");
}

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

SparseMatrix from_triplets(std::size_t n, const Triplets& trip) {
    SparseMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    m.setFromTriplets(trip.begin(), trip.end());
    return m;
}

std::array<Vec2, 3> hat_gradients(const kernels::TriangleSoA& s, std::size_t t) {
    return {Vec2(s.gx0[t], s.gy0[t]), Vec2(s.gx1[t], s.gy1[t]), Vec2(s.gx2[t], s.gy2[t])};
}

bool is_quadratic(const AnisotropicNorm& norm) { return norm.kind() != GaugeKind::weighted_p; }

Eigen::Matrix2d quadratic_form(const AnisotropicNorm& norm) { return norm.half_hessian_sq(Vec2(1.0, 0.0)); }

Vec load_vector(const ScalarField& f) { return mass_matrix(*f.mesh) * f.values; }

double gradient_term(const TriMesh& mesh, const Vec& w, const AnisotropicNorm& norm) {
    const auto& soa = mesh.soa();
    std::vector<double> gx(soa.size()), gy(soa.size());
    kernels::triangle_gradients(soa, std::span<const double>(w.data(), w.size()), gx, gy);
    if (is_quadratic(norm)) {
        const Eigen::Matrix2d G = quadratic_form(norm);
        return kernels::quadratic_energy(soa.area, gx, gy, G(0, 0), G(0, 1), G(1, 1));
    }
    double sum = 0.0;
    for (std::size_t t = 0; t < soa.size(); ++t) {
        const double h = norm.value(Vec2(gx[t], gy[t]));
        sum += soa.area[t] * h * h;
    }
    return sum;
}

// gradient of 1/2 int H^2(grad w) + beta/2 int H(nu) w^2 (no load)
Vec operator_gradient(const TriMesh& mesh, const Vec& w, const AnisotropicNorm& norm, const SparseMatrix& B,
                      double beta) {
    const auto& soa = mesh.soa();
    Vec g = beta * (B * w);
    std::vector<double> gx(soa.size()), gy(soa.size());
    kernels::triangle_gradients(soa, std::span<const double>(w.data(), w.size()), gx, gy);
    for (std::size_t t = 0; t < soa.size(); ++t) {
        const Vec2 flux = norm.flux(Vec2(gx[t], gy[t]));
        const double a = soa.area[t];
        g[soa.v0[t]] += a * (flux.x() * soa.gx0[t] + flux.y() * soa.gy0[t]);
        g[soa.v1[t]] += a * (flux.x() * soa.gx1[t] + flux.y() * soa.gy1[t]);
        g[soa.v2[t]] += a * (flux.x() * soa.gx2[t] + flux.y() * soa.gy2[t]);
    }
    return g;
}

SparseMatrix newton_hessian(const TriMesh& mesh, const Vec& w, const AnisotropicNorm& norm, const SparseMatrix& B,
                            double beta, double eps) {
    const auto& soa = mesh.soa();
    Triplets trip;
    trip.reserve(9 * soa.size());
    std::vector<double> gx(soa.size()), gy(soa.size());
    kernels::triangle_gradients(soa, std::span<const double>(w.data(), w.size()), gx, gy);
    for (std::size_t t = 0; t < soa.size(); ++t) {
        const Vec2 xi(gx[t], gy[t]);
        Eigen::Matrix2d Hs = norm.half_hessian_sq(xi);
        if (xi.norm() < 1e-12) Hs += eps * Eigen::Matrix2d::Identity();
        const auto grads = hat_gradients(soa, t);
        const int idx[3] = {soa.v0[t], soa.v1[t], soa.v2[t]};
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                trip.emplace_back(idx[a], idx[b], soa.area[t] * grads[a].dot(Hs * grads[b]));
    }
    return from_triplets(mesh.vertex_count(), trip) + beta * B;
}

}  // namespace

SparseMatrix mass_matrix(const TriMesh& mesh) {
    const auto& soa = mesh.soa();
    Triplets trip;
    trip.reserve(9 * soa.size());
    for (std::size_t t = 0; t < soa.size(); ++t) {
        const int idx[3] = {soa.v0[t], soa.v1[t], soa.v2[t]};
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) trip.emplace_back(idx[a], idx[b], soa.area[t] * (a == b ? 2.0 : 1.0) / 12.0);
    }
    return from_triplets(mesh.vertex_count(), trip);
}

SparseMatrix stiffness_matrix(const TriMesh& mesh, const Eigen::Matrix2d& G) {
    const auto& soa = mesh.soa();
    Triplets trip;
    trip.reserve(9 * soa.size());
    for (std::size_t t = 0; t < soa.size(); ++t) {
        const auto grads = hat_gradients(soa, t);
        const int idx[3] = {soa.v0[t], soa.v1[t], soa.v2[t]};
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) trip.emplace_back(idx[a], idx[b], soa.area[t] * grads[a].dot(G * grads[b]));
    }
    return from_triplets(mesh.vertex_count(), trip);
}

SparseMatrix robin_matrix(const TriMesh& mesh, const AnisotropicNorm& norm) {
    Triplets trip;
    trip.reserve(4 * mesh.boundary_edges().size());
    for (const auto& e : mesh.boundary_edges()) {
        const double c = norm.value(e.normal) * e.length / 6.0;
        trip.emplace_back(e.a, e.a, 2.0 * c);
        trip.emplace_back(e.b, e.b, 2.0 * c);
        trip.emplace_back(e.a, e.b, c);
        trip.emplace_back(e.b, e.a, c);
    }
    return from_triplets(mesh.vertex_count(), trip);
}

double integral(const ScalarField& u) {
    const auto& soa = u.mesh->soa();
    double s = 0.0;
    for (std::size_t t = 0; t < soa.size(); ++t)
        s += soa.area[t] * (u.values[soa.v0[t]] + u.values[soa.v1[t]] + u.values[soa.v2[t]]) / 3.0;
    return s;
}

double boundary_integral_H(const ScalarField& u, const AnisotropicNorm& norm) {
    double s = 0.0;
    for (const auto& e : u.mesh->boundary_edges())
        s += norm.value(e.normal) * e.length * 0.5 * (u.values[e.a] + u.values[e.b]);
    return s;
}

double l2_norm(const ScalarField& u) { return std::sqrt(u.values.dot(mass_matrix(*u.mesh) * u.values)); }

std::vector<Vec2> gradients(const ScalarField& u) {
    const auto& soa = u.mesh->soa();
    std::vector<double> gx(soa.size()), gy(soa.size());
    kernels::triangle_gradients(soa, std::span<const double>(u.values.data(), u.values.size()), gx, gy);
    std::vector<Vec2> out(soa.size());
    for (std::size_t t = 0; t < soa.size(); ++t) out[t] = Vec2(gx[t], gy[t]);
    return out;
}

double energy(const ScalarField& w, const ScalarField& f, const AnisotropicNorm& norm, double beta) {
    require_same_mesh(w, f);
    const TriMesh& mesh = *w.mesh;
    double boundary = 0.0;
    for (const auto& e : mesh.boundary_edges()) {
        const double a = w.values[e.a], b = w.values[e.b];
        boundary += norm.value(e.normal) * e.length * (a * a + a * b + b * b) / 3.0;
    }
    return 0.5 * gradient_term(mesh, w.values, norm) + 0.5 * beta * boundary - load_vector(f).dot(w.values);
}

ScalarField energy_gradient(const ScalarField& w, const ScalarField& f, const AnisotropicNorm& norm, double beta) {
    require_same_mesh(w, f);
    const TriMesh& mesh = *w.mesh;
    Vec g = operator_gradient(mesh, w.values, norm, robin_matrix(mesh, norm), beta) - load_vector(f);
    return ScalarField(w.mesh, std::move(g));
}

double weak_residual(const ScalarField& u, const ScalarField& f, const AnisotropicNorm& norm, double beta,
                     const ScalarField& test) {
    require_same_mesh(u, test);
    // the P1 weak form is linear in the test function's nodal values
    return energy_gradient(u, f, norm, beta).values.dot(test.values);
}

namespace {

struct Problem {
    const TriMesh& mesh;
    const AnisotropicNorm& norm;
    double beta;
    SparseMatrix B;
    Vec load;

    double energy(const Vec& w) const {
        return 0.5 * gradient_term(mesh, w, norm) + 0.5 * beta * w.dot(B * w) - load.dot(w);
    }
    Vec gradient(const Vec& w) const { return operator_gradient(mesh, w, norm, B, beta) - load; }
};

// Armijo backtracking. Near the minimum energy differences drop below
// rounding, so a step that keeps E within rounding and shrinks |g| is also accepted.
bool line_search(const Problem& P, Vec& w, double& E, Vec& g, const Vec& d) {
    const double slope = g.dot(d);
    if (!(slope < 0.0)) return false;
    const double gn = g.norm();
    double t = 1.0;
    for (int k = 0; k < 60; ++k, t *= 0.5) {
        const Vec trial = w + t * d;
        const double Et = P.energy(trial);
        const double slack = 64.0 * std::numeric_limits<double>::epsilon() * (std::abs(E) + std::abs(Et));
        if (Et <= E + 1e-4 * t * slope) {
            w = trial, E = Et, g = P.gradient(w);
            return true;
        }
        if (Et <= E + slack) {
            Vec gt = P.gradient(trial);
            if (gt.norm() < gn) {
                w = trial, E = Et, g = std::move(gt);
                return true;
            }
        }
    }
    return false;
}

SolveResult run_lbfgs(const Problem& P, Vec w, const SolveOptions& opts, double stop, SolveResult res) {
    constexpr int memory = 12;
    std::deque<Vec> S, Y;
    double E = P.energy(w);
    Vec g = P.gradient(w);
    res.method += res.method.empty() ? "lbfgs" : "+lbfgs";
    for (int it = 0; it < 50 * opts.max_iters; ++it) {
        if (g.norm() <= stop) {
            res.u = ScalarField(res.u.mesh, std::move(w));
            res.gradient_norm = g.norm();
            return res;
        }
        Vec q = g;
        std::vector<double> alpha(S.size());
        for (int i = static_cast<int>(S.size()) - 1; i >= 0; --i) {
            alpha[i] = S[i].dot(q) / Y[i].dot(S[i]);
            q -= alpha[i] * Y[i];
        }
        if (!S.empty()) q *= S.back().dot(Y.back()) / Y.back().squaredNorm();
        for (std::size_t i = 0; i < S.size(); ++i) q += S[i] * (alpha[i] - Y[i].dot(q) / Y[i].dot(S[i]));
        Vec d = -q;
        const Vec w_old = w, g_old = g;
        if (!line_search(P, w, E, g, d)) {
            S.clear(), Y.clear();
            if (!line_search(P, w, E, g, -g)) break;
        }
        ++res.iterations;
        res.energy_history.push_back(E);
        Vec s = w - w_old, y = g - g_old;
        if (s.dot(y) > 1e-300) {
            S.push_back(std::move(s)), Y.push_back(std::move(y));
            if (S.size() > memory) S.pop_front(), Y.pop_front();
        }
    }
    throw ConvergenceError("solve_robin: L-BFGS did not reach the gradient tolerance", g.norm());
}

}  // namespace

SolveResult solve_robin(const ScalarField& f, const AnisotropicNorm& norm, const SolveOptions& opts) {
    if (!(opts.beta > 0.0) || !std::isfinite(opts.beta)) throw InvalidInput("beta must be positive");
    if (norm.dim() != 2) throw InvalidInput("the FEM solver is two-dimensional");
    if (!opts.allow_signed_load && f.values.minCoeff() < 0.0)
        throw InvalidInput("load f has negative entries (set allow_signed_load for testing)");
    const TriMesh& mesh = *f.mesh;
    Problem P{mesh, norm, opts.beta, robin_matrix(mesh, norm), load_vector(f)};
    const double stop = opts.grad_tol * (1.0 + P.load.norm());

    SolveResult res{ScalarField::constant(f.mesh, 0.0), "", 0, 0.0, P.load.norm(), {}};
    SolveMethod method = opts.method;
    if (method == SolveMethod::automatic) method = is_quadratic(norm) ? SolveMethod::direct : SolveMethod::newton;

    if (method == SolveMethod::direct) {
        if (!is_quadratic(norm)) throw InvalidInput("direct solve needs a quadratic gauge");
        const SparseMatrix K = stiffness_matrix(mesh, quadratic_form(norm)) + opts.beta * P.B;
        Eigen::SimplicialLDLT<SparseMatrix> ldlt(K);
        if (ldlt.info() != Eigen::Success) throw ConvergenceError("solve_robin: factorization failed", P.load.norm());
        Vec u = ldlt.solve(P.load);
        res.energy_history = {0.0, P.energy(u)};
        res.gradient_norm = P.gradient(u).norm();
        res.method = "direct";
        res.iterations = 1;
        res.u = ScalarField(f.mesh, std::move(u));
        return res;
    }

    Vec w;
    if (opts.initial_guess) {
        if (opts.initial_guess->size() != P.load.size()) throw InvalidInput("initial guess has the wrong size");
        w = *opts.initial_guess;
    } else {
        // quadratic surrogate with the mean ellipticity constant
        const double c = 0.25 * (norm.gamma() + norm.delta()) * (norm.gamma() + norm.delta());
        const SparseMatrix K = stiffness_matrix(mesh, c * Eigen::Matrix2d::Identity()) + opts.beta * P.B;
        Eigen::SimplicialLDLT<SparseMatrix> ldlt(K);
        w = ldlt.solve(P.load);
    }
    if (method == SolveMethod::lbfgs) return run_lbfgs(P, std::move(w), opts, stop, std::move(res));

    res.method = "newton";
    double E = P.energy(w);
    Vec g = P.gradient(w);
    res.energy_history.push_back(E);
    for (int it = 0; it < opts.max_iters; ++it) {
        if (g.norm() <= stop) {
            res.gradient_norm = g.norm();
            res.u = ScalarField(f.mesh, std::move(w));
            return res;
        }
        const SparseMatrix Hn = newton_hessian(mesh, w, norm, P.B, opts.beta, opts.regularization_eps);
        Eigen::SimplicialLDLT<SparseMatrix> ldlt(Hn);
        Vec d;
        bool ok = ldlt.info() == Eigen::Success;
        if (ok) {
            d = -ldlt.solve(g);
            ok = d.allFinite() && g.dot(d) < 0.0;
        }
        if (!ok || !line_search(P, w, E, g, d)) {
            spdlog::debug("solve_robin: Newton stalled at |g| = {:.3e}, switching to L-BFGS", g.norm());
            res.energy_history.pop_back();
            return run_lbfgs(P, std::move(w), opts, stop, std::move(res));
        }
        ++res.iterations;
        res.energy_history.push_back(E);
        spdlog::trace("newton it {} E = {:.16e} |g| = {:.3e}", it, E, g.norm());
    }
    if (g.norm() <= stop) {
        res.gradient_norm = g.norm();
        res.u = ScalarField(f.mesh, std::move(w));
        return res;
    }
    throw ConvergenceError("solve_robin: Newton did not converge within max_iters", g.norm());
}

double rayleigh_quotient(const ScalarField& u, const AnisotropicNorm& norm, double beta) {
    const TriMesh& mesh = *u.mesh;
    const double num = gradient_term(mesh, u.values, norm) + beta * u.values.dot(robin_matrix(mesh, norm) * u.values);
    const double den = u.values.dot(mass_matrix(mesh) * u.values);
    if (!(den > 0.0)) throw InvalidInput("Rayleigh quotient of the zero function");
    return num / den;
}

Eigenpair first_eigenpair(MeshPtr mesh, const AnisotropicNorm& norm, double beta, const EigenOptions& opts) {
    if (!(beta > 0.0)) throw InvalidInput("beta must be positive");
    const SparseMatrix M = mass_matrix(*mesh);
    Vec x = Vec::Ones(mesh->vertex_count());
    x /= std::sqrt(x.dot(M * x));
    double lambda = 0.0, prev = std::numeric_limits<double>::infinity();
    int it = 0;

    if (is_quadratic(norm)) {
        const SparseMatrix K = stiffness_matrix(*mesh, quadratic_form(norm)) + beta * robin_matrix(*mesh, norm);
        Eigen::SimplicialLDLT<SparseMatrix> ldlt(K);
        if (ldlt.info() != Eigen::Success) throw ConvergenceError("first_eigenpair: factorization failed", 0.0);
        for (; it < opts.max_iters; ++it) {
            Vec y = ldlt.solve(M * x);
            y /= std::sqrt(y.dot(M * y));
            lambda = y.dot(K * y);
            const double change = std::abs(lambda - prev);
            x = std::move(y);
            prev = lambda;
            if (change <= opts.tol * lambda) break;
        }
    } else {
        // inverse iteration for the 1-homogeneous operator: solve A(y) = M x
        SolveOptions so;
        so.beta = beta;
        so.grad_tol = std::min(1e-10, opts.tol);
        for (; it < opts.max_iters; ++it) {
            ScalarField rhs(mesh, x);
            so.initial_guess = x / std::max(lambda, 1e-12);
            if (it == 0) so.initial_guess.reset();
            Vec y = solve_robin(rhs, norm, so).u.values;
            y /= std::sqrt(y.dot(M * y));
            lambda = rayleigh_quotient(ScalarField(mesh, y), norm, beta);
            const double change = std::abs(lambda - prev);
            x = std::move(y);
            prev = lambda;
            if (change <= 10.0 * opts.tol * lambda) break;
        }
    }
    if (it >= opts.max_iters) throw ConvergenceError("first_eigenpair: inverse iteration did not converge", lambda);
    if (x.sum() < 0.0) x = -x;
    ScalarField u(mesh, std::move(x));
    return {rayleigh_quotient(u, norm, beta), std::move(u), it + 1};
}

void write_field(std::ostream& out, const ScalarField& u) {
    std::ostringstream buf;
    buf.precision(17);
    buf << u.values.size() << '\n';
    for (Eigen::Index i = 0; i < u.values.size(); ++i) buf << u.values[i] << '\n';
    out << buf.str();
}

Vec read_field(std::istream& in) {
    long long n = -1;
    if (!(in >> n) || n < 0) throw InvalidInput("field file must start with the value count");
    Vec v(n);
    for (long long i = 0; i < n; ++i)
        if (!(in >> v[i])) throw InvalidInput("field file truncated");
    return v;
}

void write_field_csv(std::ostream& out, const ScalarField& u) {
    std::ostringstream buf;
    buf.precision(17);
    buf << "x,y,u\n";
    for (std::size_t i = 0; i < u.mesh->vertex_count(); ++i)
        buf << u.mesh->vertices()[i].x() << ',' << u.mesh->vertices()[i].y() << ',' << u.values[i] << '\n';
    out << buf.str();
}

}  // namespace talenti
