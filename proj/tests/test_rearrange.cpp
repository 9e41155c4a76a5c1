#include "doctest.h"

#include "talenti/error.hpp"
#include "talenti/rearrange.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

using namespace talenti;
using std::numbers::pi;

namespace {

Polygon regular_polygon(int n, double r = 1.0) {
    Polygon p;
    for (int i = 0; i < n; ++i) p.emplace_back(r * std::cos(2 * pi * i / n), r * std::sin(2 * pi * i / n));
    return p;
}

MeshPtr make_mesh(std::vector<DomainComponent> comps, double h) {
    return std::make_shared<const TriMesh>(mesh_domain({std::move(comps), h}));
}

MeshPtr square_mesh(double h) { return make_mesh({Polygon{{0, 0}, {1, 0}, {1, 1}, {0, 1}}}, h); }

ScalarField random_field(const MeshPtr& m, std::mt19937_64& rng, double shift = 0.0) {
    std::normal_distribution<double> g;
    Vec v(m->vertex_count());
    for (auto& x : v) x = g(rng) + shift;
    return ScalarField(m, v);
}

double factorial(int k) { return std::tgamma(k + 1.0); }

// int_T (sum_i v_i lambda_i)^p for integer p, from int_T l1^a l2^b l3^c = 2|T| a! b! c! / (a+b+c+2)!
double power_integral(const ScalarField& u, int p) {
    const auto& m = *u.mesh;
    double sum = 0.0;
    for (std::size_t t = 0; t < m.triangle_count(); ++t) {
        const auto& tri = m.triangles()[t];
        const double v[3] = {u.values[tri[0]], u.values[tri[1]], u.values[tri[2]]};
        double s = 0.0;
        for (int a = 0; a <= p; ++a)
            for (int b = 0; a + b <= p; ++b) {
                const int c = p - a - b;
                const double multinomial = factorial(p) / (factorial(a) * factorial(b) * factorial(c));
                s += multinomial * std::pow(v[0], a) * std::pow(v[1], b) * std::pow(v[2], c) * factorial(a) *
                     factorial(b) * factorial(c) / factorial(p + 2);
            }
        sum += 2.0 * m.triangle_area(t) * s;
    }
    return sum;
}

// |{u > t}| by sampling each triangle uniformly
double sampled_measure(const ScalarField& u, double t, int per_triangle, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U;
    const auto& m = *u.mesh;
    double sum = 0.0;
    for (std::size_t k = 0; k < m.triangle_count(); ++k) {
        const auto& tri = m.triangles()[k];
        int hits = 0;
        for (int i = 0; i < per_triangle; ++i) {
            double a = U(rng), b = U(rng);
            if (a + b > 1) a = 1 - a, b = 1 - b;
            const double val =
                (1 - a - b) * u.values[tri[0]] + a * u.values[tri[1]] + b * u.values[tri[2]];
            hits += val > t;
        }
        sum += m.triangle_area(k) * hits / per_triangle;
    }
    return sum;
}

}  // namespace

TEST_CASE("exact superlevel areas") {
    const auto mesh = square_mesh(0.1);
    const auto x = ScalarField::sample(mesh, [](const Vec2& p) { return p.x(); });
    CHECK(level_set_area(x, 0.5) == doctest::Approx(0.5).epsilon(1e-13));
    const auto xy = ScalarField::sample(mesh, [](const Vec2& p) { return p.x() + p.y(); });
    const auto mu = distribution_of_field(xy);
    for (double t : {-0.5, 0.0, 0.3, 0.99, 1.0, 1.37, 1.9, 2.0, 2.5}) {
        const double exact = t <= 0 ? 1.0 : t < 1 ? 1 - t * t / 2 : t < 2 ? (2 - t) * (2 - t) / 2 : 0.0;
        CHECK(level_set_area(xy, t) == doctest::Approx(exact).epsilon(1e-12));
        CHECK(mu(t) == doctest::Approx(exact).scale(1.0).epsilon(1e-12));
    }
}

TEST_CASE("distribution of a random field against sampling and clipping") {
    std::mt19937_64 rng(7);
    const auto mesh = square_mesh(0.2);
    const auto u = random_field(mesh, rng);
    const auto mu = distribution_of_field(u);
    CHECK(mu.total_measure() == doctest::Approx(1.0));
    CHECK(mu.ess_inf() == doctest::Approx(u.min()));
    CHECK(mu.ess_sup() == doctest::Approx(u.max()));
    std::uniform_real_distribution<double> level(u.min(), u.max());
    double prev_mu = 2.0;
    std::vector<double> ts;
    for (int i = 0; i < 40; ++i) ts.push_back(level(rng));
    std::sort(ts.begin(), ts.end());
    for (double t : ts) {
        CHECK(mu(t) == doctest::Approx(level_set_area(u, t)).scale(1.0).epsilon(1e-12));
        CHECK(mu(t) <= prev_mu);
        prev_mu = mu(t);
    }
    for (double t : {ts[5], ts[20], ts[35]})
        CHECK(mu(t) == doctest::Approx(sampled_measure(u, t, 4000, rng)).epsilon(0.01));
}

TEST_CASE("flat stretches are jumps of the distribution") {
    const auto mesh = make_mesh({regular_polygon(8, 1.0), WulffComponent{AnisotropicNorm::euclidean(2), {3.0, 0.0}, 0.5, 64}},
                                0.2);
    const auto u = ScalarField::per_component(mesh, {2.0, 1.0});
    const auto areas = mesh->component_areas();
    const auto mu = distribution_of_field(u);
    CHECK(mu(0.5) == doctest::Approx(areas[0] + areas[1]));
    CHECK(mu(1.0) == doctest::Approx(areas[0]));  // right-continuous
    CHECK(mu(1.5) == doctest::Approx(areas[0]));
    CHECK(mu(2.0) == 0.0);
    const auto fstar = decreasing_rearrangement(mu);
    CHECK(fstar(0.5 * areas[0]) == doctest::Approx(2.0));
    CHECK(fstar(areas[0] + 0.5 * areas[1]) == doctest::Approx(1.0));
}

TEST_CASE("generalized inverse and equimeasurability") {
    std::mt19937_64 rng(11);
    const auto mesh = square_mesh(0.15);
    const auto u = random_field(mesh, rng);
    const auto mu = distribution_of_field(u);
    const auto fstar = decreasing_rearrangement(mu);
    CHECK_THROWS_AS(fstar(1.5), DomainError);
    CHECK(fstar(0.0) == doctest::Approx(u.max()));
    std::uniform_real_distribution<double> level(u.min(), u.max());
    for (int i = 0; i < 200; ++i) {
        const double t = level(rng);
        const double s = mu(t);
        // f*(mu(t)) <= t < f*(s) for s < mu(t)
        CHECK(fstar(s) <= t + 1e-12);
        if (s > 1e-9) CHECK(fstar(s * (1 - 1e-9)) > t - 1e-9);
    }
    // non-increasing
    double prev = fstar(0.0);
    for (int i = 1; i <= 1000; ++i) {
        const double v = fstar(i / 1000.0);
        CHECK(v <= prev + 1e-14);
        prev = v;
    }
}

TEST_CASE("norms are preserved by rearrangement") {
    std::mt19937_64 rng(3);
    const auto mesh = square_mesh(0.1);
    const auto u = random_field(mesh, rng, 6.0);
    REQUIRE(u.min() > 0.0);
    const auto fstar = decreasing_rearrangement(distribution_of_field(u));
    CHECK(rearranged_power_integral(fstar, 1.0) == doctest::Approx(integral(u)).epsilon(1e-10));
    CHECK(rearranged_power_integral(fstar, 2.0) == doctest::Approx(power_integral(u, 2)).epsilon(1e-10));
    CHECK(rearranged_power_integral(fstar, 3.0) == doctest::Approx(power_integral(u, 3)).epsilon(1e-10));

    // signed field: the rearrangement of |u|
    const auto w = random_field(mesh, rng);
    const auto ones = ScalarField::constant(mesh, 1.0);
    const auto wstar = decreasing_rearrangement(distribution_of_abs(w));
    CHECK(wstar.total_measure() == doctest::Approx(1.0));
    CHECK(rearranged_power_integral(wstar, 1.0) == doctest::Approx(abs_product_integral(w, ones)).epsilon(1e-10));
    CHECK(rearranged_power_integral(wstar, 2.0) == doctest::Approx(power_integral(w, 2)).epsilon(1e-10));
}

TEST_CASE("convex symmetrization") {
    const auto norm = AnisotropicNorm::euclidean(2);
    const auto source = square_mesh(0.05);
    const double R = 1.0 / std::sqrt(pi);
    const auto target = make_mesh({WulffComponent{norm, {0.0, 0.0}, R, 256, true}}, 0.05);

    SUBCASE("a paraboloid on a Wulff shape is its own symmetrization") {
        const auto v = ScalarField::sample(target, [&](const Vec2& x) { return R * R - x.squaredNorm(); });
        const auto vs = convex_symmetrization(v, norm, target);
        CHECK((vs.values - v.values).cwiseAbs().maxCoeff() < 5e-3);
    }
    SUBCASE("round trip keeps the distribution and the norms") {
        const auto u = ScalarField::sample(source, [](const Vec2& x) { return std::sin(pi * x.x()) * x.y() + 0.2; });
        const auto us = convex_symmetrization(u, norm, target);
        const auto mu = distribution_of_field(u);
        const auto mus = distribution_of_field(us);
        for (double t : {0.25, 0.4, 0.6, 0.9}) CHECK(mus(t) == doctest::Approx(mu(t)).epsilon(0.02));
        CHECK(integral(us) == doctest::Approx(integral(u)).epsilon(5e-3));
        CHECK(l2_norm(us) == doctest::Approx(l2_norm(u)).epsilon(5e-3));
        CHECK(us.max() <= u.max() + 1e-12);
        // radially non-increasing
        for (std::size_t i = 0; i < target->vertex_count(); ++i)
            for (std::size_t j = i + 1; j < std::min(target->vertex_count(), i + 40); ++j)
                if (target->vertices()[i].norm() + 1e-12 < target->vertices()[j].norm())
                    CHECK(us.values[i] >= us.values[j] - 1e-12);
    }
    SUBCASE("indicator of a component becomes the indicator of a centered ball") {
        const auto two = make_mesh({Polygon{{0, 0}, {1, 0}, {1, 1}, {0, 1}}, Polygon{{2, 0}, {3, 0}, {3, 1}, {2, 1}}},
                                   0.1);
        const auto u = ScalarField::per_component(two, {1.0, 0.0});
        const auto big = make_mesh({WulffComponent{norm, {0.0, 0.0}, std::sqrt(2.0 / pi), 256, true}}, 0.05);
        const auto us = convex_symmetrization(u, norm, big);
        for (std::size_t i = 0; i < big->vertex_count(); ++i) {
            const double m = pi * big->vertices()[i].squaredNorm();
            if (m < 1.0 - 1e-9) CHECK(us.values[i] == 1.0);
            if (m > 1.0 + 1e-9) CHECK(us.values[i] == 0.0);
        }
    }
    SUBCASE("measure mismatch is rejected") {
        const auto small = make_mesh({WulffComponent{norm, {0.0, 0.0}, 0.5, 64, true}}, 0.1);
        const auto u = ScalarField::constant(source, 1.0);
        CHECK_THROWS_AS(convex_symmetrization(u, norm, small), InvalidInput);
    }
}

TEST_CASE("Lorentz quasi-norms") {
    // indicator of a unit-measure set: (p/q)^(1/q)
    const auto chi = DistributionFunction::step(1.0, 1.0);
    CHECK(lorentz_norm(chi, 0.5, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(lorentz_norm(chi, 2.0, 1.0) == doctest::Approx(2.0).epsilon(1e-12));
    // indicator of measure m at height c: c (p/q)^(1/q) m^(1/p)
    const auto chi3 = DistributionFunction::step(2.5, 3.0);
    CHECK(lorentz_norm(chi3, 1.5, 2.0) == doctest::Approx(2.5 * std::sqrt(0.75) * std::pow(3.0, 1 / 1.5)).epsilon(1e-12));

    std::mt19937_64 rng(5);
    const auto mesh = square_mesh(0.1);
    const auto u = random_field(mesh, rng, 6.0);
    const auto mu = distribution_of_field(u);
    for (int p : {1, 2, 3, 4})
        CHECK(lorentz_norm(mu, p, p) == doctest::Approx(std::pow(power_integral(u, p), 1.0 / p)).epsilon(1e-8));

    // homogeneity
    ScalarField u2(mesh, 2.5 * u.values);
    const auto mu2 = distribution_of_field(u2);
    for (auto [p, q] : {std::pair{0.5, 1.0}, {1.0, 2.0}, {3.0, 0.7}})
        CHECK(lorentz_norm(mu2, p, q) == doctest::Approx(2.5 * lorentz_norm(mu, p, q)).epsilon(1e-9));

    // signed field through |u|, q = p
    const auto w = random_field(mesh, rng);
    CHECK(lorentz_norm(distribution_of_abs(w), 2.0, 2.0) == doctest::Approx(std::sqrt(power_integral(w, 2))).epsilon(1e-8));
}

TEST_CASE("Hardy-Littlewood inequality on random pairs") {
    std::mt19937_64 rng(2024);
    const auto mesh = square_mesh(0.25);
    const auto M = mass_matrix(*mesh);
    double worst = 1e300;
    for (int i = 0; i < 100; ++i) {
        const auto f = random_field(mesh, rng, i % 2 ? 0.0 : 6.0);
        const auto g = random_field(mesh, rng, i % 3 ? 0.0 : 6.0);
        const auto r = hardy_littlewood_check(f, g);
        worst = std::min(worst, r.margin);
        CHECK(r.margin >= -1e-8);
        CHECK(r.margin == doctest::Approx(r.rhs - r.lhs));
        if (f.min() > 0 && g.min() > 0) CHECK(r.lhs == doctest::Approx(f.values.dot(M * g.values)).epsilon(1e-12));
    }
    MESSAGE("smallest Hardy-Littlewood margin " << worst);
    // equality for a field against itself
    const auto f = random_field(mesh, rng, 6.0);
    const auto r = hardy_littlewood_check(f, f);
    CHECK(r.margin == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
}

TEST_CASE("level-set perimeters") {
    const auto norm = AnisotropicNorm::euclidean(2);
    const auto disk = make_mesh({regular_polygon(512)}, 0.04);
    const auto u = ScalarField::sample(disk, [](const Vec2& x) { return 1.0 - x.squaredNorm(); });
    for (double t : {0.2, 0.5, 0.8}) {
        const auto P = levelset_perimeter_H(u, norm, t);
        CHECK(P.exterior == 0.0);
        CHECK(P.interior == doctest::Approx(2 * pi * std::sqrt(1 - t)).epsilon(2e-3));
    }
    // below the boundary values the whole boundary counts
    const auto below = levelset_perimeter_H(u, norm, -0.5);
    CHECK(below.interior == 0.0);
    CHECK(below.exterior == doctest::Approx(disk->boundary_length()));

    // anisotropic isoperimetric inequality for every superlevel set
    Eigen::Matrix2d A;
    A << 3, 1, 1, 1;
    const auto aniso = normalize_gauge(AnisotropicNorm::quadratic(A));
    const auto sq = square_mesh(0.05);
    const auto w = ScalarField::sample(sq, [](const Vec2& x) { return std::sin(pi * x.x()) * std::sin(pi * x.y()); });
    const double k = aniso.wulff_volume();
    for (double t : {0.1, 0.3, 0.6, 0.9}) {
        const auto P = levelset_perimeter_H(w, aniso, t);
        CHECK(P.total >= 2 * std::sqrt(k) * std::sqrt(level_set_area(w, t)) - 1e-12);
    }
    // a level equal to a nodal value is moved off it
    const auto P = levelset_perimeter_H(w, aniso, w.values[w.values.size() / 2]);
    CHECK(P.perturbed);
}

TEST_CASE("boundary trace integral") {
    const auto mesh = square_mesh(0.1);
    const auto c = ScalarField::constant(mesh, 2.0);
    CHECK(boundary_trace_integral(c, AnisotropicNorm::euclidean(2), 1.0) == doctest::Approx(2.0));
    CHECK(boundary_trace_integral(c, AnisotropicNorm::euclidean(2), 2.0) == 0.0);
    // H(nu) on the four axis-aligned sides
    Eigen::Matrix2d A;
    A << 4, 0, 0, 1;
    const auto aniso = AnisotropicNorm::quadratic(A);
    const double expected = 2 * aniso.value(Vec2(1.0, 0.0)) + 2 * aniso.value(Vec2(0.0, 1.0));
    CHECK(boundary_trace_integral(c, aniso, 0.0) == doctest::Approx(expected / 2.0));
}

TEST_CASE("distribution arithmetic and output") {
    const auto a = DistributionFunction::step(1.0, 2.0);
    const auto b = DistributionFunction::step(3.0, 0.5);
    const auto sum = a + b;
    CHECK(sum.total_measure() == 2.5);
    CHECK(sum.ess_inf() == 1.0);
    CHECK(sum.ess_sup() == 3.0);
    CHECK(sum(2.0) == 0.5);
    const auto fs = decreasing_rearrangement(sum);
    CHECK(fs(0.25) == doctest::Approx(3.0));
    CHECK(fs(1.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(DistributionFunction::piecewise_quadratic({0.0, 0.0}, {{}}, 1.0), InvalidInput);

    std::ostringstream d, r;
    write_distribution_csv(d, sum);
    write_rearrangement_csv(r, fs, 10);
    CHECK(d.str().rfind("t,mu\n", 0) == 0);
    CHECK(r.str().rfind("s,fstar\n", 0) == 0);
}
