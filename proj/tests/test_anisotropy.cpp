#include "doctest.h"

#include "talenti/anisotropy.hpp"
#include "talenti/error.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace talenti;
using std::numbers::pi;

namespace {

std::vector<AnisotropicNorm> families2() {
    Eigen::Matrix2d A;
    A << 4, 1, 1, 2;
    return {AnisotropicNorm::euclidean(2), AnisotropicNorm::quadratic(A),
            AnisotropicNorm::weighted_p(4.0, {1.0, 2.0}), AnisotropicNorm::weighted_p(2.5, {0.5, 1.0}),
            AnisotropicNorm::weighted_p(3.0, {1.0, 1.0})};
}

std::vector<AnisotropicNorm> families3() {
    Eigen::Matrix3d A;
    A << 3, 0.5, 0, 0.5, 2, 0.2, 0, 0.2, 1;
    return {AnisotropicNorm::euclidean(3), AnisotropicNorm::quadratic(A),
            AnisotropicNorm::weighted_p(3.0, {1.0, 2.0, 0.5})};
}

// sup over a fine angular grid, refined locally around the best direction
double brute_polar(const AnisotropicNorm& H, const Vec2& x) {
    const int n = 20000;
    double best = 0.0, best_t = 0.0;
    for (int i = 0; i < n; ++i) {
        const double t = 2 * pi * i / n;
        const Vec2 xi(std::cos(t), std::sin(t));
        const double q = x.dot(xi) / H.value(xi);
        if (q > best) best = q, best_t = t;
    }
    for (int i = -2000; i <= 2000; ++i) {
        const double t = best_t + i * (2 * pi / n) / 1000.0;
        const Vec2 xi(std::cos(t), std::sin(t));
        best = std::max(best, x.dot(xi) / H.value(xi));
    }
    return best;
}

// area of {H <= 1} as a star-shaped polygon through 1/H(direction)
double sublevel_polygon_area(const AnisotropicNorm& H, int n) {
    double twice = 0.0;
    Vec2 prev;
    for (int i = 0; i <= n; ++i) {
        const double t = 2 * pi * i / n;
        const Vec2 d(std::cos(t), std::sin(t));
        const Vec2 p = d / H.value(d);
        if (i > 0) twice += prev.x() * p.y() - prev.y() * p.x();
        prev = p;
    }
    return 0.5 * twice;
}

}  // namespace

TEST_CASE("evaluation examples") {
    const auto E = AnisotropicNorm::euclidean(2);
    CHECK(E.value(Vec2(3, 4)) == doctest::Approx(5.0));
    CHECK(E.gradient(Vec2(3, 4)).isApprox(Vec2(0.6, 0.8)));
    CHECK(E.polar(Vec2(3, 4)) == doctest::Approx(5.0));

    const auto Q = AnisotropicNorm::quadratic(Eigen::Vector2d(4, 1).asDiagonal());
    CHECK(Q.value(Vec2(1, 0)) == doctest::Approx(2.0));
    CHECK(Q.gradient(Vec2(1, 0)).isApprox(Vec2(2, 0)));
    CHECK(Q.polar(Vec2(1, 0)) == doctest::Approx(0.5));
    CHECK(brute_polar(Q, Vec2(1, 0)) == doctest::Approx(0.5).epsilon(1e-9));

    for (const auto& H : families2()) {
        CHECK(H.value(Vec2(0, 0)) == 0.0);
        CHECK_THROWS_AS(H.gradient(Vec2(0, 0)), SingularPoint);
        CHECK_THROWS_AS(H.value(Vec2(NAN, 1)), InvalidInput);
        CHECK_THROWS_AS(H.polar(Vec2(1, INFINITY)), InvalidInput);
        CHECK(H.gradient(Vec2(2, -1)).isApprox(H.gradient(Vec2(4, -2))));
    }
}

TEST_CASE("non-smooth gauges are rejected") {
    CHECK_THROWS_AS(AnisotropicNorm::weighted_p(1.0, {1, 1}), UnsupportedGauge);
    CHECK_THROWS_AS(AnisotropicNorm::weighted_p(1.5, {1, 1}), UnsupportedGauge);
    CHECK_THROWS_AS(AnisotropicNorm::weighted_p(INFINITY, {1, 1}), UnsupportedGauge);
    CHECK_THROWS_AS(AnisotropicNorm::weighted_p(2.0, {1, -1}), InvalidInput);
    CHECK_THROWS_AS(AnisotropicNorm::quadratic(Eigen::Vector2d(1, -1).asDiagonal()), InvalidInput);
}

TEST_CASE("identities on random samples") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    for (const auto& raw : families2()) {
        const auto H = normalize_gauge(raw);
        for (int k = 0; k < 1000; ++k) {
            const Vec2 xi(g(rng), g(rng));
            const double h = H.value(xi);
            CHECK(std::abs(H.gradient(xi).dot(xi) - h) <= 1e-10 * h);
            CHECK(H.value(Vec2(-2.5 * xi)) == doctest::Approx(2.5 * h).epsilon(1e-13));
            CHECK(h >= H.gamma() * xi.norm() * (1 - 1e-12));
            CHECK(h <= H.delta() * xi.norm() * (1 + 1e-12));
            CHECK(H.polar(H.gradient(xi)) == doctest::Approx(1.0).epsilon(1e-8));
            CHECK(H.value(H.polar_gradient(xi)) == doctest::Approx(1.0).epsilon(1e-8));
            const double step = 1e-5 * xi.norm();
            Vec2 fd;
            for (int i = 0; i < 2; ++i) {
                Vec2 e = Vec2::Zero();
                e[i] = step;
                fd[i] = (H.value(Vec2(xi + e)) - H.value(Vec2(xi - e))) / (2 * step);
            }
            CHECK((fd - H.gradient(xi)).norm() <= 1e-6 * H.gradient(xi).norm());
        }
    }
    for (const auto& raw : families3()) {
        const auto H = normalize_gauge(raw);
        for (int k = 0; k < 200; ++k) {
            Vec xi(3);
            xi << g(rng), g(rng), g(rng);
            const double h = H.value(xi);
            CHECK(std::abs(H.gradient(xi).dot(xi) - h) <= 1e-10 * h);
            CHECK(H.polar(H.gradient(xi)) == doctest::Approx(1.0).epsilon(1e-8));
            CHECK(H.value(H.polar_gradient(xi)) == doctest::Approx(1.0).epsilon(1e-8));
        }
    }
}

TEST_CASE("polar matches the brute-force support function and bi-polar recovers H") {
    for (const auto& H : families2()) {
        for (double t : {0.3, 1.7, 2.9, 4.4}) {
            const Vec2 x(std::cos(t) * 1.3, std::sin(t) * 1.3);
            CHECK(H.polar(x) == doctest::Approx(brute_polar(H, x)).epsilon(1e-8));
            double best = 0.0;
            for (int i = 0; i < 20000; ++i) {
                const double s = 2 * pi * i / 20000;
                const Vec2 xi(std::cos(s), std::sin(s));
                best = std::max(best, x.dot(xi) / H.polar(xi));
            }
            CHECK(best == doctest::Approx(H.value(x)).epsilon(1e-4));
        }
    }
}

TEST_CASE("normalization against an independent polygonal area") {
    const auto Q = AnisotropicNorm::quadratic(Eigen::Vector2d(4, 1).asDiagonal());
    CHECK(sublevel_polygon_area(Q, 200000) == doctest::Approx(pi / 2).epsilon(1e-9));
    const auto Qn = normalize_gauge(Q);
    CHECK(Qn.scale() == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-9));
    CHECK(Qn.wulff_volume() == doctest::Approx(pi).epsilon(1e-9));
    CHECK(normalize_gauge(AnisotropicNorm::euclidean(2)).scale() == doctest::Approx(1.0).epsilon(1e-12));
    for (const auto& raw : families2()) {
        const auto H = normalize_gauge(raw);
        CHECK(std::abs(sublevel_polygon_area(H, 200000) - pi) <= 1e-6);
        CHECK(std::abs(H.gauge_volume() - pi) <= 1e-9);
    }
    // 3D: quadratic volume is 4pi/3 / sqrt(det A)
    Eigen::Matrix3d A = Eigen::Vector3d(4, 1, 1).asDiagonal();
    CHECK(AnisotropicNorm::quadratic(A).gauge_volume() == doctest::Approx(4 * pi / 3 / 2).epsilon(1e-8));
    for (const auto& raw : families3())
        CHECK(normalize_gauge(raw).gauge_volume() == doctest::Approx(4 * pi / 3).epsilon(1e-8));
}

TEST_CASE("Wulff shapes") {
    for (const auto& raw : families2()) {
        const auto H = normalize_gauge(raw);
        Vec c(2);
        c << 0.3, -0.2;
        const WulffShape W(H, c, 1.5);
        CHECK(W.volume() == doctest::Approx(W.kappa * 2.25));
        const auto poly = W.boundary_polygon(4096);
        CHECK(polygon_signed_area(poly) == doctest::Approx(W.volume()).epsilon(1e-5));
        const auto matched = W.boundary_polygon(256, true);
        CHECK(polygon_signed_area(matched) == doctest::Approx(W.volume()).epsilon(1e-13));
        for (const auto& p : poly) {
            Vec2 d = p - Vec2(0.3, -0.2);
            CHECK(H.polar(d) == doctest::Approx(1.5).epsilon(1e-12));
        }
        CHECK(W.contains(c));
        // equality case of the isoperimetric inequality
        CHECK(perimeter_H(H, poly) == doctest::Approx(2 * W.kappa * 1.5).epsilon(1e-3));
        CHECK(W.perimeter() == doctest::Approx(2 * W.kappa * 1.5).epsilon(1e-9));
    }
}

TEST_CASE("perimeter and isoperimetric inequality") {
    const auto E = AnisotropicNorm::euclidean(2);
    const Polygon square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    CHECK(perimeter_H(E, square) == doctest::Approx(4.0));
    const auto rep = check_isoperimetric(E, square);
    CHECK(rep.margin == doctest::Approx(4 - 2 * std::sqrt(pi)).epsilon(1e-12));

    Polygon circle;
    for (int i = 0; i < 1024; ++i) circle.emplace_back(std::cos(2 * pi * i / 1024), std::sin(2 * pi * i / 1024));
    CHECK(std::abs(perimeter_H(E, circle) - 2 * pi) < 1e-4);

    const auto H = normalize_gauge(AnisotropicNorm::quadratic(Eigen::Vector2d(4, 1).asDiagonal()));
    Vec c = Vec::Zero(2);
    double prev = 1e9;
    for (int segs : {16, 64, 256, 1024}) {
        const double m = check_isoperimetric(H, WulffShape(H, c, 1.0).boundary_polygon(segs)).margin;
        CHECK(m >= -1e-12);
        CHECK(m < prev);
        prev = m;
    }
    CHECK(prev < 1e-4);

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(0, 2 * pi), R(0.2, 2.0);
    for (const auto& norm : families2()) {
        const auto Hn = normalize_gauge(norm);
        for (int k = 0; k < 100; ++k) {
            std::vector<double> ang(3 + k % 10);
            for (auto& a : ang) a = U(rng);
            std::sort(ang.begin(), ang.end());
            const double r = R(rng);
            Polygon poly;
            for (double a : ang) poly.emplace_back(r * std::cos(a) * 1.7, r * std::sin(a));
            if (std::abs(polygon_signed_area(poly)) < 1e-6) continue;
            CHECK(check_isoperimetric(Hn, poly).margin >= -1e-9);
        }
    }

    const Polygon bowtie{{0, 0}, {1, 1}, {1, 0}, {0, 1}};
    CHECK_THROWS_AS(perimeter_H(E, bowtie), InvalidGeometry);
    const Polygon flat{{0, 0}, {1, 0}, {2, 0}};
    CHECK_THROWS_AS(perimeter_H(E, flat), InvalidGeometry);
}
