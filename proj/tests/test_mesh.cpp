#include "doctest.h"

#include "talenti/error.hpp"
#include "talenti/mesh.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

using namespace talenti;
using std::numbers::pi;

namespace {

Polygon unit_square() { return {{0, 0}, {1, 0}, {1, 1}, {0, 1}}; }

Polygon regular_polygon(int n, double r = 1.0, Vec2 c = Vec2::Zero()) {
    Polygon p;
    for (int i = 0; i < n; ++i) p.push_back(c + r * Vec2(std::cos(2 * pi * i / n), std::sin(2 * pi * i / n)));
    return p;
}

double distance_to_polyline(const Vec2& p, const Polygon& poly) {
    double best = 1e300;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Vec2 a = poly[i], b = poly[(i + 1) % poly.size()];
        const double s = std::clamp((p - a).dot(b - a) / (b - a).squaredNorm(), 0.0, 1.0);
        best = std::min(best, (p - (a + s * (b - a))).norm());
    }
    return best;
}

void check_structure(const TriMesh& m) {
    for (const auto& e : m.boundary_edges()) {
        const auto& t = m.triangles()[e.triangle];
        const Vec2 centroid = (m.vertices()[t[0]] + m.vertices()[t[1]] + m.vertices()[t[2]]) / 3.0;
        const Vec2 mid = 0.5 * (m.vertices()[e.a] + m.vertices()[e.b]);
        CHECK(e.normal.dot(mid - centroid) > 0.0);
        CHECK(e.normal.norm() == doctest::Approx(1.0));
    }
    for (int chi : m.euler_characteristics()) CHECK(chi == 1);
}

}  // namespace

TEST_CASE("unit square") {
    const TriMesh m = mesh_domain({{unit_square()}, 0.1});
    CHECK(std::abs(m.area() - 1.0) <= 1e-12);
    CHECK(m.max_edge_length() <= 0.1);
    CHECK(m.component_count() == 1);
    CHECK(m.boundary_loops().size() == 1);
    CHECK(m.boundary_length() == doctest::Approx(4.0).epsilon(1e-14));
    check_structure(m);
    for (const auto& corner : unit_square()) {
        bool found = false;
        for (const auto& v : m.vertices()) found = found || (v - corner).norm() == 0.0;
        CHECK(found);
    }
    for (const auto& e : m.boundary_edges()) CHECK(distance_to_polyline(m.vertices()[e.a], unit_square()) <= 1e-15);
}

TEST_CASE("disk polygon area is preserved exactly") {
    const Polygon disk = regular_polygon(256);
    const TriMesh m = mesh_domain({{disk}, 0.05});
    CHECK(std::abs(m.area() - polygon_signed_area(disk)) <= 1e-12);
    CHECK(std::abs(m.boundary_enclosed_area() - polygon_signed_area(disk)) <= 1e-12);
    CHECK(m.max_edge_length() <= 0.05);
    check_structure(m);
    // quality: no sliver triangles from the cocircular boundary
    double worst = 1.0;
    for (std::size_t t = 0; t < m.triangle_count(); ++t) {
        const auto& tri = m.triangles()[t];
        double lmax = 0.0;
        for (int k = 0; k < 3; ++k) lmax = std::max(lmax, (m.vertices()[tri[k]] - m.vertices()[tri[(k + 1) % 3]]).norm());
        worst = std::min(worst, m.triangle_area(t) / (lmax * lmax));
    }
    CHECK(worst > 0.1);
}

TEST_CASE("non-convex polygon") {
    const Polygon L{{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}};
    const TriMesh m = mesh_domain({{L}, 0.15});
    CHECK(std::abs(m.area() - 3.0) <= 1e-12);
    CHECK(m.max_edge_length() <= 0.15);
    check_structure(m);
}

TEST_CASE("disjoint components") {
    const auto H = normalize_gauge(AnisotropicNorm::quadratic(Eigen::Vector2d(4, 1).asDiagonal()));
    DomainSpec spec;
    spec.components.push_back(WulffComponent{H, Vec2(0, 0), 1.0, 128, false});
    spec.components.push_back(WulffComponent{H, Vec2(3, 0), 0.5, 64, false});
    spec.target_h = 0.2;
    const TriMesh m = mesh_domain(spec);
    CHECK(m.component_count() == 2);
    const auto areas = m.component_areas();
    CHECK(areas[0] == doctest::Approx(polygon_signed_area(component_polygon(spec.components[0]))).epsilon(1e-12));
    CHECK(areas[1] == doctest::Approx(polygon_signed_area(component_polygon(spec.components[1]))).epsilon(1e-12));
    check_structure(m);

    spec.components[1] = WulffComponent{H, Vec2(0.5, 0), 0.5, 64, false};
    CHECK_THROWS_AS(mesh_domain(spec), InvalidGeometry);
    spec.components.pop_back();
    spec.target_h = 0.0;
    CHECK_THROWS_AS(mesh_domain(spec), InvalidInput);
}

TEST_CASE("refinement") {
    const TriMesh m0 = mesh_domain({{unit_square()}, 0.25});
    const TriMesh m1 = refine(m0);
    const TriMesh m2 = refine(m1);
    CHECK(m1.triangle_count() == 4 * m0.triangle_count());
    CHECK(m2.triangle_count() == 16 * m0.triangle_count());
    CHECK(std::abs(m2.area() - m0.area()) <= 1e-14);
    CHECK(m1.max_edge_length() == doctest::Approx(m0.max_edge_length() / 2).epsilon(1e-14));
    CHECK(m2.max_edge_length() == doctest::Approx(m0.max_edge_length() / 4).epsilon(1e-14));
    CHECK(m2.boundary_loops().size() == 1);
    for (const auto& e : m2.boundary_edges()) CHECK(distance_to_polyline(m2.vertices()[e.a], unit_square()) <= 1e-15);
    check_structure(m2);
}

TEST_CASE("mesh file round trip and validation") {
    const TriMesh m = mesh_domain({{regular_polygon(32)}, 0.3});
    std::stringstream ss;
    write_mesh(ss, m);
    const TriMesh back = read_mesh(ss);
    CHECK(back.vertex_count() == m.vertex_count());
    CHECK(back.triangles() == m.triangles());
    for (std::size_t i = 0; i < m.vertex_count(); ++i) CHECK(back.vertices()[i] == m.vertices()[i]);

    std::stringstream clockwise("# comment\n3 1\n0 0\n0 1\n1 0\n0 1 2\n");
    CHECK_THROWS_AS(read_mesh(clockwise), InvalidGeometry);
    std::stringstream truncated("4 2\n0 0\n1 0\n1 1\n0 1\n0 1 2\n");
    CHECK_THROWS_AS(read_mesh(truncated), InvalidInput);
    std::stringstream dangling("4 1\n0 0\n1 0\n1 1\n5 5\n0 1 2\n");
    CHECK_THROWS_AS(read_mesh(dangling), InvalidGeometry);
    std::stringstream ok("4 2\n0 0\n1 0\n1 1\n0 1\n0 1 2\n0 2 3\n");
    CHECK(read_mesh(ok).area() == doctest::Approx(1.0));
}
