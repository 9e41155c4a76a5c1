#include "doctest.h"

#include "talenti/kernels.hpp"
#include "talenti/mesh.hpp"

#include <cmath>
#include <random>

using namespace talenti;
namespace k = talenti::kernels;

namespace {

TriMesh test_mesh() {
    Polygon p;
    for (int i = 0; i < 37; ++i) p.emplace_back(std::cos(0.17 * i) * (1 + 0.2 * std::sin(3.0 * 0.17 * i)), std::sin(0.17 * i));
    return mesh_domain({{p}, 0.07});
}

}  // namespace

TEST_CASE("scalar and AVX2 kernels agree") {
    if (!k::avx2_supported()) {
        MESSAGE("AVX2 not available on this CPU; only the scalar path is exercised");
        return;
    }
    const TriMesh m = test_mesh();
    // odd triangle count so the remainder loop runs too
    k::TriangleSoA soa = m.soa();
    if (soa.size() % 4 == 0) {
        for (auto* v : {&soa.v0, &soa.v1, &soa.v2}) v->pop_back();
        for (auto* v : {&soa.area, &soa.gx0, &soa.gx1, &soa.gx2, &soa.gy0, &soa.gy1, &soa.gy2}) v->pop_back();
    }
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    std::vector<double> u(m.vertex_count());
    for (int rep = 0; rep < 20; ++rep) {
        for (auto& x : u) x = g(rng);
        if (rep == 1)
            for (auto& x : u) x = std::round(x);  // many ties
        std::vector<double> gx1(soa.size()), gy1(soa.size()), gx2(soa.size()), gy2(soa.size());
        k::scalar::triangle_gradients(soa, u, gx1, gy1);
        k::avx2::triangle_gradients(soa, u, gx2, gy2);
        for (std::size_t t = 0; t < soa.size(); ++t) {
            CHECK(gx2[t] == doctest::Approx(gx1[t]).epsilon(1e-12).scale(1.0));
            CHECK(gy2[t] == doctest::Approx(gy1[t]).epsilon(1e-12).scale(1.0));
        }
        const double e1 = k::scalar::quadratic_energy(soa.area, gx1, gy1, 2.0, 0.3, 1.0);
        const double e2 = k::avx2::quadratic_energy(soa.area, gx1, gy1, 2.0, 0.3, 1.0);
        CHECK(e2 == doctest::Approx(e1).epsilon(1e-13));
        for (double t : {-3.0, -0.5, 0.0, 0.25, 1.0, 2.0, 9.0}) {
            const double a1 = k::scalar::superlevel_area(soa, u, t);
            const double a2 = k::avx2::superlevel_area(soa, u, t);
            CHECK(std::abs(a1 - a2) <= 1e-13 * m.area());
        }
    }
}

TEST_CASE("dispatcher honours the requested ISA") {
    const auto before = k::active_isa();
    k::set_isa(k::Isa::scalar);
    CHECK(k::active_isa() == k::Isa::scalar);
    k::set_isa(k::Isa::avx2);
    CHECK(k::active_isa() == (k::avx2_supported() ? k::Isa::avx2 : k::Isa::scalar));
    k::set_isa(before);
}

TEST_CASE("superlevel area of a single triangle") {
    // triangle (0,0),(1,0),(0,1) with u = x: {x > t} has area (1-t)^2/2
    for (double t : {0.0, 0.1, 0.5, 0.9}) CHECK(k::scalar::triangle_superlevel_area(0.5, 0, 1, 0, t) == doctest::Approx(0.5 * (1 - t) * (1 - t)));
    // u = x + y: {x + y > t} has area (1 - t^2)/2
    for (double t : {0.2, 0.7}) CHECK(k::scalar::triangle_superlevel_area(0.5, 0, 1, 1, t) == doctest::Approx(0.5 * (1 - t * t)));
    CHECK(k::scalar::triangle_superlevel_area(0.5, 2, 2, 2, 2.0) == 0.0);
    CHECK(k::scalar::triangle_superlevel_area(0.5, 2, 2, 2, 1.999) == 0.5);
    CHECK(k::scalar::triangle_superlevel_area(0.5, 0, 1, 1, 1.0) == 0.0);
}
