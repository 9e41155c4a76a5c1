#pragma once

// Per-triangle inner loops over P1 data. Each kernel has a scalar reference
// implementation and an AVX2 variant; the dispatcher picks one at runtime from
// CPUID, overridable with TALENTI_SIMD=scalar|avx2|auto.

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace talenti::kernels {

/// Structure-of-arrays view of a triangulation: vertex indices, areas and the
/// constant gradients of the three P1 hat functions on each triangle.
struct TriangleSoA {
    std::vector<std::int32_t> v0, v1, v2;
    std::vector<double> area;
    std::vector<double> gx0, gx1, gx2;
    std::vector<double> gy0, gy1, gy2;

    std::size_t size() const noexcept { return area.size(); }
};

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa) noexcept;
bool avx2_supported() noexcept;
Isa active_isa() noexcept;
/// Pin the dispatcher (tests use this to compare variants). Requesting AVX2 on
/// a CPU without it falls back to scalar.
void set_isa(Isa isa) noexcept;

/// Per-triangle gradient of the P1 interpolant of `values`.
void triangle_gradients(const TriangleSoA& tris, std::span<const double> values, std::span<double> grad_x,
                        std::span<double> grad_y);

/// sum_T area_T * (a11 gx^2 + 2 a12 gx gy + a22 gy^2).
double quadratic_energy(std::span<const double> area, std::span<const double> grad_x, std::span<const double> grad_y,
                        double a11, double a12, double a22);

/// Exact measure of {u > t} for the P1 interpolant of `values`.
double superlevel_area(const TriangleSoA& tris, std::span<const double> values, double t);

namespace scalar {
void triangle_gradients(const TriangleSoA&, std::span<const double>, std::span<double>, std::span<double>);
double quadratic_energy(std::span<const double>, std::span<const double>, std::span<const double>, double, double,
                        double);
double superlevel_area(const TriangleSoA&, std::span<const double>, double);
/// Area of {u > t} inside one triangle with nodal values a, b, c.
double triangle_superlevel_area(double area, double a, double b, double c, double t);
}  // namespace scalar

namespace avx2 {
void triangle_gradients(const TriangleSoA&, std::span<const double>, std::span<double>, std::span<double>);
double quadratic_energy(std::span<const double>, std::span<const double>, std::span<const double>, double, double,
                        double);
double superlevel_area(const TriangleSoA&, std::span<const double>, double);
}  // namespace avx2

}  // namespace talenti::kernels
