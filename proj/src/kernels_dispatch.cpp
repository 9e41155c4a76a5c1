#include "talenti/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace talenti::kernels {

namespace {

bool cpu_has_avx2() noexcept {
#if defined(TALENTI_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa initial_isa() noexcept {
    const bool have = cpu_has_avx2();
    if (const char* env = std::getenv("TALENTI_SIMD")) {
        const std::string v(env);
        if (v == "scalar") return Isa::scalar;
        if (v == "avx2") return have ? Isa::avx2 : Isa::scalar;
    }
    return have ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& current() noexcept {
    static std::atomic<Isa> isa{initial_isa()};
    return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool avx2_supported() noexcept { return cpu_has_avx2(); }

Isa active_isa() noexcept { return current().load(std::memory_order_relaxed); }

void set_isa(Isa isa) noexcept {
    if (isa == Isa::avx2 && !cpu_has_avx2()) isa = Isa::scalar;
    current().store(isa, std::memory_order_relaxed);
}

#if defined(TALENTI_HAVE_AVX2_TU)
#define TALENTI_DISPATCH(fn, ...) \
    return active_isa() == Isa::avx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__)
#else
#define TALENTI_DISPATCH(fn, ...) return scalar::fn(__VA_ARGS__)
#endif

void triangle_gradients(const TriangleSoA& tris, std::span<const double> values, std::span<double> grad_x,
                        std::span<double> grad_y) {
    TALENTI_DISPATCH(triangle_gradients, tris, values, grad_x, grad_y);
}

double quadratic_energy(std::span<const double> area, std::span<const double> grad_x, std::span<const double> grad_y,
                        double a11, double a12, double a22) {
    TALENTI_DISPATCH(quadratic_energy, area, grad_x, grad_y, a11, a12, a22);
}

double superlevel_area(const TriangleSoA& tris, std::span<const double> values, double t) {
    TALENTI_DISPATCH(superlevel_area, tris, values, t);
}

#undef TALENTI_DISPATCH

}  // namespace talenti::kernels
