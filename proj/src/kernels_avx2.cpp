#include "talenti/kernels.hpp"

#include <immintrin.h>

namespace talenti::kernels::avx2 {

namespace {

inline __m256d gather(const double* base, const std::int32_t* idx) {
    const __m128i i = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx));
    return _mm256_i32gather_pd(base, i, 8);
}

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

void triangle_gradients(const TriangleSoA& tris, std::span<const double> u, std::span<double> gx,
                        std::span<double> gy) {
    const std::size_t n = tris.size();
    const double* base = u.data();
    std::size_t t = 0;
    for (; t + 4 <= n; t += 4) {
        const __m256d a = gather(base, tris.v0.data() + t);
        const __m256d b = gather(base, tris.v1.data() + t);
        const __m256d c = gather(base, tris.v2.data() + t);
        __m256d x = _mm256_mul_pd(a, _mm256_loadu_pd(tris.gx0.data() + t));
        x = _mm256_fmadd_pd(b, _mm256_loadu_pd(tris.gx1.data() + t), x);
        x = _mm256_fmadd_pd(c, _mm256_loadu_pd(tris.gx2.data() + t), x);
        __m256d y = _mm256_mul_pd(a, _mm256_loadu_pd(tris.gy0.data() + t));
        y = _mm256_fmadd_pd(b, _mm256_loadu_pd(tris.gy1.data() + t), y);
        y = _mm256_fmadd_pd(c, _mm256_loadu_pd(tris.gy2.data() + t), y);
        _mm256_storeu_pd(gx.data() + t, x);
        _mm256_storeu_pd(gy.data() + t, y);
    }
    for (; t < n; ++t) {
        const double a = u[tris.v0[t]], b = u[tris.v1[t]], c = u[tris.v2[t]];
        gx[t] = a * tris.gx0[t] + b * tris.gx1[t] + c * tris.gx2[t];
        gy[t] = a * tris.gy0[t] + b * tris.gy1[t] + c * tris.gy2[t];
    }
}

double quadratic_energy(std::span<const double> area, std::span<const double> gx, std::span<const double> gy,
                        double a11, double a12, double a22) {
    const std::size_t n = area.size();
    const __m256d va11 = _mm256_set1_pd(a11), va12 = _mm256_set1_pd(2.0 * a12), va22 = _mm256_set1_pd(a22);
    __m256d acc = _mm256_setzero_pd();
    std::size_t t = 0;
    for (; t + 4 <= n; t += 4) {
        const __m256d x = _mm256_loadu_pd(gx.data() + t);
        const __m256d y = _mm256_loadu_pd(gy.data() + t);
        __m256d q = _mm256_mul_pd(_mm256_mul_pd(va11, x), x);
        q = _mm256_fmadd_pd(_mm256_mul_pd(va12, x), y, q);
        q = _mm256_fmadd_pd(_mm256_mul_pd(va22, y), y, q);
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(area.data() + t), q, acc);
    }
    double sum = hsum(acc);
    for (; t < n; ++t) {
        const double x = gx[t], y = gy[t];
        sum += area[t] * (a11 * x * x + 2.0 * a12 * x * y + a22 * y * y);
    }
    return sum;
}

double superlevel_area(const TriangleSoA& tris, std::span<const double> u, double t) {
    const std::size_t n = tris.size();
    const double* base = u.data();
    const __m256d vt = _mm256_set1_pd(t);
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d zero = _mm256_setzero_pd();
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d a = gather(base, tris.v0.data() + i);
        const __m256d b = gather(base, tris.v1.data() + i);
        const __m256d c = gather(base, tris.v2.data() + i);
        const __m256d area = _mm256_loadu_pd(tris.area.data() + i);
        const __m256d x = _mm256_min_pd(a, b), y = _mm256_max_pd(a, b);
        const __m256d lo = _mm256_min_pd(x, c), z = _mm256_max_pd(x, c);
        const __m256d mid = _mm256_min_pd(y, z), hi = _mm256_max_pd(y, z);

        const __m256d below_hi = _mm256_cmp_pd(vt, hi, _CMP_LT_OQ);
        const __m256d above_lo = _mm256_cmp_pd(vt, lo, _CMP_GT_OQ);
        const __m256d lower_part = _mm256_cmp_pd(vt, mid, _CMP_LT_OQ);

        // denominators are only used in lanes where they are positive; 1 elsewhere
        const __m256d span = _mm256_blendv_pd(one, _mm256_sub_pd(hi, lo), below_hi);
        const __m256d d_lo = _mm256_blendv_pd(one, _mm256_sub_pd(mid, lo), lower_part);
        const __m256d d_hi = _mm256_blendv_pd(_mm256_sub_pd(hi, mid), one, lower_part);

        const __m256d dl = _mm256_sub_pd(vt, lo);
        const __m256d f_lower = _mm256_sub_pd(one, _mm256_div_pd(_mm256_mul_pd(dl, dl), _mm256_mul_pd(d_lo, span)));
        const __m256d dh = _mm256_sub_pd(hi, vt);
        const __m256d f_upper = _mm256_div_pd(_mm256_mul_pd(dh, dh), _mm256_mul_pd(span, d_hi));

        __m256d frac = _mm256_blendv_pd(f_upper, f_lower, lower_part);
        frac = _mm256_blendv_pd(one, frac, above_lo);
        frac = _mm256_blendv_pd(zero, frac, below_hi);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(area, frac));
    }
    double sum = hsum(acc);
    for (; i < n; ++i)
        sum += scalar::triangle_superlevel_area(tris.area[i], u[tris.v0[i]], u[tris.v1[i]], u[tris.v2[i]], t);
    return sum;
}

}  // namespace talenti::kernels::avx2
