#include "talenti/kernels.hpp"

#include <algorithm>

namespace talenti::kernels::scalar {

void triangle_gradients(const TriangleSoA& tris, std::span<const double> u, std::span<double> gx,
                        std::span<double> gy) {
    const std::size_t n = tris.size();
    for (std::size_t t = 0; t < n; ++t) {
        const double a = u[tris.v0[t]], b = u[tris.v1[t]], c = u[tris.v2[t]];
        gx[t] = a * tris.gx0[t] + b * tris.gx1[t] + c * tris.gx2[t];
        gy[t] = a * tris.gy0[t] + b * tris.gy1[t] + c * tris.gy2[t];
    }
}

double quadratic_energy(std::span<const double> area, std::span<const double> gx, std::span<const double> gy,
                        double a11, double a12, double a22) {
    double sum = 0.0;
    for (std::size_t t = 0; t < area.size(); ++t) {
        const double x = gx[t], y = gy[t];
        sum += area[t] * (a11 * x * x + 2.0 * a12 * x * y + a22 * y * y);
    }
    return sum;
}

double triangle_superlevel_area(double area, double a, double b, double c, double t) {
    // same comparison network as the vector path so both agree bit for bit per triangle
    const double x = std::min(a, b), y = std::max(a, b);
    const double lo = std::min(x, c), z = std::max(x, c);
    const double mid = std::min(y, z), hi = std::max(y, z);
    if (t >= hi) return 0.0;
    if (t <= lo) return area;
    const double span = hi - lo;
    if (t < mid) {
        const double d = t - lo;
        return area * (1.0 - d * d / ((mid - lo) * span));
    }
    const double d = hi - t;
    return area * (d * d / (span * (hi - mid)));
}

double superlevel_area(const TriangleSoA& tris, std::span<const double> u, double t) {
    double sum = 0.0;
    for (std::size_t i = 0; i < tris.size(); ++i)
        sum += triangle_superlevel_area(tris.area[i], u[tris.v0[i]], u[tris.v1[i]], u[tris.v2[i]], t);
    return sum;
}

}  // namespace talenti::kernels::scalar
