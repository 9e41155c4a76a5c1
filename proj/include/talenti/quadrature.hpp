#pragma once

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <limits>

namespace talenti::quad {

/// Adaptive Gauss-Kronrod on a finite interval.
template <class F>
double integrate(F&& f, double a, double b, double rel_tol = 1e-13, unsigned max_depth = 18) {
    if (a == b) return 0.0;
    double err = 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        std::forward<F>(f), a, b, max_depth, rel_tol, &err);
}

/// Fixed 20-point Gauss-Legendre, for short stretches of a smooth integrand.
template <class F>
double gauss20(F&& f, double a, double b) {
    if (a == b) return 0.0;
    return boost::math::quadrature::gauss<double, 20>::integrate(std::forward<F>(f), a, b);
}

/// 20-point Gauss-Legendre after s = a + (b - a)(3x^2 - 2x^3): exact enough for
/// integrands that behave like sqrt(s - a) or sqrt(b - s) at the ends.
template <class F>
double gauss20_endpoints(F&& f, double a, double b) {
    if (a == b) return 0.0;
    const double L = b - a;
    return boost::math::quadrature::gauss<double, 20>::integrate(
        [&](double x) { return f(a + L * x * x * (3.0 - 2.0 * x)) * 6.0 * L * x * (1.0 - x); }, 0.0, 1.0);
}

/// Tanh-sinh; tolerant of integrable endpoint singularities.
template <class F>
double integrate_singular(F&& f, double a, double b, double rel_tol = 1e-12) {
    if (a == b) return 0.0;
    static thread_local boost::math::quadrature::tanh_sinh<double> integrator;
    return integrator.integrate(std::forward<F>(f), a, b, rel_tol);
}

}  // namespace talenti::quad
