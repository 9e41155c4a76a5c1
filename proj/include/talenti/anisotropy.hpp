#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace talenti {

using Vec = Eigen::VectorXd;
using Vec2 = Eigen::Vector2d;

enum class GaugeKind { euclidean, quadratic, weighted_p };

/// A smooth, absolutely 1-homogeneous convex gauge H on R^n (n = 2 or 3),
/// stored as a raw family member times a positive scale s.
///
/// The polar H° and the ellipticity bounds gamma|x| <= H(x) <= delta|x| are
/// derived from the family parameters, never supplied by the caller.
class AnisotropicNorm {
public:
    static AnisotropicNorm euclidean(int dim);
    /// H(xi) = sqrt(xi^T A xi); A must be symmetric positive definite.
    static AnisotropicNorm quadratic(const Eigen::MatrixXd& A);
    /// H(xi) = (sum_i w_i |xi_i|^p)^(1/p), 2 <= p < inf, w_i > 0.
    static AnisotropicNorm weighted_p(double p, std::vector<double> weights);

    GaugeKind kind() const noexcept { return kind_; }
    int dim() const noexcept { return dim_; }
    double scale() const noexcept { return scale_; }
    double gamma() const noexcept { return gamma_; }
    double delta() const noexcept { return delta_; }
    double p() const noexcept { return p_; }
    const Eigen::MatrixXd& matrix() const noexcept { return A_; }
    const std::vector<double>& weights() const noexcept { return w_; }

    /// Same gauge with a different multiplicative scale.
    AnisotropicNorm with_scale(double s) const;

    double value(std::span<const double> xi) const;
    double value(const Vec& xi) const { return value(std::span<const double>(xi.data(), xi.size())); }
    double value(const Vec2& xi) const;

    /// H_xi(xi). Throws SingularPoint at xi = 0.
    Vec gradient(const Vec& xi) const;
    Vec2 gradient(const Vec2& xi) const;

    double polar(std::span<const double> x) const;
    double polar(const Vec& x) const { return polar(std::span<const double>(x.data(), x.size())); }
    double polar(const Vec2& x) const;

    Vec polar_gradient(const Vec& x) const;
    Vec2 polar_gradient(const Vec2& x) const;

    /// H(xi) H_xi(xi) = grad(H^2 / 2); continuous, zero at the origin.
    Vec2 flux(const Vec2& xi) const;

    /// Hessian of H^2 / 2. At the origin, where it is undefined, the surrogate
    /// ((gamma^2 + delta^2) / 2) I is returned.
    Eigen::Matrix2d half_hessian_sq(const Vec2& xi) const;

    /// Measure of K = {H <= 1}; closed form for every supported family.
    double gauge_volume() const;
    /// Measure of the Wulff shape {H° < 1}, i.e. k_n.
    double wulff_volume() const;

private:
    AnisotropicNorm() = default;
    void compute_bounds();

    GaugeKind kind_ = GaugeKind::euclidean;
    int dim_ = 2;
    double scale_ = 1.0;
    double gamma_ = 1.0;
    double delta_ = 1.0;
    double p_ = 2.0;
    Eigen::MatrixXd A_;
    Eigen::MatrixXd A_inv_;
    std::vector<double> w_;
    std::vector<double> w_dual_;  ///< weights of the polar weighted-q norm
    double raw_gauge_volume_ = 0.0;
    double raw_wulff_volume_ = 0.0;
};

/// Measure of the unit ball in R^n.
double unit_ball_volume(int n);

/// Rescale so that |{H <= 1}| equals the unit-ball measure.
AnisotropicNorm normalize_gauge(const AnisotropicNorm& norm);

struct WulffShape {
    AnisotropicNorm norm;
    Vec center;
    double radius = 1.0;
    double kappa = 0.0;  ///< |{H° < 1}| of `norm`

    WulffShape(AnisotropicNorm norm, Vec center, double radius);

    double volume() const;
    bool contains(const Vec& x) const;

    /// Boundary polygon through points with H°(x - center) = radius at equally
    /// spaced Euclidean angles. With match_area the polygon is scaled about the
    /// center so its area equals volume() exactly (n = 2 only).
    std::vector<Vec2> boundary_polygon(int segments, bool match_area = false) const;

    /// P_H of the exact shape by quadrature along the parametrized boundary.
    double perimeter() const;
};

using Polygon = std::vector<Vec2>;

double polygon_signed_area(std::span<const Vec2> polygon);
/// Throws InvalidGeometry if the polygon is degenerate or self-intersecting.
void validate_simple_polygon(std::span<const Vec2> polygon);

/// Anisotropic perimeter of a simple counterclockwise polygon: sum |e| H(nu_e).
double perimeter_H(const AnisotropicNorm& norm, std::span<const Vec2> polygon);

struct IsoperimetricReport {
    double lhs = 0.0;     ///< P_H(E)
    double rhs = 0.0;     ///< n k_n^(1/n) |E|^(1 - 1/n)
    double margin = 0.0;  ///< lhs - rhs
};

IsoperimetricReport check_isoperimetric(const AnisotropicNorm& norm, std::span<const Vec2> polygon);

struct IdentityCheck {
    std::string name;
    double worst = 0.0;  ///< largest violation over the samples
    double tolerance = 0.0;
    bool pass = false;
};

/// Homogeneity, Euler identity, polar duality, ellipticity bounds, analytic
/// vs finite-difference gradients on random directions, and the volume of
/// {H <= 1} after normalization.
std::vector<IdentityCheck> anisotropy_identities(const AnisotropicNorm& norm, int samples, std::uint64_t seed);

}  // namespace talenti
