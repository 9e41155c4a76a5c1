#include "talenti/anisotropy.hpp"

#include "talenti/error.hpp"
#include "talenti/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <numbers>
#include <unordered_map>

namespace talenti {

namespace {

constexpr double pi = std::numbers::pi;

void require_finite(std::span<const double> x, const char* what) {
    for (double c : x) {
        if (!std::isfinite(c)) throw InvalidInput(std::string(what) + ": non-finite component");
    }
}

void require_dim(std::span<const double> x, int dim) {
    if (static_cast<int>(x.size()) != dim) throw InvalidInput("vector dimension does not match the norm");
}

// (sum_i w_i |x_i|^p)^(1/p), scaled by max |x_i| against overflow.
double weighted_lp(std::span<const double> x, std::span<const double> w, double p) {
    double m = 0.0;
    for (double c : x) m = std::max(m, std::abs(c));
    if (m == 0.0) return 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) sum += w[i] * std::pow(std::abs(x[i]) / m, p);
    return m * std::pow(sum, 1.0 / p);
}

// |{sum_i w_i |x_i|^p <= 1}| in R^n.
double weighted_ball_volume(double p, std::span<const double> w) {
    const double n = static_cast<double>(w.size());
    double v = std::pow(2.0 * std::tgamma(1.0 + 1.0 / p), n) / std::tgamma(1.0 + n / p);
    for (double wi : w) v *= std::pow(wi, -1.0 / p);
    return v;
}

}  // namespace

double unit_ball_volume(int n) {
    return std::pow(pi, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
}

AnisotropicNorm AnisotropicNorm::euclidean(int dim) {
    if (dim < 2 || dim > 3) throw InvalidInput("dimension must be 2 or 3");
    AnisotropicNorm h;
    h.kind_ = GaugeKind::euclidean;
    h.dim_ = dim;
    h.compute_bounds();
    return h;
}

AnisotropicNorm AnisotropicNorm::quadratic(const Eigen::MatrixXd& A) {
    const auto n = A.rows();
    if (n != A.cols() || n < 2 || n > 3) throw InvalidInput("quadratic gauge needs a square 2x2 or 3x3 matrix");
    if (!A.allFinite()) throw InvalidInput("quadratic gauge: non-finite matrix entry");
    if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-12 * A.cwiseAbs().maxCoeff())
        throw InvalidInput("quadratic gauge: matrix is not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(A);
    if (eig.eigenvalues().minCoeff() <= 0.0) throw InvalidInput("quadratic gauge: matrix is not positive definite");
    AnisotropicNorm h;
    h.kind_ = GaugeKind::quadratic;
    h.dim_ = static_cast<int>(n);
    h.A_ = 0.5 * (A + A.transpose());
    h.A_inv_ = h.A_.inverse();
    h.compute_bounds();
    return h;
}

AnisotropicNorm AnisotropicNorm::weighted_p(double p, std::vector<double> weights) {
    // |t|^p is C^2 only for p >= 2; below that the gauge has unbounded curvature on the axes
    if (!std::isfinite(p) || p < 2.0)
        throw UnsupportedGauge("weighted-p gauge requires 2 <= p < inf; other p are not smooth (C^2) away from 0");
    if (weights.size() < 2 || weights.size() > 3) throw InvalidInput("weighted-p gauge needs 2 or 3 weights");
    for (double w : weights) {
        if (!std::isfinite(w) || w <= 0.0) throw InvalidInput("weighted-p gauge: weights must be positive");
    }
    AnisotropicNorm h;
    h.kind_ = GaugeKind::weighted_p;
    h.dim_ = static_cast<int>(weights.size());
    h.p_ = p;
    h.w_ = std::move(weights);
    const double q = p / (p - 1.0);
    for (double w : h.w_) h.w_dual_.push_back(std::pow(w, -q / p));
    h.compute_bounds();
    return h;
}

void AnisotropicNorm::compute_bounds() {
    double lo = 1.0, hi = 1.0;
    switch (kind_) {
    case GaugeKind::euclidean:
        break;
    case GaugeKind::quadratic: {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(A_);
        lo = std::sqrt(eig.eigenvalues().minCoeff());
        hi = std::sqrt(eig.eigenvalues().maxCoeff());
        break;
    }
    case GaugeKind::weighted_p: {
        // Extremes of (sum w_i y_i^(p/2))^(1/p) over the simplex sum y_i = 1:
        // the vertices, and the interior stationary point (convex or concave in y).
        lo = hi = std::pow(w_[0], 1.0 / p_);
        for (double w : w_) {
            lo = std::min(lo, std::pow(w, 1.0 / p_));
            hi = std::max(hi, std::pow(w, 1.0 / p_));
        }
        if (p_ != 2.0) {
            double sum = 0.0;
            for (double w : w_) sum += std::pow(w, -2.0 / (p_ - 2.0));
            const double interior = std::pow(sum, -(p_ - 2.0) / (2.0 * p_));
            lo = std::min(lo, interior);
            hi = std::max(hi, interior);
        }
        break;
    }
    }
    gamma_ = scale_ * lo;
    delta_ = scale_ * hi;

    const double ball = unit_ball_volume(dim_);
    switch (kind_) {
    case GaugeKind::euclidean:
        raw_gauge_volume_ = raw_wulff_volume_ = ball;
        break;
    case GaugeKind::quadratic: {
        const double root_det = std::sqrt(A_.determinant());
        raw_gauge_volume_ = ball / root_det;
        raw_wulff_volume_ = ball * root_det;
        break;
    }
    case GaugeKind::weighted_p:
        raw_gauge_volume_ = weighted_ball_volume(p_, w_);
        raw_wulff_volume_ = weighted_ball_volume(p_ / (p_ - 1.0), w_dual_);
        break;
    }
}

AnisotropicNorm AnisotropicNorm::with_scale(double s) const {
    if (!std::isfinite(s) || s <= 0.0) throw InvalidInput("gauge scale must be positive");
    AnisotropicNorm h = *this;
    h.scale_ = s;
    h.compute_bounds();
    return h;
}

double AnisotropicNorm::value(std::span<const double> xi) const {
    require_dim(xi, dim_);
    require_finite(xi, "eval_H");
    switch (kind_) {
    case GaugeKind::euclidean: {
        double s = 0.0;
        for (double c : xi) s += c * c;
        return scale_ * std::sqrt(s);
    }
    case GaugeKind::quadratic: {
        Eigen::Map<const Vec> x(xi.data(), dim_);
        return scale_ * std::sqrt(std::max(0.0, x.dot(A_ * x)));
    }
    case GaugeKind::weighted_p:
        return scale_ * weighted_lp(xi, w_, p_);
    }
    return 0.0;
}

double AnisotropicNorm::value(const Vec2& xi) const {
    if (dim_ != 2) throw InvalidInput("vector dimension does not match the norm");
    switch (kind_) {
    case GaugeKind::euclidean:
        if (!xi.allFinite()) throw InvalidInput("eval_H: non-finite component");
        return scale_ * std::hypot(xi.x(), xi.y());
    case GaugeKind::quadratic: {
        if (!xi.allFinite()) throw InvalidInput("eval_H: non-finite component");
        const double q = A_(0, 0) * xi.x() * xi.x() + 2.0 * A_(0, 1) * xi.x() * xi.y() + A_(1, 1) * xi.y() * xi.y();
        return scale_ * std::sqrt(std::max(0.0, q));
    }
    case GaugeKind::weighted_p:
        return value(std::span<const double>(xi.data(), 2));
    }
    return 0.0;
}

Vec AnisotropicNorm::gradient(const Vec& xi) const {
    require_dim(std::span<const double>(xi.data(), xi.size()), dim_);
    require_finite(std::span<const double>(xi.data(), xi.size()), "grad_H");
    if (xi.cwiseAbs().maxCoeff() == 0.0) throw SingularPoint("grad_H: H is not differentiable at the origin");
    switch (kind_) {
    case GaugeKind::euclidean:
        return scale_ * xi / xi.norm();
    case GaugeKind::quadratic: {
        const Vec Ax = A_ * xi;
        return scale_ * Ax / std::sqrt(xi.dot(Ax));
    }
    case GaugeKind::weighted_p: {
        const double m = xi.cwiseAbs().maxCoeff();
        double sum = 0.0;
        for (int i = 0; i < dim_; ++i) sum += w_[i] * std::pow(std::abs(xi[i]) / m, p_);
        const double factor = std::pow(sum, 1.0 / p_ - 1.0);
        Vec g(dim_);
        for (int i = 0; i < dim_; ++i) {
            const double y = xi[i] / m;
            g[i] = scale_ * factor * w_[i] * std::pow(std::abs(y), p_ - 1.0) * (y < 0 ? -1.0 : 1.0);
        }
        return g;
    }
    }
    return Vec::Zero(dim_);
}

Vec2 AnisotropicNorm::gradient(const Vec2& xi) const {
    if (dim_ != 2) throw InvalidInput("vector dimension does not match the norm");
    if (kind_ == GaugeKind::quadratic) {
        if (!xi.allFinite()) throw InvalidInput("grad_H: non-finite component");
        if (xi.x() == 0.0 && xi.y() == 0.0) throw SingularPoint("grad_H: H is not differentiable at the origin");
        const Vec2 Ax(A_(0, 0) * xi.x() + A_(0, 1) * xi.y(), A_(1, 0) * xi.x() + A_(1, 1) * xi.y());
        return scale_ * Ax / std::sqrt(xi.dot(Ax));
    }
    return gradient(Vec(xi));
}

double AnisotropicNorm::polar(std::span<const double> x) const {
    require_dim(x, dim_);
    require_finite(x, "eval_polar");
    switch (kind_) {
    case GaugeKind::euclidean: {
        double s = 0.0;
        for (double c : x) s += c * c;
        return std::sqrt(s) / scale_;
    }
    case GaugeKind::quadratic: {
        Eigen::Map<const Vec> v(x.data(), dim_);
        return std::sqrt(std::max(0.0, v.dot(A_inv_ * v))) / scale_;
    }
    case GaugeKind::weighted_p: {
        // Dual weighted-q norm, 1/p + 1/q = 1, weights w_i^(-q/p).
        return weighted_lp(x, w_dual_, p_ / (p_ - 1.0)) / scale_;
    }
    }
    return 0.0;
}

double AnisotropicNorm::polar(const Vec2& x) const {
    if (dim_ != 2) throw InvalidInput("vector dimension does not match the norm");
    if (kind_ == GaugeKind::quadratic) {
        if (!x.allFinite()) throw InvalidInput("eval_polar: non-finite component");
        const double q = A_inv_(0, 0) * x.x() * x.x() + 2.0 * A_inv_(0, 1) * x.x() * x.y() + A_inv_(1, 1) * x.y() * x.y();
        return std::sqrt(std::max(0.0, q)) / scale_;
    }
    return polar(std::span<const double>(x.data(), 2));
}

Vec AnisotropicNorm::polar_gradient(const Vec& x) const {
    require_dim(std::span<const double>(x.data(), x.size()), dim_);
    require_finite(std::span<const double>(x.data(), x.size()), "grad_polar");
    if (x.cwiseAbs().maxCoeff() == 0.0) throw SingularPoint("polar gradient undefined at the origin");
    switch (kind_) {
    case GaugeKind::euclidean:
        return x / (x.norm() * scale_);
    case GaugeKind::quadratic: {
        const Vec Bx = A_inv_ * x;
        return Bx / (std::sqrt(x.dot(Bx)) * scale_);
    }
    case GaugeKind::weighted_p: {
        const double q = p_ / (p_ - 1.0);
        const double m = x.cwiseAbs().maxCoeff();
        double sum = 0.0;
        for (int i = 0; i < dim_; ++i) sum += w_dual_[i] * std::pow(std::abs(x[i]) / m, q);
        const double factor = std::pow(sum, 1.0 / q - 1.0);
        Vec g(dim_);
        for (int i = 0; i < dim_; ++i) {
            const double y = x[i] / m;
            g[i] = factor * w_dual_[i] * std::pow(std::abs(y), q - 1.0) * (y < 0 ? -1.0 : 1.0) / scale_;
        }
        return g;
    }
    }
    return Vec::Zero(dim_);
}

Vec2 AnisotropicNorm::polar_gradient(const Vec2& x) const {
    return polar_gradient(Vec(x));
}

Vec2 AnisotropicNorm::flux(const Vec2& xi) const {
    switch (kind_) {
    case GaugeKind::euclidean:
        return scale_ * scale_ * xi;
    case GaugeKind::quadratic:
        return scale_ * scale_ *
               Vec2(A_(0, 0) * xi.x() + A_(0, 1) * xi.y(), A_(1, 0) * xi.x() + A_(1, 1) * xi.y());
    case GaugeKind::weighted_p: {
        const double m = std::max(std::abs(xi.x()), std::abs(xi.y()));
        if (m == 0.0) return Vec2::Zero();
        const double y0 = xi.x() / m, y1 = xi.y() / m;
        const double sum = w_[0] * std::pow(std::abs(y0), p_) + w_[1] * std::pow(std::abs(y1), p_);
        const double factor = scale_ * scale_ * m * std::pow(sum, 2.0 / p_ - 1.0);
        return factor * Vec2(w_[0] * std::pow(std::abs(y0), p_ - 1.0) * (y0 < 0 ? -1.0 : 1.0),
                             w_[1] * std::pow(std::abs(y1), p_ - 1.0) * (y1 < 0 ? -1.0 : 1.0));
    }
    }
    return Vec2::Zero();
}

Eigen::Matrix2d AnisotropicNorm::half_hessian_sq(const Vec2& xi) const {
    switch (kind_) {
    case GaugeKind::euclidean:
        return scale_ * scale_ * Eigen::Matrix2d::Identity();
    case GaugeKind::quadratic:
        return scale_ * scale_ * A_.topLeftCorner<2, 2>();
    case GaugeKind::weighted_p: {
        const double m = std::max(std::abs(xi.x()), std::abs(xi.y()));
        if (m == 0.0) return 0.5 * (gamma_ * gamma_ + delta_ * delta_) * Eigen::Matrix2d::Identity();
        double y[2] = {xi.x() / m, xi.y() / m};
        double g[2], sum = 0.0;
        for (int i = 0; i < 2; ++i) {
            sum += w_[i] * std::pow(std::abs(y[i]), p_);
            g[i] = w_[i] * std::pow(std::abs(y[i]), p_ - 1.0) * (y[i] < 0 ? -1.0 : 1.0);
        }
        Eigen::Matrix2d hess;
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) hess(i, j) = (2.0 - p_) * std::pow(sum, 2.0 / p_ - 2.0) * g[i] * g[j];
            hess(i, i) += (p_ - 1.0) * std::pow(sum, 2.0 / p_ - 1.0) * w_[i] * std::pow(std::abs(y[i]), p_ - 2.0);
        }
        return scale_ * scale_ * hess;
    }
    }
    return Eigen::Matrix2d::Identity();
}

double AnisotropicNorm::gauge_volume() const {
    return raw_gauge_volume_ / std::pow(scale_, dim_);
}

double AnisotropicNorm::wulff_volume() const {
    return raw_wulff_volume_ * std::pow(scale_, dim_);
}

AnisotropicNorm normalize_gauge(const AnisotropicNorm& norm) {
    // Scaling H by c divides |K| by c^n.
    const AnisotropicNorm raw = norm.with_scale(1.0);
    const double vol = raw.gauge_volume();
    const double c = std::pow(vol / unit_ball_volume(norm.dim()), 1.0 / norm.dim());
    return raw.with_scale(c);
}

WulffShape::WulffShape(AnisotropicNorm n, Vec c, double r)
    : norm(std::move(n)), center(std::move(c)), radius(r) {
    if (!std::isfinite(radius) || radius <= 0.0) throw InvalidInput("Wulff radius must be positive");
    if (center.size() != norm.dim()) throw InvalidInput("Wulff center dimension does not match the norm");
    kappa = norm.wulff_volume();
}

double WulffShape::volume() const {
    return kappa * std::pow(radius, norm.dim());
}

bool WulffShape::contains(const Vec& x) const {
    return norm.polar(Vec(x - center)) < radius;
}

std::vector<Vec2> WulffShape::boundary_polygon(int segments, bool match_area) const {
    if (norm.dim() != 2) throw InvalidInput("boundary polygons are only defined in the plane");
    if (segments < 3) throw InvalidInput("a Wulff polygon needs at least 3 segments");
    std::vector<Vec2> pts;
    pts.reserve(segments);
    for (int k = 0; k < segments; ++k) {
        const double th = 2.0 * pi * k / segments;
        const Vec2 d(std::cos(th), std::sin(th));
        // H° is 1-homogeneous, so the ray hits {H° = R} at t = R / H°(d).
        pts.push_back(radius / norm.polar(d) * d);
    }
    double factor = 1.0;
    if (match_area) factor = std::sqrt(volume() / polygon_signed_area(pts));
    const Vec2 c(center[0], center[1]);
    for (auto& p : pts) p = c + factor * p;
    return pts;
}

double WulffShape::perimeter() const {
    const int n = norm.dim();
    if (n != 2) return n * kappa * std::pow(radius, n - 1);
    // x(th) = R d / H°(d); H(nu)|x'| = H(J x') with J the clockwise rotation.
    auto integrand = [&](double th) {
        const Vec2 d(std::cos(th), std::sin(th));
        const Vec2 dd(-std::sin(th), std::cos(th));
        const double hp = norm.polar(d);
        const Vec2 gp = norm.polar_gradient(d);
        const Vec2 xp = radius * (dd / hp - d * gp.dot(dd) / (hp * hp));
        return norm.value(Vec2(xp.y(), -xp.x()));
    };
    double total = 0.0;
    for (int q = 0; q < 4; ++q) total += quad::integrate(integrand, q * pi / 2, (q + 1) * pi / 2, 1e-14);
    return total;
}

double polygon_signed_area(std::span<const Vec2> polygon) {
    double a = 0.0;
    const std::size_t n = polygon.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& p = polygon[i];
        const Vec2& q = polygon[(i + 1) % n];
        a += p.x() * q.y() - q.x() * p.y();
    }
    return 0.5 * a;
}

namespace {

double orient(const Vec2& a, const Vec2& b, const Vec2& c) {
    return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
    return std::min(a.x(), b.x()) <= p.x() && p.x() <= std::max(a.x(), b.x()) && std::min(a.y(), b.y()) <= p.y() &&
           p.y() <= std::max(a.y(), b.y());
}

bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    const double o1 = orient(a, b, c), o2 = orient(a, b, d);
    const double o3 = orient(c, d, a), o4 = orient(c, d, b);
    if (((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) && ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0))) return true;
    if (o1 == 0 && on_segment(a, b, c)) return true;
    if (o2 == 0 && on_segment(a, b, d)) return true;
    if (o3 == 0 && on_segment(c, d, a)) return true;
    if (o4 == 0 && on_segment(c, d, b)) return true;
    return false;
}

}  // namespace

void validate_simple_polygon(std::span<const Vec2> poly) {
    const std::size_t n = poly.size();
    if (n < 3) throw InvalidGeometry("polygon needs at least 3 vertices");
    double min_x = poly[0].x(), max_x = min_x, min_y = poly[0].y(), max_y = min_y, total_len = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!poly[i].allFinite()) throw InvalidGeometry("polygon has a non-finite vertex");
        const Vec2& a = poly[i];
        const Vec2& b = poly[(i + 1) % n];
        const double len = (b - a).norm();
        if (len == 0.0) throw InvalidGeometry("polygon has a zero-length edge");
        total_len += len;
        min_x = std::min(min_x, a.x());
        max_x = std::max(max_x, a.x());
        min_y = std::min(min_y, a.y());
        max_y = std::max(max_y, a.y());
        // Adjacent edges folding back onto each other.
        const Vec2& c = poly[(i + 2) % n];
        if (orient(a, b, c) == 0.0 && (b - a).dot(c - b) < 0.0) throw InvalidGeometry("polygon folds back on itself");
    }
    if (std::abs(polygon_signed_area(poly)) <= 1e-14 * total_len * total_len)
        throw InvalidGeometry("polygon is degenerate (zero area)");

    // Bucket edges on a uniform grid and test only pairs sharing a cell.
    const double cell = std::max(2.0 * total_len / static_cast<double>(n), 1e-300);
    const auto nx = static_cast<long>(std::min(4096.0, std::floor((max_x - min_x) / cell) + 1));
    const auto ny = static_cast<long>(std::min(4096.0, std::floor((max_y - min_y) / cell) + 1));
    const double cx = (max_x - min_x) / static_cast<double>(nx) + 1e-300;
    const double cy = (max_y - min_y) / static_cast<double>(ny) + 1e-300;
    std::unordered_map<long, std::vector<std::size_t>> grid;
    auto cell_of = [&](double v, double lo, double w, long count) {
        return std::clamp(static_cast<long>(std::floor((v - lo) / w)), 0L, count - 1);
    };
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[(i + 1) % n];
        const long x0 = cell_of(std::min(a.x(), b.x()), min_x, cx, nx), x1 = cell_of(std::max(a.x(), b.x()), min_x, cx, nx);
        const long y0 = cell_of(std::min(a.y(), b.y()), min_y, cy, ny), y1 = cell_of(std::max(a.y(), b.y()), min_y, cy, ny);
        for (long gx = x0; gx <= x1; ++gx) {
            for (long gy = y0; gy <= y1; ++gy) grid[gx * ny + gy].push_back(i);
        }
    }
    for (const auto& [key, edges] : grid) {
        for (std::size_t s = 0; s < edges.size(); ++s) {
            for (std::size_t t = s + 1; t < edges.size(); ++t) {
                const std::size_t i = edges[s], j = edges[t];
                if (j == (i + 1) % n || i == (j + 1) % n) continue;
                if (segments_intersect(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n]))
                    throw InvalidGeometry("polygon is self-intersecting");
            }
        }
    }
}

double perimeter_H(const AnisotropicNorm& norm, std::span<const Vec2> polygon) {
    if (norm.dim() != 2) throw InvalidInput("perimeter_H: polygons live in the plane");
    validate_simple_polygon(polygon);
    if (polygon_signed_area(polygon) <= 0.0) throw InvalidGeometry("perimeter_H: polygon must be counterclockwise");
    double total = 0.0;
    const std::size_t n = polygon.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 e = polygon[(i + 1) % n] - polygon[i];
        // |e| H(nu) = H(|e| nu) with |e| nu = (e_y, -e_x) for a CCW boundary.
        total += norm.value(Vec2(e.y(), -e.x()));
    }
    return total;
}

IsoperimetricReport check_isoperimetric(const AnisotropicNorm& norm, std::span<const Vec2> polygon) {
    IsoperimetricReport r;
    r.lhs = perimeter_H(norm, polygon);
    const double area = polygon_signed_area(polygon);
    const double n = norm.dim();
    r.rhs = n * std::pow(norm.wulff_volume(), 1.0 / n) * std::pow(area, 1.0 - 1.0 / n);
    r.margin = r.lhs - r.rhs;
    return r;
}

std::vector<IdentityCheck> anisotropy_identities(const AnisotropicNorm& norm, int samples, std::uint64_t seed) {
    const int n = norm.dim();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> radius(0.1, 10.0);
    double homog = 0.0, euler = 0.0, dual = 0.0, dual_polar = 0.0, bounds = 0.0, fd = 0.0;
    for (int i = 0; i < samples; ++i) {
        Vec xi(n);
        for (int j = 0; j < n; ++j) xi[j] = gauss(rng);
        xi *= radius(rng) / xi.norm();
        const double H = norm.value(xi);
        const double t = radius(rng) * (i % 2 ? -1.0 : 1.0);
        homog = std::max(homog, std::abs(norm.value(Vec(t * xi)) - std::abs(t) * H) / (std::abs(t) * H));
        const Vec g = norm.gradient(xi);
        euler = std::max(euler, std::abs(g.dot(xi) - H) / H);
        dual = std::max(dual, std::abs(norm.value(norm.polar_gradient(xi)) - 1.0));
        dual_polar = std::max(dual_polar, std::abs(norm.polar(g) - 1.0));
        const double r = xi.norm();
        bounds = std::max(bounds, std::max(norm.gamma() * r - H, H - norm.delta() * r) / H);
        Vec fdg(n);
        for (int j = 0; j < n; ++j) {
            const double step = 1e-6 * r;
            Vec a = xi, b = xi;
            a[j] += step;
            b[j] -= step;
            fdg[j] = (norm.value(a) - norm.value(b)) / (2.0 * step);
        }
        fd = std::max(fd, (fdg - g).norm() / g.norm());
    }
    const AnisotropicNorm unit = normalize_gauge(norm);
    const double vol = std::abs(unit.gauge_volume() - unit_ball_volume(n)) / unit_ball_volume(n);
    std::vector<IdentityCheck> out{{"homogeneity H(t xi) = |t| H(xi)", homog, 1e-12},
                                   {"Euler identity H_xi(xi) . xi = H(xi)", euler, 1e-12},
                                   {"duality H(H°_x(x)) = 1", dual, 1e-10},
                                   {"duality H°(H_xi(xi)) = 1", dual_polar, 1e-10},
                                   {"bounds gamma |xi| <= H(xi) <= delta |xi|", bounds, 1e-12},
                                   {"gradient vs central differences (relative)", fd, 1e-6},
                                   {"normalized |{H <= 1}| = unit ball volume (relative)", vol, 1e-6}};
    for (auto& c : out) c.pass = c.worst <= c.tolerance;
    return out;
}

}  // namespace talenti
