#include "talenti/rearrange.hpp"

#include "talenti/error.hpp"
#include "talenti/kernels.hpp"
#include "talenti/quadrature.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <ostream>

namespace talenti {

// ---------------------------------------------------------------- distribution

double DistributionFunction::QuadraticPart::value(double t) const {
    if (t < knots.front()) return total;
    if (t >= knots.back()) return 0.0;
    const auto i = static_cast<std::size_t>(std::upper_bound(knots.begin(), knots.end(), t) - knots.begin()) - 1;
    const auto& q = pieces[i];
    const double x = t - knots[i];
    return std::clamp(q.c0 + x * (q.c1 + x * q.c2), 0.0, total);
}

double DistributionFunction::QuadraticPart::slope(double t) const {
    if (t < knots.front() || t >= knots.back()) return 0.0;
    const auto i = static_cast<std::size_t>(std::upper_bound(knots.begin(), knots.end(), t) - knots.begin()) - 1;
    const auto& q = pieces[i];
    return q.c1 + 2.0 * q.c2 * (t - knots[i]);
}

DistributionFunction DistributionFunction::piecewise_quadratic(std::vector<double> knots,
                                                               std::vector<Quadratic> pieces, double total) {
    if (knots.empty() || pieces.size() + 1 != knots.size())
        throw InvalidInput("piecewise quadratic distribution needs one more knot than pieces");
    if (!std::is_sorted(knots.begin(), knots.end()) ||
        std::adjacent_find(knots.begin(), knots.end()) != knots.end())
        throw InvalidInput("distribution knots must be strictly increasing");
    if (!(total >= 0.0)) throw InvalidInput("negative total measure");
    DistributionFunction d;
    d.add_part(QuadraticPart{std::move(knots), std::move(pieces), total});
    return d;
}

DistributionFunction DistributionFunction::step(double level, double measure) {
    if (!(measure >= 0.0)) throw InvalidInput("negative measure");
    DistributionFunction d;
    d.add_part(QuadraticPart{{level}, {}, measure});
    return d;
}

DistributionFunction DistributionFunction::profile(Profile p) {
    if (!(p.full >= 0.0) || !(p.lo <= p.hi)) throw InvalidInput("invalid distribution profile");
    if (p.lo == p.hi) return step(p.lo, p.full);
    if (!p.value || !p.slope) throw InvalidInput("distribution profile without value or slope");
    DistributionFunction d;
    d.add_part(std::move(p));
    return d;
}

void DistributionFunction::add_part(Part part) {
    double lo = 0.0, hi = 0.0, full = 0.0;
    if (const auto* q = std::get_if<QuadraticPart>(&part)) {
        lo = q->knots.front();
        hi = q->knots.back();
        full = q->total;
    } else {
        const auto& p = std::get<Profile>(part);
        lo = p.lo;
        hi = p.hi;
        full = p.full;
    }
    if (parts_.empty()) {
        lo_ = lo;
        hi_ = hi;
    } else {
        lo_ = std::min(lo_, lo);
        hi_ = std::max(hi_, hi);
    }
    total_ += full;
    parts_.push_back(std::move(part));
}

DistributionFunction& DistributionFunction::operator+=(const DistributionFunction& other) {
    for (const auto& p : other.parts_) add_part(p);
    return *this;
}

double DistributionFunction::operator()(double t) const {
    double s = 0.0;
    for (const auto& part : parts_) {
        if (const auto* q = std::get_if<QuadraticPart>(&part)) {
            s += q->value(t);
        } else {
            const auto& p = std::get<Profile>(part);
            s += t < p.lo ? p.full : t >= p.hi ? 0.0 : std::clamp(p.value(t), 0.0, p.full);
        }
    }
    return s;
}

double DistributionFunction::derivative(double t) const {
    double s = 0.0;
    for (const auto& part : parts_) {
        if (const auto* q = std::get_if<QuadraticPart>(&part)) {
            s += q->slope(t);
        } else {
            const auto& p = std::get<Profile>(part);
            if (t >= p.lo && t < p.hi) s += p.slope(t);
        }
    }
    return s;
}

std::vector<double> DistributionFunction::breakpoints() const {
    std::vector<double> b;
    for (const auto& part : parts_) {
        if (const auto* q = std::get_if<QuadraticPart>(&part)) {
            b.insert(b.end(), q->knots.begin(), q->knots.end());
        } else {
            const auto& p = std::get<Profile>(part);
            b.push_back(p.lo);
            b.push_back(p.hi);
            for (double k : p.knots)
                if (k > p.lo && k < p.hi) b.push_back(k);
        }
    }
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return b;
}

bool DistributionFunction::is_piecewise_quadratic() const {
    return parts_.size() == 1 && std::holds_alternative<QuadraticPart>(parts_.front());
}

namespace {

// Root of a decreasing function on [a, b] with g(a) >= 0 > g(b).
template <class G>
double decreasing_root(G&& g, double a, double b) {
    const double ga = g(a);
    if (ga <= 0.0) return a;
    const double gb = g(b);
    if (gb >= 0.0) return b;
    std::uintmax_t iters = 200;
    const auto [x0, x1] = boost::math::tools::toms748_solve(g, a, b, ga, gb,
                                                            boost::math::tools::eps_tolerance<double>(52), iters);
    return 0.5 * (x0 + x1);
}

}  // namespace

double DistributionFunction::inverse_quadratic(double s) const {
    const auto& q = std::get<QuadraticPart>(parts_.front());
    const auto& k = q.knots;
    const auto& pc = q.pieces;
    auto left_limit = [&](std::size_t i) {
        const double x = k[i + 1] - k[i];
        return pc[i].c0 + x * (pc[i].c1 + x * pc[i].c2);
    };
    // first piece whose left limit at its right end drops below s
    std::size_t lo = 0, hi = pc.size();
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (left_limit(mid) < s)
            hi = mid;
        else
            lo = mid + 1;
    }
    if (lo == pc.size()) return k.back();
    const auto& p = pc[lo];
    if (p.c0 < s) return k[lo];
    const double x = decreasing_root([&](double x) { return p.c0 + x * (p.c1 + x * p.c2) - s; }, 0.0,
                                     k[lo + 1] - k[lo]);
    return k[lo] + x;
}

// ---------------------------------------------------------------- rearrangement

RearrangedFunction::RearrangedFunction(DistributionFunction mu) : mu_(std::move(mu)) {}

double RearrangedFunction::operator()(double s) const {
    const double total = mu_.total_measure();
    if (s > total * (1.0 + 1e-12) + 1e-300 || s < 0.0 || std::isnan(s))
        throw DomainError("rearrangement evaluated outside [0, |Omega|]");
    if (s <= 0.0) return mu_.ess_sup();
    s = std::min(s, total);
    if (mu_.is_piecewise_quadratic()) return mu_.inverse_quadratic(s);

    // inf{t : mu(t) < s} by bisection; mu(a) >= s > mu(b) throughout
    double a = mu_.ess_inf(), b = mu_.ess_sup();
    if (mu_(a) < s) return a;
    for (int it = 0; it < 200; ++it) {
        const double m = a + 0.5 * (b - a);
        if (m <= a || m >= b) break;
        if (mu_(m) < s)
            b = m;
        else
            a = m;
    }
    return b;
}

std::vector<double> RearrangedFunction::breakpoints() const {
    std::vector<double> s{0.0, mu_.total_measure()};
    for (double t : mu_.breakpoints()) {
        s.push_back(mu_(t));
        s.push_back(mu_(std::nextafter(t, -std::numeric_limits<double>::infinity())));
    }
    for (double& x : s) x = std::clamp(x, 0.0, mu_.total_measure());
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

namespace {

double integrate_pieces(const std::vector<double>& cuts, double a, double b,
                        const std::function<double(double)>& f) {
    double sum = 0.0;
    double prev = a;
    for (double c : cuts) {
        if (c <= prev) continue;
        if (c >= b) break;
        sum += quad::integrate_singular(f, prev, c);
        prev = c;
    }
    if (b > prev) sum += quad::integrate_singular(f, prev, b);
    return sum;
}

}  // namespace

double RearrangedFunction::integrate(const std::function<double(double)>& g, double a, double b) const {
    if (!mu_.is_piecewise_quadratic())
        return integrate_pieces(breakpoints(), a, b, [&](double s) { return g((*this)(s)); });

    // Layer cake: on a piece, ds = -mu'(t) dt with mu' linear, so the
    // integrand in t is as smooth as g. Flat stretches of u are jumps of mu.
    a = std::max(a, 0.0);
    b = std::min(b, total_measure());
    if (!(b > a)) return 0.0;
    const auto& q = std::get<DistributionFunction::QuadraticPart>(mu_.parts_.front());
    const auto& k = q.knots;
    double sum = 0.0;
    auto overlap = [&](double lo, double hi) { return std::max(0.0, std::min(b, hi) - std::max(a, lo)); };
    double above = q.total;  // mu just left of the current knot
    for (std::size_t i = 0; i < q.pieces.size(); ++i) {
        const auto& p = q.pieces[i];
        const double len = k[i + 1] - k[i];
        auto mu = [&](double x) { return p.c0 + x * (p.c1 + x * p.c2); };
        sum += g(k[i]) * overlap(p.c0, above);
        const double right = mu(len);
        above = right;
        const double sa = std::max(a, right), sb = std::min(b, p.c0);
        if (!(sb > sa)) continue;
        const double x_hi = sa <= right ? len : decreasing_root([&](double x) { return mu(x) - sa; }, 0.0, len);
        const double x_lo = sb >= p.c0 ? 0.0 : decreasing_root([&](double x) { return mu(x) - sb; }, 0.0, len);
        auto w = [&](double x) { return g(k[i] + x) * -(p.c1 + 2.0 * p.c2 * x); };
        const double t_lo = k[i] + x_lo, t_hi = k[i] + x_hi;
        if (t_lo < 0.0 && t_hi > 0.0) {
            sum += quad::integrate_singular(w, x_lo, -k[i]) + quad::integrate_singular(w, -k[i], x_hi);
        } else if (t_lo == 0.0 || t_hi == 0.0) {
            sum += quad::integrate_singular(w, x_lo, x_hi);
        } else {
            sum += quad::gauss20(w, x_lo, x_hi);
        }
    }
    sum += g(k.back()) * overlap(0.0, above);
    return sum;
}

RearrangedFunction decreasing_rearrangement(const DistributionFunction& mu) { return RearrangedFunction(mu); }

// ---------------------------------------------------------------- P1 fields

double level_set_area(const ScalarField& u, double t) {
    return kernels::superlevel_area(u.mesh->soa(), std::span<const double>(u.values.data(), u.values.size()), t);
}

namespace {

struct LinearTriangle {
    double area;
    std::array<double, 3> v;
};

DistributionFunction distribution_of_triangles(const std::vector<LinearTriangle>& tris) {
    std::vector<double> knots;
    knots.reserve(3 * tris.size());
    double total = 0.0;
    for (const auto& t : tris) {
        knots.insert(knots.end(), t.v.begin(), t.v.end());
        total += t.area;
    }
    if (tris.empty()) throw InvalidInput("distribution of an empty field");
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

    const std::size_t m = knots.size() - 1;
    std::vector<DistributionFunction::Quadratic> pieces(m);
    std::vector<double> below(m + 1, 0.0);  // difference array for full-area stretches
    auto index = [&](double x) {
        return static_cast<std::size_t>(std::lower_bound(knots.begin(), knots.end(), x) - knots.begin());
    };
    for (const auto& tri : tris) {
        auto v = tri.v;
        std::sort(v.begin(), v.end());
        const double a = v[0], b = v[1], c = v[2], A = tri.area;
        const std::size_t ia = index(a), ib = index(b), ic = index(c);
        below[0] += A;
        below[ia] -= A;
        if (a < b) {
            const double D = (b - a) * (c - a);
            for (std::size_t i = ia; i < ib; ++i) {
                const double d = knots[i] - a;
                pieces[i].c0 += A - A * d * d / D;
                pieces[i].c1 -= 2.0 * A * d / D;
                pieces[i].c2 -= A / D;
            }
        }
        if (b < c) {
            const double D = (c - a) * (c - b);
            for (std::size_t i = ib; i < ic; ++i) {
                const double e = c - knots[i];
                pieces[i].c0 += A * e * e / D;
                pieces[i].c1 -= 2.0 * A * e / D;
                pieces[i].c2 += A / D;
            }
        }
    }
    double run = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        run += below[i];
        pieces[i].c0 += run;
    }
    return DistributionFunction::piecewise_quadratic(std::move(knots), std::move(pieces), total);
}

std::vector<LinearTriangle> field_triangles(const ScalarField& u) {
    const auto& s = u.mesh->soa();
    std::vector<LinearTriangle> tris(s.size());
    for (std::size_t t = 0; t < s.size(); ++t)
        tris[t] = {s.area[t], {u.values[s.v0[t]], u.values[s.v1[t]], u.values[s.v2[t]]}};
    return tris;
}

// Convex polygon inside a reference triangle, vertices in barycentric coordinates.
using Bary = Eigen::Vector3d;
using BaryPolygon = std::vector<Bary>;

// Keep the part where sign * (values . lambda) >= 0.
BaryPolygon clip(const BaryPolygon& poly, const Eigen::Vector3d& values, double sign) {
    BaryPolygon out;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Bary& p = poly[i];
        const Bary& q = poly[(i + 1) % n];
        const double fp = sign * values.dot(p), fq = sign * values.dot(q);
        if (fp >= 0.0) out.push_back(p);
        if ((fp > 0.0 && fq < 0.0) || (fp < 0.0 && fq > 0.0)) out.push_back(p + (q - p) * (fp / (fp - fq)));
    }
    return out;
}

double sub_area(double area, const Bary& a, const Bary& b, const Bary& c) {
    Eigen::Matrix3d M;
    M << a, b, c;
    return area * std::abs(M.determinant());
}

// Fan triangulation of a clipped polygon.
template <class Fn>
void for_each_subtriangle(const BaryPolygon& poly, double area, Fn&& fn) {
    for (std::size_t i = 1; i + 1 < poly.size(); ++i) {
        const double a = sub_area(area, poly[0], poly[i], poly[i + 1]);
        if (a > 0.0) fn(a, poly[0], poly[i], poly[i + 1]);
    }
}

const BaryPolygon& reference_triangle() {
    static const BaryPolygon ref{Bary(1, 0, 0), Bary(0, 1, 0), Bary(0, 0, 1)};
    return ref;
}

}  // namespace

DistributionFunction distribution_of_field(const ScalarField& u) { return distribution_of_triangles(field_triangles(u)); }

DistributionFunction distribution_of_abs(const ScalarField& u) {
    const auto& s = u.mesh->soa();
    std::vector<LinearTriangle> tris;
    tris.reserve(s.size());
    for (std::size_t t = 0; t < s.size(); ++t) {
        const Eigen::Vector3d v(u.values[s.v0[t]], u.values[s.v1[t]], u.values[s.v2[t]]);
        if (v.minCoeff() >= 0.0 || v.maxCoeff() <= 0.0) {
            tris.push_back({s.area[t], {std::abs(v[0]), std::abs(v[1]), std::abs(v[2])}});
            continue;
        }
        for (double sign : {1.0, -1.0})
            for_each_subtriangle(clip(reference_triangle(), v, sign), s.area[t],
                                 [&](double a, const Bary& p, const Bary& q, const Bary& r) {
                                     tris.push_back({a, {std::abs(v.dot(p)), std::abs(v.dot(q)), std::abs(v.dot(r))}});
                                 });
    }
    return distribution_of_triangles(tris);
}

double abs_product_integral(const ScalarField& f, const ScalarField& g) {
    require_same_mesh(f, g);
    const auto& s = f.mesh->soa();
    auto product = [](double area, const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
        return area / 12.0 * (a.dot(b) + a.sum() * b.sum());
    };
    double sum = 0.0;
    for (std::size_t t = 0; t < s.size(); ++t) {
        const Eigen::Vector3d fv(f.values[s.v0[t]], f.values[s.v1[t]], f.values[s.v2[t]]);
        const Eigen::Vector3d gv(g.values[s.v0[t]], g.values[s.v1[t]], g.values[s.v2[t]]);
        const bool f_fixed = fv.minCoeff() >= 0.0 || fv.maxCoeff() <= 0.0;
        const bool g_fixed = gv.minCoeff() >= 0.0 || gv.maxCoeff() <= 0.0;
        if (f_fixed && g_fixed) {
            sum += std::abs(product(s.area[t], fv, gv));
            continue;
        }
        for (double sf : {1.0, -1.0}) {
            const auto pf = clip(reference_triangle(), fv, sf);
            for (double sg : {1.0, -1.0})
                for_each_subtriangle(clip(pf, gv, sg), s.area[t],
                                     [&](double a, const Bary& p, const Bary& q, const Bary& r) {
                                         const Eigen::Vector3d fs(fv.dot(p), fv.dot(q), fv.dot(r));
                                         const Eigen::Vector3d gs(gv.dot(p), gv.dot(q), gv.dot(r));
                                         sum += std::abs(product(a, fs, gs));
                                     });
        }
    }
    return sum;
}

HardyLittlewoodReport hardy_littlewood_check(const ScalarField& f, const ScalarField& g) {
    require_same_mesh(f, g);
    const RearrangedFunction fs(distribution_of_abs(f));
    const RearrangedFunction gs(distribution_of_abs(g));
    auto cuts = fs.breakpoints();
    const auto more = gs.breakpoints();
    cuts.insert(cuts.end(), more.begin(), more.end());
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    HardyLittlewoodReport r;
    r.lhs = abs_product_integral(f, g);
    // Between breakpoints both rearrangements are smooth up to square-root ends.
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        r.rhs += quad::gauss20_endpoints([&](double s) { return fs(s) * gs(s); }, cuts[i], cuts[i + 1]);
    r.margin = r.rhs - r.lhs;
    return r;
}

ScalarField convex_symmetrization(const RearrangedFunction& fstar, const AnisotropicNorm& norm, MeshPtr target,
                                  const Vec2& center) {
    if (norm.dim() != 2) throw InvalidInput("convex symmetrization of a mesh field needs a planar norm");
    const double total = fstar.total_measure();
    const double area = target->area();
    if (std::abs(area - total) > 1e-6 * total)
        throw InvalidInput("target domain measure " + std::to_string(area) + " differs from source measure " +
                           std::to_string(total));
    const double k = norm.wulff_volume();
    Vec values(target->vertex_count());
    for (std::size_t i = 0; i < target->vertex_count(); ++i) {
        const double r = norm.polar(Vec2(target->vertices()[i] - center));
        values[i] = fstar(std::min(k * r * r, total));
    }
    return ScalarField(std::move(target), std::move(values));
}

ScalarField convex_symmetrization(const ScalarField& u, const AnisotropicNorm& norm, MeshPtr target,
                                  const Vec2& center) {
    return convex_symmetrization(RearrangedFunction(distribution_of_field(u)), norm, std::move(target), center);
}

// ---------------------------------------------------------------- Lorentz norms

double lorentz_norm(const DistributionFunction& mu, double p, double q) {
    if (!(p > 0.0) || !(q > 0.0) || !std::isfinite(p) || !std::isfinite(q))
        throw InvalidInput("Lorentz exponents must be positive and finite");
    const double e = q / p;
    const double start = std::max(0.0, mu.ess_inf());
    double I = 0.0;
    if (start > 0.0) I += std::pow(mu.total_measure(), e) * std::pow(start, q) / q;

    auto f = [&](double t) {
        const double m = mu(t);
        return m > 0.0 ? std::pow(t, q - 1.0) * std::pow(m, e) : 0.0;
    };
    // Quadratic pieces are smooth. A profile behaves like a power of (hi - t)
    // below its top; with many breakpoints the other pieces are short and smooth.
    auto cuts = mu.breakpoints();
    cuts.push_back(mu.ess_sup());
    std::vector<double> tops;
    if (!mu.is_piecewise_quadratic()) {
        for (const auto& part : mu.parts_)
            if (const auto* prof = std::get_if<DistributionFunction::Profile>(&part)) tops.push_back(prof->hi);
        if (cuts.size() <= 32) tops = cuts;
    }
    double prev = start;
    for (double c : cuts) {
        if (c <= prev) continue;
        const bool singular = (prev == 0.0 && q < 1.0) || std::find(tops.begin(), tops.end(), c) != tops.end();
        I += singular ? quad::integrate_singular(f, prev, c) : quad::gauss20(f, prev, c);
        prev = c;
    }
    const double norm = std::pow(p * I, 1.0 / q);
    if (!std::isfinite(norm)) throw OverflowError("Lorentz norm overflows");
    return norm;
}

double rearranged_power_integral(const RearrangedFunction& fstar, double p) {
    return fstar.integrate([p](double x) { return std::pow(std::abs(x), p); }, 0.0, fstar.total_measure());
}

// ---------------------------------------------------------------- level sets

namespace {

double nudged_level(const ScalarField& u, double t, bool& perturbed) {
    const double scale = std::max(1.0, u.values.cwiseAbs().maxCoeff());
    double step = 1e-12 * scale;
    perturbed = false;
    while ((u.values.array() == t).any()) {
        t += step;
        step *= 2.0;
        perturbed = true;
    }
    return t;
}

}  // namespace

LevelSetPerimeter levelset_perimeter_H(const ScalarField& u, const AnisotropicNorm& norm, double t) {
    LevelSetPerimeter r;
    r.level = nudged_level(u, t, r.perturbed);
    t = r.level;
    const auto& mesh = *u.mesh;
    const auto& s = mesh.soa();
    const auto& X = mesh.vertices();
    for (std::size_t k = 0; k < s.size(); ++k) {
        const std::array<int, 3> idx{s.v0[k], s.v1[k], s.v2[k]};
        std::array<double, 3> v{};
        for (int j = 0; j < 3; ++j) v[j] = u.values[idx[j]];
        const double lo = std::min({v[0], v[1], v[2]}), hi = std::max({v[0], v[1], v[2]});
        if (!(lo < t && t < hi)) continue;
        std::vector<Vec2> cross;
        for (int j = 0; j < 3; ++j) {
            const int a = j, b = (j + 1) % 3;
            if ((v[a] - t) * (v[b] - t) < 0.0) {
                const double w = (t - v[a]) / (v[b] - v[a]);
                cross.push_back(X[idx[a]] + w * (X[idx[b]] - X[idx[a]]));
            }
        }
        if (cross.size() != 2) continue;
        const Vec2 g(s.gx0[k] * v[0] + s.gx1[k] * v[1] + s.gx2[k] * v[2],
                     s.gy0[k] * v[0] + s.gy1[k] * v[1] + s.gy2[k] * v[2]);
        const double gn = g.norm();
        if (gn == 0.0) continue;
        r.interior += (cross[1] - cross[0]).norm() * norm.value(Vec2(-g / gn));
    }
    for (const auto& e : mesh.boundary_edges()) {
        const double a = u.values[e.a], b = u.values[e.b];
        double frac = 0.0;
        if (a > t && b > t)
            frac = 1.0;
        else if (a > t || b > t)
            frac = (std::max(a, b) - t) / std::abs(a - b);
        r.exterior += frac * e.length * norm.value(e.normal);
    }
    r.total = r.interior + r.exterior;
    return r;
}

double boundary_trace_integral(const ScalarField& u, const AnisotropicNorm& norm, double t) {
    double sum = 0.0;
    for (const auto& e : u.mesh->boundary_edges()) {
        double a = u.values[e.a], b = u.values[e.b];
        if (a <= t && b <= t) continue;
        double len = e.length;
        if (a <= t || b <= t) {
            const double hi = std::max(a, b);
            len *= (hi - t) / std::abs(a - b);
            a = t;
            b = hi;
        }
        if (std::min(a, b) <= 0.0) throw DomainError("boundary trace of 1/u where u <= 0");
        const double avg_inv = a == b ? 1.0 / a : std::log1p((b - a) / a) / (b - a);
        sum += norm.value(e.normal) * len * avg_inv;
    }
    return sum;
}

// ---------------------------------------------------------------- output

void write_distribution_csv(std::ostream& out, const DistributionFunction& mu, int extra) {
    out << "t,mu\n";
    out.precision(17);
    const auto b = mu.breakpoints();
    for (std::size_t i = 0; i < b.size(); ++i) {
        out << b[i] << ',' << mu(b[i]) << '\n';
        if (i + 1 == b.size()) break;
        for (int j = 1; j <= extra; ++j) {
            const double t = b[i] + (b[i + 1] - b[i]) * j / (extra + 1);
            out << t << ',' << mu(t) << '\n';
        }
    }
}

void write_rearrangement_csv(std::ostream& out, const RearrangedFunction& fstar, int samples) {
    out << "s,fstar\n";
    out.precision(17);
    for (int i = 0; i <= samples; ++i) {
        const double s = fstar.total_measure() * i / samples;
        out << s << ',' << fstar(s) << '\n';
    }
}

}  // namespace talenti
