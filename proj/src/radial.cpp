#include "talenti/radial.hpp"

#include "talenti/error.hpp"
#include "talenti/quadrature.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <memory>
#include <ostream>

namespace talenti {

// ---------------------------------------------------------------- f*

PiecewiseLinear::PiecewiseLinear(std::vector<double> knots, std::vector<double> values) {
    if (knots.size() != values.size() || knots.size() < 2)
        throw InvalidInput("piecewise-linear f* needs matching knots and values (at least two)");
    if (knots.front() != 0.0) throw InvalidInput("f* must start at s = 0");
    double scale = 0.0;
    for (std::size_t i = 0; i < knots.size(); ++i) {
        if (!std::isfinite(knots[i]) || !std::isfinite(values[i])) throw InvalidInput("non-finite f* data");
        if (values[i] < 0.0) throw InvalidInput("f* must be nonnegative");
        if (i > 0 && knots[i] < knots[i - 1]) throw InvalidInput("f* knots must be non-decreasing");
        scale = std::max(scale, values[i]);
    }
    const double slack = 1e-12 * scale;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i)
        if (values[i + 1] > values[i] + slack) throw InvalidInput("f* must be non-increasing");
    for (std::size_t i = 0; i + 1 < knots.size(); ++i)
        if (knots[i + 1] > knots[i]) pieces_.push_back({knots[i], knots[i + 1], values[i], values[i + 1]});
    if (pieces_.empty()) throw InvalidInput("f* has zero length");
}

PiecewiseLinear PiecewiseLinear::constant(double value, double length) {
    return PiecewiseLinear({0.0, length}, {value, value});
}

PiecewiseLinear PiecewiseLinear::indicator(double m, double length, double value) {
    if (!(m > 0.0 && m <= length)) throw InvalidInput("indicator support must lie in (0, length]");
    if (m == length) return constant(value, length);
    return PiecewiseLinear({0.0, m, m, length}, {value, value, 0.0, 0.0});
}

double PiecewiseLinear::operator()(double s) const {
    if (s < 0.0 || s > length()) throw DomainError("f* evaluated outside its interval");
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), s, [](double x, const Piece& p) { return x < p.s1; });
    if (it == pieces_.end()) --it;
    const double w = (s - it->s0) / (it->s1 - it->s0);
    return it->a + (it->b - it->a) * w;
}

double PiecewiseLinear::integral(double s) const {
    double sum = 0.0;
    for (const auto& p : pieces_) {
        if (s <= p.s0) break;
        const double x = std::min(s, p.s1) - p.s0;
        sum += x * (p.a + (p.b - p.a) * x / (2.0 * (p.s1 - p.s0)));
    }
    return sum;
}

PiecewiseLinear approximate_rearrangement(const RearrangedFunction& fstar, int extra, double* l1_error) {
    auto cuts = fstar.breakpoints();
    std::vector<double> knots;
    for (std::size_t i = 0; i < cuts.size(); ++i) {
        knots.push_back(cuts[i]);
        if (i + 1 == cuts.size()) break;
        for (int j = 1; j <= extra; ++j) knots.push_back(cuts[i] + (cuts[i + 1] - cuts[i]) * j / (extra + 1));
    }
    std::vector<double> values(knots.size());
    for (std::size_t i = 0; i < knots.size(); ++i) values[i] = std::max(0.0, fstar(knots[i]));
    PiecewiseLinear pl(knots, std::move(values));
    if (l1_error) {
        double err = 0.0;
        for (const auto& p : pl.pieces())
            err += quad::integrate_singular([&](double s) { return std::abs(fstar(s) - pl(s)); }, p.s0, p.s1);
        *l1_error = err;
    }
    return pl;
}

// ---------------------------------------------------------------- problem

RadialProblem RadialProblem::on_wulff(const AnisotropicNorm& norm, double R, double beta, PiecewiseLinear fstar) {
    RadialProblem p{norm.dim(), R, beta, norm.wulff_volume(), std::move(fstar)};
    p.validate();
    return p;
}

RadialProblem RadialProblem::constant_load(const AnisotropicNorm& norm, double R, double beta, double f) {
    if (!(R > 0.0)) throw InvalidInput("Wulff radius must be positive");
    return on_wulff(norm, R, beta, PiecewiseLinear::constant(f, norm.wulff_volume() * std::pow(R, norm.dim())));
}

double RadialProblem::measure() const { return kappa * std::pow(R, n); }

void RadialProblem::validate() const {
    if (n < 2) throw InvalidInput("dimension must be at least 2");
    if (!(R > 0.0) || !std::isfinite(R)) throw InvalidInput("Wulff radius must be positive");
    if (!(beta > 0.0) || !std::isfinite(beta)) throw InvalidInput("beta must be positive");
    if (!(kappa > 0.0)) throw InvalidInput("k_n must be positive");
    const double S = measure();
    if (std::abs(fstar.length() - S) > 1e-9 * S)
        throw InvalidInput("f* must be defined on [0, k_n R^n] = [0, " + std::to_string(S) + "]");
}

// ---------------------------------------------------------------- solution

namespace {

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

RadialSolution::RadialSolution(RadialProblem p) : p_(std::move(p)) {
    p_.validate();
    const int n = p_.n;
    const double k = p_.kappa;
    C_ = n * n * std::pow(k, 2.0 / n);
    const double S = p_.measure();
    // f* may be defined up to S(1 +- 1e-9); pin its last knot to S
    const auto& pieces = p_.fstar.pieces();
    double F0 = 0.0;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        const auto& pc = pieces[i];
        const double s1 = i + 1 == pieces.size() ? S : pc.s1;
        const double m = (pc.b - pc.a) / (pc.s1 - pc.s0);
        Segment g{pc.s0, s1, 0.0, 0.0, 0.0, 0.0};
        g.alpha = pc.s0 == 0.0 ? 0.0 : F0 - pc.a * pc.s0 + 0.5 * m * pc.s0 * pc.s0;
        g.lin = pc.a - m * pc.s0;
        g.quad = 0.5 * m;
        segments_.push_back(g);
        F0 += (pc.s1 - pc.s0) * 0.5 * (pc.a + pc.b);
    }
    F_S_ = F0;
    for (std::size_t j = segments_.size(); j-- > 0;) {
        if (j + 1 == segments_.size()) {
            segments_[j].tail = 0.0;
        } else {
            const auto& next = segments_[j + 1];
            segments_[j].tail = next.tail + primitive(next, next.s1) - primitive(next, next.s0);
        }
    }
    v_R_ = F_S_ / (p_.beta * n * k * std::pow(p_.R, n - 1));
    v_0_ = eval(0.0);
}

double RadialSolution::primitive(const Segment& g, double s) const {
    const double e = 2.0 / p_.n;
    double sum = 0.0;
    if (g.alpha != 0.0) sum += g.alpha * (p_.n == 2 ? std::log(s) : std::pow(s, e - 1.0) / (e - 1.0));
    if (g.lin != 0.0) sum += g.lin * std::pow(s, e) / e;
    if (g.quad != 0.0) sum += g.quad * std::pow(s, e + 1.0) / (e + 1.0);
    return sum / C_;
}

const RadialSolution::Segment& RadialSolution::segment_at(double s) const {
    auto it = std::upper_bound(segments_.begin(), segments_.end(), s,
                               [](double x, const Segment& g) { return x < g.s1; });
    if (it == segments_.end()) --it;
    return *it;
}

double RadialSolution::F(double s) const {
    const auto& g = segment_at(s);
    return g.alpha + s * (g.lin + s * g.quad);
}

double RadialSolution::eval(double r) const {
    if (!(r >= 0.0) || r > p_.R * (1.0 + 1e-12)) throw DomainError("radial solution evaluated outside [0, R]");
    if (r >= p_.R) return v_R_;
    const double s = p_.kappa * std::pow(r, p_.n);
    const auto& g = segment_at(s);
    const double inner = s == 0.0 && g.alpha == 0.0 ? primitive(g, g.s1) : primitive(g, g.s1) - primitive(g, s);
    return g.tail + inner + v_R_;
}

double RadialSolution::derivative(double r) const {
    if (!(r >= 0.0) || r > p_.R * (1.0 + 1e-12)) throw DomainError("radial derivative outside [0, R]");
    if (r == 0.0) return 0.0;
    r = std::min(r, p_.R);
    const int n = p_.n;
    const double k = p_.kappa;
    return -F(k * std::pow(r, n)) / (n * k * std::pow(r, n - 1));
}

double RadialSolution::radius_at_level(double t) const {
    if (t >= v_0_) return 0.0;
    if (t <= v_R_) return p_.R;
    const double S = p_.measure();
    const double s = decreasing_root([&](double s) { return eval(std::pow(s / p_.kappa, 1.0 / p_.n)) - t; }, 0.0, S);
    return std::pow(s / p_.kappa, 1.0 / p_.n);
}

std::vector<double> RadialSolution::knot_radii() const {
    std::vector<double> r;
    for (std::size_t j = 0; j + 1 < segments_.size(); ++j)
        r.push_back(std::pow(segments_[j].s1 / p_.kappa, 1.0 / p_.n));
    return r;
}

double RadialSolution::lq_norm(double q) const {
    if (!(q > 0.0)) throw InvalidInput("norm exponent must be positive");
    if (v_0_ == 0.0) return 0.0;  // zero load: a relative tolerance would never be met
    const int n = p_.n;
    const double k = p_.kappa;
    auto f = [&](double r) { return std::pow(std::abs(eval(r)), q) * n * k * std::pow(r, n - 1); };
    double sum = 0.0, prev = 0.0;
    auto cuts = knot_radii();
    cuts.push_back(p_.R);
    for (double c : cuts) {
        sum += quad::integrate_singular(f, prev, c);
        prev = c;
    }
    return std::pow(sum, 1.0 / q);
}

void RadialSolution::write_csv(std::ostream& out, int samples) const {
    out << "r,v\n";
    out.precision(17);
    for (int i = 0; i <= samples; ++i) {
        const double r = p_.R * i / samples;
        out << r << ',' << eval(r) << '\n';
    }
}

std::vector<RadialSolution> multi_wulff_solution(std::span<const WulffLoad> components, const AnisotropicNorm& norm,
                                                 double beta) {
    std::vector<RadialSolution> out;
    out.reserve(components.size());
    for (const auto& c : components) out.emplace_back(RadialProblem::constant_load(norm, c.R, beta, c.f));
    return out;
}

DistributionFunction distribution_of_radial(const RadialSolution& v) {
    const double S = v.measure();
    if (v.v_max() <= v.v_min()) return DistributionFunction::step(v.v_min(), S);
    auto sol = std::make_shared<const RadialSolution>(v);
    DistributionFunction::Profile p;
    p.lo = v.v_min();
    p.hi = v.v_max();
    p.full = S;
    p.value = [sol](double t) {
        const double r = sol->radius_at_level(t);
        return sol->kappa() * std::pow(r, sol->n());
    };
    p.slope = [sol](double t) {
        const int n = sol->n();
        const double r = sol->radius_at_level(t);
        if (r == 0.0) return n == 2 ? -4.0 * sol->kappa() / sol->problem().fstar(0.0) : 0.0;
        return n * sol->kappa() * std::pow(r, n - 1) / sol->derivative(r);
    };
    for (double r : v.knot_radii()) p.knots.push_back(v.eval(r));
    return DistributionFunction::profile(std::move(p));
}

DistributionFunction distribution_of_radial(std::span<const RadialSolution> parts) {
    if (parts.empty()) throw InvalidInput("no radial components");
    DistributionFunction d = distribution_of_radial(parts.front());
    for (std::size_t i = 1; i < parts.size(); ++i) d += distribution_of_radial(parts[i]);
    return d;
}

double lq_norm(std::span<const RadialSolution> parts, double q) {
    double sum = 0.0;
    for (const auto& v : parts) sum += std::pow(v.lq_norm(q), q);
    return std::pow(sum, 1.0 / q);
}

}  // namespace talenti
