#pragma once

#include "talenti/anisotropy.hpp"
#include "talenti/rearrange.hpp"

#include <iosfwd>
#include <span>
#include <vector>

namespace talenti {

/// Non-increasing, nonnegative, piecewise-linear function on [0, S]. A jump is
/// written as a repeated knot: knots {0, m, m, S}, values {1, 1, 0, 0}.
class PiecewiseLinear {
public:
    struct Piece {
        double s0, s1;  ///< s0 < s1
        double a, b;    ///< values at s0+ and s1-
    };

    PiecewiseLinear(std::vector<double> knots, std::vector<double> values);
    static PiecewiseLinear constant(double value, double length);
    /// `value` on [0, m), 0 on [m, length].
    static PiecewiseLinear indicator(double m, double length, double value = 1.0);

    double operator()(double s) const;
    /// int_0^s
    double integral(double s) const;
    double length() const noexcept { return pieces_.back().s1; }
    const std::vector<Piece>& pieces() const noexcept { return pieces_; }

private:
    std::vector<Piece> pieces_;
};

/// Piecewise-linear interpolant of f* at its s-breakpoints (plus `extra`
/// interior samples per stretch). `l1_error` receives int |f* - interpolant|.
PiecewiseLinear approximate_rearrangement(const RearrangedFunction& fstar, int extra, double* l1_error = nullptr);

struct RadialProblem {
    int n = 2;
    double R = 1.0;
    double beta = 1.0;
    double kappa = 0.0;  ///< k_n = |{H° < 1}|
    PiecewiseLinear fstar = PiecewiseLinear::constant(1.0, 1.0);

    /// Problem on the Wulff shape of radius R of `norm`, with f* defined on
    /// [0, k_n R^n].
    static RadialProblem on_wulff(const AnisotropicNorm& norm, double R, double beta, PiecewiseLinear fstar);
    /// Same, with f identically `f` on W_R.
    static RadialProblem constant_load(const AnisotropicNorm& norm, double R, double beta, double f = 1.0);

    double measure() const;
    void validate() const;
};

/// Closed-form solution v(r), r = H°(x), of the symmetrized Robin problem on a
/// Wulff shape. All integrals of f* are evaluated exactly per piece.
class RadialSolution {
public:
    explicit RadialSolution(RadialProblem p);

    const RadialProblem& problem() const noexcept { return p_; }
    double R() const noexcept { return p_.R; }
    int n() const noexcept { return p_.n; }
    double kappa() const noexcept { return p_.kappa; }
    double measure() const { return p_.measure(); }

    double operator()(double r) const { return eval(r); }
    double eval(double r) const;
    double derivative(double r) const;
    double v_min() const noexcept { return v_R_; }
    double v_max() const noexcept { return v_0_; }
    /// int_0^{k_n R^n} f*
    double load() const noexcept { return F_S_; }

    /// r with v(r) = t for v_min <= t <= v_max.
    double radius_at_level(double t) const;
    /// Radii where f* has knots (v is only piecewise smooth there).
    std::vector<double> knot_radii() const;

    /// (int_{W_R} |v|^q)^(1/q) by radial quadrature.
    double lq_norm(double q) const;

    void write_csv(std::ostream& out, int samples = 200) const;

private:
    struct Segment {
        double s0, s1;
        double alpha, lin, quad;  ///< F(s) = alpha + lin s + quad s^2 on [s0, s1]
        double tail;              ///< int_{s1}^{S} of the outer integrand
    };

    double primitive(const Segment& g, double s) const;
    double F(double s) const;
    const Segment& segment_at(double s) const;

    RadialProblem p_;
    std::vector<Segment> segments_;
    double C_ = 0.0;  ///< n^2 k_n^(2/n)
    double F_S_ = 0.0;
    double v_R_ = 0.0;
    double v_0_ = 0.0;
};

inline RadialSolution solve_radial(const RadialProblem& p) { return RadialSolution(p); }

struct WulffLoad {
    double R = 1.0;
    double f = 1.0;
};

/// Exact solution on a disjoint union of Wulff shapes with constant loads:
/// each component is an independent radial problem.
std::vector<RadialSolution> multi_wulff_solution(std::span<const WulffLoad> components, const AnisotropicNorm& norm,
                                                 double beta);

/// phi(t) = k_n r(t)^n, with phi = |Omega*| below v_min; exact up to the
/// inversion of v.
DistributionFunction distribution_of_radial(const RadialSolution& v);
/// Distribution of the function equal to each solution on its own component.
DistributionFunction distribution_of_radial(std::span<const RadialSolution> parts);

/// Total (int |v|^q over all components)^(1/q).
double lq_norm(std::span<const RadialSolution> parts, double q);

}  // namespace talenti
