#pragma once

#include "talenti/fem.hpp"

#include <functional>
#include <iosfwd>
#include <variant>
#include <vector>

namespace talenti {

/// mu(t) = |{u > t}|. Non-increasing and right-continuous; equal to the total
/// measure below the essential infimum and to 0 from the essential supremum on.
///
/// Built from parts that add up: exact piecewise quadratics (P1 fields) and
/// smooth monotone profiles (radial solutions).
class DistributionFunction {
public:
    /// mu = c0 + c1 x + c2 x^2 with x = t - knot on [knot, next knot).
    struct Quadratic {
        double c0 = 0.0, c1 = 0.0, c2 = 0.0;
    };

    /// Strictly decreasing smooth part: `full` for t < lo, value(t) on
    /// [lo, hi), 0 from hi on. `knots` are interior points where the profile is
    /// only piecewise smooth.
    struct Profile {
        double lo = 0.0, hi = 0.0, full = 0.0;
        std::function<double(double)> value;
        std::function<double(double)> slope;
        std::vector<double> knots;
    };

    DistributionFunction() = default;

    /// pieces.size() + 1 == knots.size(); knots strictly increasing.
    static DistributionFunction piecewise_quadratic(std::vector<double> knots, std::vector<Quadratic> pieces,
                                                    double total);
    /// `measure` for t < level, 0 from level on.
    static DistributionFunction step(double level, double measure);
    static DistributionFunction profile(Profile p);

    /// Distribution of the function that equals each summand on disjoint sets.
    DistributionFunction& operator+=(const DistributionFunction& other);
    friend DistributionFunction operator+(DistributionFunction a, const DistributionFunction& b) { return a += b; }

    double operator()(double t) const;
    /// One-sided derivative from the right (0 on flat stretches).
    double derivative(double t) const;

    double total_measure() const noexcept { return total_; }
    double ess_inf() const noexcept { return lo_; }
    double ess_sup() const noexcept { return hi_; }
    /// Sorted points in [ess_inf, ess_sup] between which mu is smooth.
    std::vector<double> breakpoints() const;

    /// Single exact piecewise quadratic (the shape produced for P1 fields).
    bool is_piecewise_quadratic() const;

private:
    struct QuadraticPart {
        std::vector<double> knots;
        std::vector<Quadratic> pieces;
        double total = 0.0;
        double value(double t) const;
        double slope(double t) const;
    };
    using Part = std::variant<QuadraticPart, Profile>;

    void add_part(Part part);
    double inverse_quadratic(double s) const;

    std::vector<Part> parts_;
    double total_ = 0.0;
    double lo_ = 0.0, hi_ = 0.0;

    friend class RearrangedFunction;
    friend double lorentz_norm(const DistributionFunction& mu, double p, double q);
};

/// Decreasing rearrangement f*(s) = inf{t : mu(t) < s} on (0, |Omega|].
class RearrangedFunction {
public:
    explicit RearrangedFunction(DistributionFunction mu);

    double operator()(double s) const;
    double total_measure() const noexcept { return mu_.total_measure(); }
    const DistributionFunction& distribution() const noexcept { return mu_; }

    /// Values of s at which f* may fail to be smooth.
    std::vector<double> breakpoints() const;

    /// int_a^b g(f*(s)) ds, split at the breakpoints.
    double integrate(const std::function<double(double)>& g, double a, double b) const;

private:
    DistributionFunction mu_;
};

/// Exact |{u > t}| for the P1 interpolant.
double level_set_area(const ScalarField& u, double t);

/// Exact distribution of a P1 field: piecewise quadratic between consecutive
/// nodal values, jumps only where the field is flat on whole triangles.
DistributionFunction distribution_of_field(const ScalarField& u);
/// Distribution of |u| (sum of the distributions of u and -u on t >= 0).
DistributionFunction distribution_of_abs(const ScalarField& u);

RearrangedFunction decreasing_rearrangement(const DistributionFunction& mu);

/// f*(k_n H°(x - center)^n) at the vertices of `target`, which must cover a
/// Wulff shape with the same measure as the source domain.
ScalarField convex_symmetrization(const ScalarField& u, const AnisotropicNorm& norm, MeshPtr target,
                                  const Vec2& center = Vec2::Zero());
ScalarField convex_symmetrization(const RearrangedFunction& fstar, const AnisotropicNorm& norm, MeshPtr target,
                                  const Vec2& center = Vec2::Zero());

/// (p int_0^inf t^(q-1) mu(t)^(q/p) dt)^(1/q); equals the L^p norm when q = p.
double lorentz_norm(const DistributionFunction& mu, double p, double q);

/// int_0^|Omega| (f*)^p ds.
double rearranged_power_integral(const RearrangedFunction& fstar, double p);

struct HardyLittlewoodReport {
    double lhs = 0.0;     ///< int |f g|
    double rhs = 0.0;     ///< int_0^|Omega| f* g*
    double margin = 0.0;  ///< rhs - lhs
};

HardyLittlewoodReport hardy_littlewood_check(const ScalarField& f, const ScalarField& g);

/// int |f g| over the mesh, exact for P1 data.
double abs_product_integral(const ScalarField& f, const ScalarField& g);

struct LevelSetPerimeter {
    double total = 0.0;
    double interior = 0.0;  ///< level polyline inside the domain
    double exterior = 0.0;  ///< part of the domain boundary where u > t
    double level = 0.0;     ///< level actually used
    bool perturbed = false;
};

/// P_H({u > t}). A level equal to a nodal value is nudged upward and flagged.
LevelSetPerimeter levelset_perimeter_H(const ScalarField& u, const AnisotropicNorm& norm, double t);

/// int over {x on the boundary : u(x) > t} of H(nu) / u.
double boundary_trace_integral(const ScalarField& u, const AnisotropicNorm& norm, double t);

/// CSV "t,mu" at the breakpoints plus `extra` interior samples per piece.
void write_distribution_csv(std::ostream& out, const DistributionFunction& mu, int extra = 4);
/// CSV "s,fstar" on a uniform grid.
void write_rearrangement_csv(std::ostream& out, const RearrangedFunction& fstar, int samples = 200);

}  // namespace talenti
