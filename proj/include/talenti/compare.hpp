#pragma once

#include "talenti/fem.hpp"
#include "talenti/mesh.hpp"
#include "talenti/radial.hpp"
#include "talenti/rearrange.hpp"

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace talenti {

/// Load f: one constant per connected component, or a sampled density.
using LoadSpec = std::variant<std::vector<double>, std::function<double(const Vec2&)>>;

struct ComparisonCase {
    std::string name = "case";
    DomainSpec domain;
    AnisotropicNorm norm = AnisotropicNorm::euclidean(2);
    double beta = 1.0;
    LoadSpec f = std::vector<double>{1.0};
    int refinement_levels = 0;
    int wulff_segments = 256;
    SolveOptions solver;
};

struct CheckRecord {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string note;
};

CheckRecord make_check(std::string name, double lhs, double rhs, double margin, double tolerance,
                       std::string note = {});

/// One row of a named-column table.
using TableRow = std::vector<std::pair<std::string, double>>;

struct ComparisonReport {
    std::string name;
    std::vector<CheckRecord> checks;
    std::vector<TableRow> table;  ///< convergence across levels, or raw data
    std::vector<std::pair<std::string, double>> info;
    std::vector<std::string> notes;

    bool all_pass() const;
    void append(const ComparisonReport& other);
};

/// Everything one refinement level of a case produces.
struct CaseSolution {
    int level = 0;
    double h = 0.0;
    MeshPtr mesh;
    ScalarField f;
    SolveResult u;
    double measure = 0.0;
    double R = 0.0;
    PiecewiseLinear fstar = PiecewiseLinear::constant(1.0, 1.0);
    double fstar_l1_error = 0.0;  ///< 0 when f* is exact
    std::optional<RadialSolution> v;
    MeshPtr target;  ///< Omega*, centered at the origin
    int components = 1;
};

CaseSolution solve_case(const ComparisonCase& c, int level);

/// tol(h) = c * h.
struct Tolerance {
    double c = 0.0;
    double operator()(double h) const { return c * h; }
};

struct Calibration {
    Tolerance pointwise;  ///< absolute, in units of u
    Tolerance lorentz;    ///< relative to the norm of v
    double equality_error = 0.0;
    double equality_lorentz_error = 0.0;
    double h = 0.0;
};

/// Calibrate tol(h) on the equality case Omega = Omega* (f = 1) at the mesh size
/// of the given case and level, with a safety factor of 2.
Calibration calibrate(const ComparisonCase& c, int level);

/// The p-grid: 8 log-spaced points on [endpoint / 10, endpoint], endpoint included.
std::vector<double> p_grid(double endpoint, int points = 8);

std::vector<CheckRecord> check_umin_vmin(const ComparisonCase& c, const CaseSolution& s, const Calibration& cal);

struct PointwiseResult {
    std::vector<CheckRecord> checks;
    double max_violation = 0.0;      ///< max over Omega* nodes of u* - v
    double violation_measure = 0.0;  ///< lumped measure of {u* > v}
    ScalarField ustar;
};

PointwiseResult check_pointwise_n2(const ComparisonCase& c, const CaseSolution& s, const Calibration& cal);

/// Lorentz comparisons of the FEM case against the radial solution.
std::vector<CheckRecord> check_lorentz_theorems(const ComparisonCase& c, const CaseSolution& s,
                                                const Calibration& cal);

/// Closed-form Lorentz comparisons on a disjoint union of Wulff shapes with
/// constant loads (any dimension). Covers both norm families of each theorem
/// whose hypotheses hold.
std::vector<CheckRecord> check_lorentz_closed_form(const AnisotropicNorm& norm, std::span<const WulffLoad> components,
                                                   double beta, double tolerance = 1e-8);

/// Exact f* of a load that is constant on components of the given measures.
PiecewiseLinear piecewise_constant_rearrangement(std::vector<double> values, std::vector<double> measures);

/// Level-set identities of the radial solution on W_R (closed form).
std::vector<CheckRecord> check_lemma_identities(const AnisotropicNorm& norm, double R, double beta,
                                                const PiecewiseLinear& fstar, int samples = 50);

struct CounterexampleReport {
    int n = 2;
    std::vector<double> r;
    std::vector<double> delta;       ///< ||u|| - ||v|| per radius
    std::vector<double> normalized;  ///< delta / r^m
    std::vector<double> richardson;  ///< limits from consecutive pairs
    double estimate = 0.0;           ///< intercept of the fit delta / r^m = c + d r^m
    double power_fit = 0.0;          ///< least squares of delta against c r^m
    double fit_residual = 0.0;       ///< RMS residual of the intercept fit
    double slope = 0.0;              ///< log-log slope of delta against r
    bool pass = false;
};

/// Two Wulff shapes of radii 1 and r0, f = 1 on the first and 0 on the
/// second: L^inf gap against the symmetrized problem (n = 2, fit c r0^2).
CounterexampleReport counterexample_61(std::span<const double> radii, const AnisotropicNorm& norm, double beta = 0.5);
/// The same geometry in 3D: L^2 gap, fit d r0^3.
CounterexampleReport counterexample_62(std::span<const double> radii, const AnisotropicNorm& norm, double beta = 0.5);

struct BosselDanersResult {
    double lambda_domain = 0.0;
    double lambda_wulff = 0.0;
    CheckRecord check;
    bool domain_is_wulff = false;
};

BosselDanersResult bossel_daners_check(const ComparisonCase& c, int level, const Calibration& cal,
                                       const EigenOptions& opts = {});

/// Full harness: every level, every applicable check, convergence table.
ComparisonReport run_comparison(const ComparisonCase& c, bool with_eigen = false);

/// Data for the open questions (L^1 comparison for n >= 3, pointwise
/// comparison for n = 3) on closed-form two-ball geometries; nothing asserted.
ComparisonReport explore_open_problems(std::span<const double> radii, std::span<const double> loads, double beta);

}  // namespace talenti
