#pragma once

#include "talenti/anisotropy.hpp"
#include "talenti/mesh.hpp"

#include <Eigen/Sparse>

#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>

namespace talenti {

using MeshPtr = std::shared_ptr<const TriMesh>;
using SparseMatrix = Eigen::SparseMatrix<double>;

/// P1 nodal function on a mesh.
struct ScalarField {
    MeshPtr mesh;
    Vec values;

    ScalarField(MeshPtr m, Vec v);
    static ScalarField constant(MeshPtr m, double c);
    static ScalarField sample(MeshPtr m, const std::function<double(const Vec2&)>& f);
    /// One constant per connected component; exact in P1 because components
    /// never share vertices.
    static ScalarField per_component(MeshPtr m, const std::vector<double>& constants);

    double min() const { return values.minCoeff(); }
    double max() const { return values.maxCoeff(); }
};

void require_same_mesh(const ScalarField& a, const ScalarField& b);

// Assembly (exact for P1).
SparseMatrix mass_matrix(const TriMesh& mesh);
/// Stiffness for the quadratic form xi^T G xi: K_ab = sum_T |T| grad phi_a^T G grad phi_b.
SparseMatrix stiffness_matrix(const TriMesh& mesh, const Eigen::Matrix2d& G);
/// Boundary mass weighted by H(nu): B_ab = int_{dOmega} H(nu) phi_a phi_b.
SparseMatrix robin_matrix(const TriMesh& mesh, const AnisotropicNorm& norm);

double integral(const ScalarField& u);
/// int_{dOmega} H(nu) u
double boundary_integral_H(const ScalarField& u, const AnisotropicNorm& norm);
double l2_norm(const ScalarField& u);
/// Per-triangle constant gradients.
std::vector<Vec2> gradients(const ScalarField& u);

/// 1/2 int H^2(grad w) + beta/2 int_{dOmega} H(nu) w^2 - int f w, all integrals exact.
double energy(const ScalarField& w, const ScalarField& f, const AnisotropicNorm& norm, double beta);
/// Nodal partial derivatives of energy().
ScalarField energy_gradient(const ScalarField& w, const ScalarField& f, const AnisotropicNorm& norm, double beta);
/// int H(grad u) H_xi(grad u) . grad phi + beta int_{dOmega} H(nu) u phi - int f phi.
double weak_residual(const ScalarField& u, const ScalarField& f, const AnisotropicNorm& norm, double beta,
                     const ScalarField& test);

enum class SolveMethod { automatic, direct, newton, lbfgs };

struct SolveOptions {
    double beta = 1.0;
    /// Stop when |grad E| <= grad_tol * (1 + |load|).
    double grad_tol = 1e-10;
    int max_iters = 200;
    /// Tikhonov shift added to the Newton Hessian on triangles with |grad u| < 1e-12.
    double regularization_eps = 0.0;
    /// Permit f with negative entries (testing only).
    bool allow_signed_load = false;
    SolveMethod method = SolveMethod::automatic;
    std::optional<Vec> initial_guess;
};

struct SolveResult {
    ScalarField u;
    std::string method;
    int iterations = 0;
    double gradient_norm = 0.0;
    double load_norm = 0.0;
    std::vector<double> energy_history;
};

/// Unique discrete minimizer of energy(). Quadratic gauges take one sparse
/// LDLT solve; others take damped Newton with an L-BFGS fallback.
SolveResult solve_robin(const ScalarField& f, const AnisotropicNorm& norm, const SolveOptions& opts);

/// J[u] = (int H^2(grad u) + beta int_{dOmega} H(nu) u^2) / int u^2.
double rayleigh_quotient(const ScalarField& u, const AnisotropicNorm& norm, double beta);

struct EigenOptions {
    double tol = 1e-12;
    int max_iters = 1000;
};

struct Eigenpair {
    double lambda = 0.0;
    ScalarField u;  ///< int u^2 = 1, u >= 0
    int iterations = 0;
};

/// First Robin eigenpair via inverse iteration (nonlinear for non-quadratic gauges).
Eigenpair first_eigenpair(MeshPtr mesh, const AnisotropicNorm& norm, double beta, const EigenOptions& opts = {});

/// Field dump: vertex count, then one value per line.
void write_field(std::ostream& out, const ScalarField& u);
Vec read_field(std::istream& in);
/// CSV with header x,y,u.
void write_field_csv(std::ostream& out, const ScalarField& u);

}  // namespace talenti
