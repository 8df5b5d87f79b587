#pragma once

// Linear static analysis on a Tet10 mesh: assembly, face traction, Dirichlet
// elimination, sparse solve, stress recovery and reactions.

#include <array>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "rpet/core_model.hpp"
#include "rpet/fem/mesh.hpp"

namespace rpet::fem {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Global stiffness, 3 DOFs per node (x, y, z), accumulated in element order.
/// ValidationError naming the element for a non-positive Jacobian.
SparseMatrix assemble(const Mesh& mesh, const MaterialCard& material);

/// Consistent nodal loads of a uniform traction totalling `total_force`
/// along `direction` over the face set.  DomainError for zero total area.
Eigen::VectorXd distribute_face_load(const Mesh& mesh, const std::string& face_set, double total_force,
                                     const Eigen::Vector3d& direction);

struct Support {
    std::string node_set;
    std::array<bool, 3> fixed{true, true, true};  // x, y, z
};

struct ConstrainedSystem {
    SparseMatrix K;
    Eigen::VectorXd f;
    std::vector<char> constrained;  // per DOF
};

/// Zero rows and columns of the constrained DOFs, diagonal set to the mean
/// diagonal magnitude of K.  Homogeneous constraints only.  ValidationError
/// "no boundary conditions" when nothing ends up constrained.
ConstrainedSystem apply_dirichlet(const SparseMatrix& K, const Eigen::VectorXd& f, const Mesh& mesh,
                                  const std::vector<Support>& supports);

enum class SolverMethod { Direct, ConjugateGradient };

struct SolverOptions {
    SolverMethod method = SolverMethod::Direct;
    double tolerance = 1e-10;  // relative residual
    int max_iterations = 0;    // CG only; 0 picks 10 * n
};

struct SolveResult {
    Eigen::VectorXd u;
    double relative_residual = 0.0;
    int iterations = 0;
};

/// SolverError (with the residual reached) when the system is not positive
/// definite or the residual contract is not met.
SolveResult solve(const ConstrainedSystem& system, const SolverOptions& opts = {});

struct StressField {
    /// Per element, Voigt stress at each of the 4 quadrature points.
    std::vector<std::array<Voigt<double>, 4>> element_stresses;
    /// Volume-weighted average of element nodal stress tensors.
    std::vector<Voigt<double>> nodal_stresses;
    Eigen::VectorXd nodal_von_mises;
    double max_point_von_mises = 0.0;
    double max_nodal_von_mises = 0.0;
};

StressField recover_stress(const Mesh& mesh, const MaterialCard& material, const Eigen::VectorXd& u);

struct Reaction {
    int node = 0;
    Eigen::Vector3d force = Eigen::Vector3d::Zero();  // N, zero on free components
};

/// R = K u - f on constrained DOFs, using the unconstrained K.
std::vector<Reaction> reactions(const SparseMatrix& K, const Eigen::VectorXd& u, const Eigen::VectorXd& f,
                                const std::vector<char>& constrained);

struct LoadCase {
    double total_force = 0.0;  // N
    Eigen::Vector3d direction = -Eigen::Vector3d::UnitZ();
    std::string loaded_face_set = "top";
    std::vector<Support> supports{{"base", {true, true, true}}};

    /// Clamp `fixed_node_set`, load `face_set`.
    static LoadCase clamped(double force, const Eigen::Vector3d& direction, std::string face_set,
                            std::string fixed_node_set);
    /// Base restrained axially only, plus two single-node lateral supports
    /// that remove the rigid in-plane motions without restraining Poisson
    /// contraction.
    static LoadCase roller(double force, const Eigen::Vector3d& direction, std::string face_set,
                           std::string base_set, std::string pin_set, std::string guide_set);

    /// |direction| = 1 within 1e-12 and all named sets exist and are
    /// non-empty.  Throws ValidationError.
    void validate(const Mesh& mesh) const;
};

struct FemSolution {
    Eigen::Matrix<double, Eigen::Dynamic, 3> displacements;  // per node, mm
    StressField stress;
    std::vector<Reaction> reactions;
    Eigen::Vector3d applied_load = Eigen::Vector3d::Zero();
    Eigen::Vector3d reaction_sum = Eigen::Vector3d::Zero();
    double max_displacement_magnitude = 0.0;
    double max_von_mises = 0.0;        // integration points
    double max_nodal_von_mises = 0.0;  // averaged field
    double relative_residual = 0.0;

    /// |sum R + applied| / |applied|, 0 for an unloaded case.
    double equilibrium_error() const;
};

FemSolution run_static_analysis(const Mesh& mesh, const MaterialCard& material, const LoadCase& load,
                                const SolverOptions& opts = {});

/// CSV `node,x_mm,y_mm,z_mm,ux_mm,uy_mm,uz_mm,von_mises_mpa`.
std::string format_nodal_csv(const Mesh& mesh, const FemSolution& solution);
/// Summary JSON with mesh statistics, maxima and reaction sums.
std::string format_summary_json(const Mesh& mesh, const FemSolution& solution, const MaterialCard& material,
                                const LoadCase& load);

}  // namespace rpet::fem
