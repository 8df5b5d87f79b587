#include "rpet/fem/analysis.hpp"

#include <cmath>
#include <cstdio>

#include <Eigen/Geometry>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <json.hpp>

#include "rpet/error.hpp"

namespace rpet::fem {

namespace {

Eigen::Matrix<double, 30, 1> element_dofs(const Mesh& m, std::size_t e, const Eigen::VectorXd& u) {
    Eigen::Matrix<double, 30, 1> ue;
    for (int a = 0; a < 10; ++a) ue.segment<3>(3 * a) = u.segment<3>(3 * m.elements[e][a]);
    return ue;
}

template <typename F>
auto staged(const char* stage, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (Error& e) {
        e.set_stage(stage);
        throw;
    }
}

}  // namespace

SparseMatrix assemble(const Mesh& m, const MaterialCard& material) {
    material.validate();
    const auto D = elasticity_matrix(material.youngs_modulus, material.poisson_ratio);
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(m.elements.size() * 900);
    for (std::size_t e = 0; e < m.elements.size(); ++e) {
        bool degenerate = false;
        const auto Ke = element_stiffness(m.coords(e), D, &degenerate);
        if (degenerate) throw ValidationError("element " + std::to_string(e) + ": degenerate Jacobian");
        for (int a = 0; a < 10; ++a)
            for (int b = 0; b < 10; ++b)
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j)
                        trips.emplace_back(3 * m.elements[e][a] + i, 3 * m.elements[e][b] + j, Ke(3 * a + i, 3 * b + j));
    }
    const auto n = static_cast<Eigen::Index>(m.dofs());
    SparseMatrix K(n, n);
    K.setFromTriplets(trips.begin(), trips.end());
    return K;
}

Eigen::VectorXd distribute_face_load(const Mesh& m, const std::string& face_set, double total_force,
                                     const Eigen::Vector3d& direction) {
    const auto it = m.face_sets.find(face_set);
    if (it == m.face_sets.end() || it->second.empty())
        throw ValidationError("face set '" + face_set + "' is missing or empty");
    std::vector<double> areas;
    double total_area = 0.0;
    for (const auto& f : it->second) {
        const Eigen::Vector3d& a = m.nodes[f[0]];
        const double A = 0.5 * (m.nodes[f[1]] - a).cross(m.nodes[f[2]] - a).norm();
        areas.push_back(A);
        total_area += A;
    }
    if (!(total_area > 0.0)) throw DomainError("face set '" + face_set + "' has zero area");
    Eigen::VectorXd load = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m.dofs()));
    const double traction = total_force / total_area;
    // Quadratic corner functions integrate to zero over a straight triangle,
    // each mid-edge function to A/3.
    for (std::size_t k = 0; k < areas.size(); ++k)
        for (int a = 3; a < 6; ++a) load.segment<3>(3 * it->second[k][a]) += traction * areas[k] / 3.0 * direction;
    return load;
}

ConstrainedSystem apply_dirichlet(const SparseMatrix& K, const Eigen::VectorXd& f, const Mesh& m,
                                  const std::vector<Support>& supports) {
    ConstrainedSystem s;
    s.constrained.assign(static_cast<std::size_t>(K.rows()), 0);
    for (const auto& sup : supports) {
        const auto it = m.node_sets.find(sup.node_set);
        if (it == m.node_sets.end()) throw ValidationError("node set '" + sup.node_set + "' does not exist");
        for (int node : it->second)
            for (int c = 0; c < 3; ++c)
                if (sup.fixed[c]) s.constrained[3 * static_cast<std::size_t>(node) + c] = 1;
    }
    if (std::find(s.constrained.begin(), s.constrained.end(), 1) == s.constrained.end())
        throw ValidationError("no boundary conditions");

    const double diag = K.diagonal().cwiseAbs().mean();
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(K.nonZeros()));
    for (Eigen::Index col = 0; col < K.outerSize(); ++col)
        for (SparseMatrix::InnerIterator it(K, col); it; ++it)
            if (!s.constrained[it.row()] && !s.constrained[it.col()]) trips.emplace_back(it.row(), it.col(), it.value());
    for (Eigen::Index i = 0; i < K.rows(); ++i)
        if (s.constrained[i]) trips.emplace_back(i, i, diag);
    s.K.resize(K.rows(), K.cols());
    s.K.setFromTriplets(trips.begin(), trips.end());
    s.f = f;
    for (Eigen::Index i = 0; i < f.size(); ++i)
        if (s.constrained[i]) s.f(i) = 0.0;
    return s;
}

SolveResult solve(const ConstrainedSystem& s, const SolverOptions& opts) {
    SolveResult r;
    const double fnorm = s.f.norm();
    if (fnorm == 0.0) {
        r.u = Eigen::VectorXd::Zero(s.f.size());
        return r;
    }
    auto residual = [&](const Eigen::VectorXd& u) { return (s.f - s.K * u).norm() / fnorm; };

    if (opts.method == SolverMethod::Direct) {
        Eigen::SimplicialLDLT<SparseMatrix> ldlt(s.K);
        if (ldlt.info() != Eigen::Success) throw SolverError("factorization failed", INFINITY);
        if (!(ldlt.vectorD().minCoeff() > 0.0)) throw SolverError("stiffness matrix is not positive definite", INFINITY);
        r.u = ldlt.solve(s.f);
        r.relative_residual = residual(r.u);
        r.iterations = 1;
        if (r.relative_residual > opts.tolerance) {
            r.u += ldlt.solve(s.f - s.K * r.u);
            r.relative_residual = residual(r.u);
            r.iterations = 2;
        }
    } else {
        const int cap = opts.max_iterations > 0 ? opts.max_iterations : static_cast<int>(10 * s.f.size());
        Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper, Eigen::IncompleteCholesky<double>> cg;
        cg.setTolerance(opts.tolerance);
        cg.setMaxIterations(cap);
        cg.compute(s.K);
        if (cg.info() == Eigen::Success) {
            r.u = cg.solve(s.f);
            r.iterations = static_cast<int>(cg.iterations());
        } else {
            Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper> jacobi;
            jacobi.setTolerance(opts.tolerance);
            jacobi.setMaxIterations(cap);
            jacobi.compute(s.K);
            r.u = jacobi.solve(s.f);
            r.iterations = static_cast<int>(jacobi.iterations());
        }
        r.relative_residual = residual(r.u);
    }
    if (!(r.relative_residual <= opts.tolerance))
        throw SolverError("relative residual " + std::to_string(r.relative_residual) + " above tolerance",
                          r.relative_residual);
    return r;
}

StressField recover_stress(const Mesh& m, const MaterialCard& material, const Eigen::VectorXd& u) {
    const auto D = elasticity_matrix(material.youngs_modulus, material.poisson_ratio);
    const auto gauss = gauss4<double>();
    const auto at_nodes = node_lambdas<double>();
    StressField s;
    s.element_stresses.resize(m.elements.size());
    s.nodal_stresses.assign(m.nodes.size(), Voigt<double>::Zero());
    std::vector<double> weight(m.nodes.size(), 0.0);
    for (std::size_t e = 0; e < m.elements.size(); ++e) {
        const auto X = m.coords(e);
        const auto ue = element_dofs(m, e, u);
        for (int g = 0; g < 4; ++g) {
            const auto pk = strain_displacement(X, gauss[g].lambda);
            s.element_stresses[e][g] = D * (pk.B * ue);
            s.max_point_von_mises = std::max(s.max_point_von_mises, von_mises(s.element_stresses[e][g]));
        }
        const double vol = corner_volume(X);
        for (int a = 0; a < 10; ++a) {
            const auto pk = strain_displacement(X, at_nodes[a]);
            s.nodal_stresses[m.elements[e][a]] += vol * (D * (pk.B * ue));
            weight[m.elements[e][a]] += vol;
        }
    }
    s.nodal_von_mises.resize(static_cast<Eigen::Index>(m.nodes.size()));
    for (std::size_t n = 0; n < m.nodes.size(); ++n) {
        if (weight[n] > 0.0) s.nodal_stresses[n] /= weight[n];
        s.nodal_von_mises(static_cast<Eigen::Index>(n)) = von_mises(s.nodal_stresses[n]);
    }
    s.max_nodal_von_mises = s.nodal_von_mises.size() ? s.nodal_von_mises.maxCoeff() : 0.0;
    return s;
}

std::vector<Reaction> reactions(const SparseMatrix& K, const Eigen::VectorXd& u, const Eigen::VectorXd& f,
                                const std::vector<char>& constrained) {
    const Eigen::VectorXd r = K * u - f;
    std::vector<Reaction> out;
    for (std::size_t node = 0; 3 * node < constrained.size(); ++node) {
        Reaction rx{static_cast<int>(node), Eigen::Vector3d::Zero()};
        bool any = false;
        for (int c = 0; c < 3; ++c)
            if (constrained[3 * node + c]) {
                rx.force(c) = r(static_cast<Eigen::Index>(3 * node + c));
                any = true;
            }
        if (any) out.push_back(rx);
    }
    return out;
}

LoadCase LoadCase::clamped(double force, const Eigen::Vector3d& direction, std::string face_set,
                           std::string fixed_node_set) {
    LoadCase lc;
    lc.total_force = force;
    lc.direction = direction;
    lc.loaded_face_set = std::move(face_set);
    lc.supports = {{std::move(fixed_node_set), {true, true, true}}};
    return lc;
}

LoadCase LoadCase::roller(double force, const Eigen::Vector3d& direction, std::string face_set,
                          std::string base_set, std::string pin_set, std::string guide_set) {
    LoadCase lc;
    lc.total_force = force;
    lc.direction = direction;
    lc.loaded_face_set = std::move(face_set);
    lc.supports = {{std::move(base_set), {false, false, true}},
                   {std::move(pin_set), {true, true, false}},
                   {std::move(guide_set), {false, true, false}}};
    return lc;
}

void LoadCase::validate(const Mesh& m) const {
    if (!(std::abs(direction.norm() - 1.0) <= 1e-12)) throw ValidationError("load direction must be a unit vector");
    if (!std::isfinite(total_force)) throw ValidationError("load must be finite");
    const auto f = m.face_sets.find(loaded_face_set);
    if (f == m.face_sets.end() || f->second.empty())
        throw ValidationError("face set '" + loaded_face_set + "' is missing or empty");
    if (supports.empty()) throw ValidationError("no boundary conditions");
    for (const auto& s : supports) {
        const auto n = m.node_sets.find(s.node_set);
        if (n == m.node_sets.end() || n->second.empty())
            throw ValidationError("node set '" + s.node_set + "' is missing or empty");
    }
}

double FemSolution::equilibrium_error() const {
    const double applied = applied_load.norm();
    const double gap = (reaction_sum + applied_load).norm();
    return applied > 0.0 ? gap / applied : gap;
}

FemSolution run_static_analysis(const Mesh& mesh, const MaterialCard& material, const LoadCase& load,
                                const SolverOptions& opts) {
    staged("validate", [&] {
        material.validate();
        validate_mesh(mesh);
        load.validate(mesh);
        return 0;
    });
    const SparseMatrix K = staged("assemble", [&] { return assemble(mesh, material); });
    const Eigen::VectorXd f = staged("load", [&] {
        return distribute_face_load(mesh, load.loaded_face_set, load.total_force, load.direction);
    });
    const ConstrainedSystem sys = staged("constrain", [&] { return apply_dirichlet(K, f, mesh, load.supports); });
    const SolveResult sr = staged("solve", [&] { return solve(sys, opts); });

    FemSolution sol;
    sol.relative_residual = sr.relative_residual;
    sol.displacements = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor>>(
        sr.u.data(), static_cast<Eigen::Index>(mesh.nodes.size()), 3);
    sol.stress = staged("recover", [&] { return recover_stress(mesh, material, sr.u); });
    sol.reactions = reactions(K, sr.u, f, sys.constrained);
    for (const auto& r : sol.reactions) sol.reaction_sum += r.force;
    for (Eigen::Index i = 0; i < f.size(); i += 3) sol.applied_load += f.segment<3>(i);
    sol.max_displacement_magnitude = sol.displacements.rowwise().norm().maxCoeff();
    sol.max_von_mises = sol.stress.max_point_von_mises;
    sol.max_nodal_von_mises = sol.stress.max_nodal_von_mises;
    return sol;
}

std::string format_nodal_csv(const Mesh& mesh, const FemSolution& s) {
    std::string out = "node,x_mm,y_mm,z_mm,ux_mm,uy_mm,uz_mm,von_mises_mpa\n";
    char buf[256];
    for (std::size_t n = 0; n < mesh.nodes.size(); ++n) {
        const auto& p = mesh.nodes[n];
        const auto i = static_cast<Eigen::Index>(n);
        std::snprintf(buf, sizeof buf, "%zu,%.9g,%.9g,%.9g,%.9e,%.9e,%.9e,%.9g\n", n, p.x(), p.y(), p.z(),
                      s.displacements(i, 0), s.displacements(i, 1), s.displacements(i, 2), s.stress.nodal_von_mises(i));
        out += buf;
    }
    return out;
}

std::string format_summary_json(const Mesh& mesh, const FemSolution& s, const MaterialCard& material,
                                const LoadCase& load) {
    const MeshStats st = mesh_stats(mesh);
    auto vec = [](const Eigen::Vector3d& v) { return nlohmann::ordered_json::array({v.x(), v.y(), v.z()}); };
    nlohmann::ordered_json j;
    j["mesh"] = {{"n_elements", st.n_elements}, {"n_nodes", st.n_nodes}, {"avg_quality", st.avg_quality},
                 {"min_quality", st.min_quality}};
    j["material"] = {{"name", material.name}, {"youngs_modulus_mpa", material.youngs_modulus},
                     {"poisson_ratio", material.poisson_ratio}};
    nlohmann::ordered_json sup = nlohmann::ordered_json::array();
    for (const auto& x : load.supports)
        sup.push_back({{"node_set", x.node_set}, {"fixed", {x.fixed[0], x.fixed[1], x.fixed[2]}}});
    j["load"] = {{"total_force_n", load.total_force}, {"direction", vec(load.direction)},
                 {"face_set", load.loaded_face_set}, {"supports", sup}};
    j["max_displacement_magnitude_mm"] = s.max_displacement_magnitude;
    j["max_axial_displacement_mm"] = s.displacements.col(2).cwiseAbs().maxCoeff();
    j["max_von_mises_mpa"] = s.max_von_mises;
    j["max_nodal_von_mises_mpa"] = s.max_nodal_von_mises;
    j["applied_load_n"] = vec(s.applied_load);
    j["reaction_sum_n"] = vec(s.reaction_sum);
    j["equilibrium_error"] = s.equilibrium_error();
    j["relative_residual"] = s.relative_residual;
    return j.dump(2) + "\n";
}

}  // namespace rpet::fem
