#pragma once

// Kernels of the straight-sided 10-node tetrahedron.  Node order: corners
// 0-3, then mid-edge nodes on edges 01, 12, 20, 03, 13, 23.  Natural
// coordinates are (l1, l2, l3) with l0 = 1 - l1 - l2 - l3.
//
// Stress and strain use Voigt order xx, yy, zz, yz, xz, xy with engineering
// shear strains.

#include <array>
#include <cmath>
#include <utility>

#include <Eigen/Core>
#include <Eigen/LU>

namespace rpet::fem {

template <typename Scalar>
using NodeCoords = Eigen::Matrix<Scalar, 10, 3>;

template <typename Scalar>
using Voigt = Eigen::Matrix<Scalar, 6, 1>;

inline constexpr std::array<std::array<int, 2>, 6> kEdges{{{0, 1}, {1, 2}, {2, 0}, {0, 3}, {1, 3}, {2, 3}}};

template <typename Scalar>
struct ShapeValues {
    Eigen::Matrix<Scalar, 10, 1> N;
    Eigen::Matrix<Scalar, 10, 3> dN;  // d/d(l1, l2, l3)
};

/// Quadratic shape functions and their natural-coordinate gradients at the
/// barycentric point `lambda`.
template <typename Scalar>
ShapeValues<Scalar> shape_eval(const Eigen::Matrix<Scalar, 4, 1>& lambda) {
    ShapeValues<Scalar> s;
    // dN/dlambda_k for the 4 barycentrics, then chain through l0 = 1 - sum.
    Eigen::Matrix<Scalar, 10, 4> dl = Eigen::Matrix<Scalar, 10, 4>::Zero();
    for (int i = 0; i < 4; ++i) {
        s.N(i) = lambda(i) * (Scalar(2) * lambda(i) - Scalar(1));
        dl(i, i) = Scalar(4) * lambda(i) - Scalar(1);
    }
    for (int e = 0; e < 6; ++e) {
        const int a = kEdges[e][0], b = kEdges[e][1];
        s.N(4 + e) = Scalar(4) * lambda(a) * lambda(b);
        dl(4 + e, a) = Scalar(4) * lambda(b);
        dl(4 + e, b) = Scalar(4) * lambda(a);
    }
    for (int k = 0; k < 3; ++k) s.dN.col(k) = dl.col(k + 1) - dl.col(0);
    return s;
}

/// Barycentric coordinates of the 10 element nodes.
template <typename Scalar>
std::array<Eigen::Matrix<Scalar, 4, 1>, 10> node_lambdas() {
    std::array<Eigen::Matrix<Scalar, 4, 1>, 10> out;
    for (int i = 0; i < 4; ++i) out[i] = Eigen::Matrix<Scalar, 4, 1>::Unit(i);
    for (int e = 0; e < 6; ++e)
        out[4 + e] = (Eigen::Matrix<Scalar, 4, 1>::Unit(kEdges[e][0]) + Eigen::Matrix<Scalar, 4, 1>::Unit(kEdges[e][1])) / Scalar(2);
    return out;
}

template <typename Scalar>
struct QuadraturePoint {
    Eigen::Matrix<Scalar, 4, 1> lambda;
    Scalar weight;  // on the reference tetrahedron of volume 1/6
};

/// Degree-2 exact 4-point rule.
template <typename Scalar>
std::array<QuadraturePoint<Scalar>, 4> gauss4() {
    const Scalar a = Scalar(0.5854101966249685);
    const Scalar b = Scalar(0.1381966011250105);
    const Scalar w = Scalar(1) / Scalar(24);
    std::array<QuadraturePoint<Scalar>, 4> q;
    for (int i = 0; i < 4; ++i) {
        q[i].lambda.setConstant(b);
        q[i].lambda(i) = a;
        q[i].weight = w;
    }
    return q;
}

template <typename Scalar>
Eigen::Matrix<Scalar, 6, 6> elasticity_matrix(Scalar E, Scalar nu) {
    const Scalar c = E / ((Scalar(1) + nu) * (Scalar(1) - Scalar(2) * nu));
    Eigen::Matrix<Scalar, 6, 6> D = Eigen::Matrix<Scalar, 6, 6>::Zero();
    D.template topLeftCorner<3, 3>().setConstant(c * nu);
    for (int i = 0; i < 3; ++i) {
        D(i, i) = c * (Scalar(1) - nu);
        D(3 + i, 3 + i) = c * (Scalar(1) - Scalar(2) * nu) / Scalar(2);
    }
    return D;
}

template <typename Scalar>
struct PointKinematics {
    Eigen::Matrix<Scalar, 6, 30> B;
    Scalar det_j;
};

/// Strain-displacement matrix at `lambda`.  det_j is six times the corner
/// volume for straight-sided elements; callers reject det_j <= 0.
template <typename Scalar>
PointKinematics<Scalar> strain_displacement(const NodeCoords<Scalar>& X, const Eigen::Matrix<Scalar, 4, 1>& lambda) {
    const ShapeValues<Scalar> s = shape_eval(lambda);
    const Eigen::Matrix<Scalar, 3, 3> J = s.dN.transpose() * X;  // J(i, k) = dx_k / dl_i
    PointKinematics<Scalar> pk;
    pk.det_j = J.determinant();
    const Eigen::Matrix<Scalar, 10, 3> G = s.dN * J.inverse().transpose();
    pk.B.setZero();
    for (int a = 0; a < 10; ++a) {
        const int c = 3 * a;
        pk.B(0, c) = G(a, 0);
        pk.B(1, c + 1) = G(a, 1);
        pk.B(2, c + 2) = G(a, 2);
        pk.B(3, c + 1) = G(a, 2);
        pk.B(3, c + 2) = G(a, 1);
        pk.B(4, c) = G(a, 2);
        pk.B(4, c + 2) = G(a, 0);
        pk.B(5, c) = G(a, 1);
        pk.B(5, c + 1) = G(a, 0);
    }
    return pk;
}

/// Signed volume of the corner tetrahedron.
template <typename Derived>
typename Derived::Scalar corner_volume(const Eigen::MatrixBase<Derived>& X) {
    using S = typename Derived::Scalar;
    Eigen::Matrix<S, 3, 3> M;
    for (int k = 1; k < 4; ++k) M.col(k - 1) = (X.row(k) - X.row(0)).transpose();
    return M.determinant() / S(6);
}

/// 30x30 stiffness; returns an empty (0x0) matrix when the Jacobian is not
/// positive at some quadrature point.
template <typename Scalar>
Eigen::Matrix<Scalar, 30, 30> element_stiffness(const NodeCoords<Scalar>& X, const Eigen::Matrix<Scalar, 6, 6>& D,
                                                bool* degenerate = nullptr) {
    Eigen::Matrix<Scalar, 30, 30> K = Eigen::Matrix<Scalar, 30, 30>::Zero();
    if (degenerate) *degenerate = false;
    for (const auto& q : gauss4<Scalar>()) {
        const auto pk = strain_displacement(X, q.lambda);
        if (!(pk.det_j > Scalar(0))) {
            if (degenerate) *degenerate = true;
            return Eigen::Matrix<Scalar, 30, 30>::Zero();
        }
        K.noalias() += pk.B.transpose() * D * pk.B * (q.weight * pk.det_j);
    }
    return K;
}

template <typename Scalar>
Eigen::Matrix<Scalar, 3, 3> to_tensor(const Voigt<Scalar>& s) {
    Eigen::Matrix<Scalar, 3, 3> t;
    t << s(0), s(5), s(4), s(5), s(1), s(3), s(4), s(3), s(2);
    return t;
}

template <typename Scalar>
Voigt<Scalar> to_voigt(const Eigen::Matrix<Scalar, 3, 3>& t) {
    Voigt<Scalar> s;
    s << t(0, 0), t(1, 1), t(2, 2), t(1, 2), t(0, 2), t(0, 1);
    return s;
}

template <typename Scalar>
Scalar von_mises(const Voigt<Scalar>& s) {
    using std::sqrt;
    const Scalar dxy = s(0) - s(1), dyz = s(1) - s(2), dzx = s(2) - s(0);
    return sqrt((dxy * dxy + dyz * dyz + dzx * dzx) / Scalar(2) +
                Scalar(3) * (s(3) * s(3) + s(4) * s(4) + s(5) * s(5)));
}

template <typename Scalar>
Scalar von_mises(const Eigen::Matrix<Scalar, 3, 3>& t) {
    return von_mises<Scalar>(to_voigt<Scalar>(t));
}

/// 6*sqrt(2)*V / l_rms^3 over the corner edges; 1 for the regular
/// tetrahedron, 0 for a flat one.  Inverted elements give 0 as well.
template <typename Derived>
typename Derived::Scalar tet_quality(const Eigen::MatrixBase<Derived>& X) {
    using S = typename Derived::Scalar;
    using std::sqrt;
    S sum = S(0);
    for (const auto& e : kEdges) sum += (X.row(e[0]) - X.row(e[1])).squaredNorm();
    const S l_rms = sqrt(sum / S(6));
    if (!(l_rms > S(0))) return S(0);
    const S v = corner_volume(X);
    if (!(v > S(0))) return S(0);
    return S(6) * sqrt(S(2)) * v / (l_rms * l_rms * l_rms);
}

}  // namespace rpet::fem
