#include <array>
#include <cmath>
#include <functional>

#include "rpet/error.hpp"
#include "rpet/fem/mesh.hpp"

namespace rpet::fem {

namespace {

using Lattice = std::array<int, 3>;

// Blocks live on a lattice of doubled resolution so every mid-edge node is a
// lattice point.  Corner positions come from `corner_at` (even lattice
// points only); mid-edge positions are the midpoints of their edges.
Mesh kuhn_mesh(int nx, int ny, int nz, const std::function<Eigen::Vector3d(const Lattice&)>& corner_at) {
    if (nx < 1 || ny < 1 || nz < 1) throw DomainError("block counts must be at least 1");
    const int sx = 2 * nx + 1, sy = 2 * ny + 1, sz = 2 * nz + 1;
    auto id = [&](const Lattice& p) { return p[0] + sx * (p[1] + sy * p[2]); };
    auto add = [](Lattice a, const Lattice& b) {
        for (int k = 0; k < 3; ++k) a[k] += b[k];
        return a;
    };

    Mesh m;
    m.nodes.assign(static_cast<std::size_t>(sx) * sy * sz, Eigen::Vector3d::Zero());
    for (int K = 0; K < sz; K += 2)
        for (int J = 0; J < sy; J += 2)
            for (int I = 0; I < sx; I += 2) m.nodes[id({I, J, K})] = corner_at({I, J, K});

    auto midpoint = [&](const Lattice& a, const Lattice& b) {
        const Lattice c{(a[0] + b[0]) / 2, (a[1] + b[1]) / 2, (a[2] + b[2]) / 2};
        m.nodes[id(c)] = 0.5 * (m.nodes[id(a)] + m.nodes[id(b)]);
        return id(c);
    };

    static constexpr std::array<std::array<int, 3>, 6> kPerms{
        {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
    m.elements.reserve(static_cast<std::size_t>(6) * nx * ny * nz);
    for (int k = 0; k < nz; ++k)
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                const Lattice o{2 * i, 2 * j, 2 * k};
                for (const auto& p : kPerms) {
                    Lattice step0{0, 0, 0}, step1{0, 0, 0};
                    step0[p[0]] = 2;
                    step1[p[1]] = 2;
                    std::array<Lattice, 4> v{o, add(o, step0), add(add(o, step0), step1), add(o, {2, 2, 2})};
                    // Odd permutations come out left-handed.
                    const bool odd = (p[0] + 1) % 3 != p[1];
                    if (odd) std::swap(v[1], v[2]);
                    Element e;
                    for (int a = 0; a < 4; ++a) e[a] = id(v[a]);
                    for (int q = 0; q < 6; ++q) e[4 + q] = midpoint(v[kEdges[q][0]], v[kEdges[q][1]]);
                    m.elements.push_back(e);
                }
            }

    auto face = [&](const Lattice& a, const Lattice& b, const Lattice& c) {
        return Face{id(a), id(b), id(c), midpoint(a, b), midpoint(b, c), midpoint(c, a)};
    };
    auto& base = m.face_sets["base"];
    auto& top = m.face_sets["top"];
    const int kt = 2 * nz;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const int I = 2 * i, J = 2 * j;
            // Wound for outward normals.
            base.push_back(face({I, J, 0}, {I + 2, J + 2, 0}, {I + 2, J, 0}));
            base.push_back(face({I, J, 0}, {I, J + 2, 0}, {I + 2, J + 2, 0}));
            top.push_back(face({I, J, kt}, {I + 2, J, kt}, {I + 2, J + 2, kt}));
            top.push_back(face({I, J, kt}, {I + 2, J + 2, kt}, {I, J + 2, kt}));
        }
    for (int J = 0; J < sy; ++J)
        for (int I = 0; I < sx; ++I) {
            m.node_sets["base"].push_back(id({I, J, 0}));
            m.node_sets["top"].push_back(id({I, J, kt}));
        }
    m.node_sets["base_origin"] = {id({0, 0, 0})};
    m.node_sets["base_x"] = {id({sx - 1, 0, 0})};
    return m;
}

}  // namespace

Mesh structured_box(double lx, double ly, double lz, int nx, int ny, int nz) {
    if (!(lx > 0.0 && ly > 0.0 && lz > 0.0)) throw DomainError("box dimensions must be positive");
    return kuhn_mesh(nx, ny, nz, [&](const Lattice& p) {
        return Eigen::Vector3d(lx * p[0] / (2.0 * nx), ly * p[1] / (2.0 * ny), lz * p[2] / (2.0 * nz));
    });
}

Mesh tapered_square_column(const AreaProfile& profile, int n_axial, int n_side) {
    if (!(profile.length > 0.0)) throw DomainError("profile length must be positive");
    return kuhn_mesh(n_side, n_side, n_axial, [&](const Lattice& p) {
        const double z = p[2] == 2 * n_axial ? profile.length : profile.length * p[2] / (2.0 * n_axial);
        const double s = std::sqrt(area_at(profile, z));
        return Eigen::Vector3d((p[0] / (2.0 * n_side) - 0.5) * s, (p[1] / (2.0 * n_side) - 0.5) * s, z);
    });
}

}  // namespace rpet::fem
