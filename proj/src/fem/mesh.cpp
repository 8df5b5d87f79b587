#include "rpet/fem/mesh.hpp"

#include <cmath>

#include "rpet/error.hpp"

namespace rpet::fem {

namespace {

void check_midpoint(const Mesh& m, int a, int b, int mid, const std::string& what) {
    const Eigen::Vector3d& pa = m.nodes[a];
    const Eigen::Vector3d& pb = m.nodes[b];
    const double len = (pa - pb).norm();
    if ((m.nodes[mid] - 0.5 * (pa + pb)).norm() > 1e-6 * len)
        throw ValidationError(what + ": mid-edge node " + std::to_string(mid) + " is off the edge midpoint");
}

void check_index(const Mesh& m, int i, const std::string& what) {
    if (i < 0 || static_cast<std::size_t>(i) >= m.nodes.size())
        throw ValidationError(what + ": node index " + std::to_string(i) + " out of range");
}

}  // namespace

NodeCoords<double> Mesh::coords(std::size_t e) const {
    NodeCoords<double> X;
    for (int a = 0; a < 10; ++a) X.row(a) = nodes[elements[e][a]].transpose();
    return X;
}

void validate_mesh(const Mesh& m) {
    if (m.nodes.empty() || m.elements.empty()) throw ValidationError("mesh has no nodes or no elements");
    for (std::size_t e = 0; e < m.elements.size(); ++e) {
        const std::string what = "element " + std::to_string(e);
        for (int i : m.elements[e]) check_index(m, i, what);
        if (!(corner_volume(m.coords(e)) > 0.0)) throw ValidationError(what + ": inverted or degenerate corners");
        for (int k = 0; k < 6; ++k)
            check_midpoint(m, m.elements[e][kEdges[k][0]], m.elements[e][kEdges[k][1]], m.elements[e][4 + k], what);
    }
    for (const auto& [name, faces] : m.face_sets) {
        for (std::size_t f = 0; f < faces.size(); ++f) {
            const std::string what = "face " + std::to_string(f) + " of set '" + name + "'";
            for (int i : faces[f]) check_index(m, i, what);
            for (int k = 0; k < 3; ++k) check_midpoint(m, faces[f][k], faces[f][(k + 1) % 3], faces[f][3 + k], what);
        }
    }
    for (const auto& [name, ids] : m.node_sets)
        for (int i : ids) check_index(m, i, "node set '" + name + "'");
}

MeshStats mesh_stats(const Mesh& m) {
    MeshStats s;
    s.n_elements = m.elements.size();
    s.n_nodes = m.nodes.size();
    if (m.elements.empty()) return s;
    double sum = 0.0;
    s.min_quality = 1.0;
    for (std::size_t e = 0; e < m.elements.size(); ++e) {
        const double q = tet_quality(m.coords(e));
        sum += q;
        s.min_quality = std::min(s.min_quality, q);
    }
    s.avg_quality = sum / static_cast<double>(m.elements.size());
    return s;
}

}  // namespace rpet::fem
