#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "rpet/column.hpp"
#include "rpet/fem/tet10.hpp"

namespace rpet::fem {

using Element = std::array<int, 10>;
/// 6-node triangle: corners 0-2, mid-edge nodes on 01, 12, 20.
using Face = std::array<int, 6>;

struct Mesh {
    std::vector<Eigen::Vector3d> nodes;  // mm
    std::vector<Element> elements;
    std::map<std::string, std::vector<int>> node_sets;
    std::map<std::string, std::vector<Face>> face_sets;

    std::size_t dofs() const noexcept { return 3 * nodes.size(); }
    NodeCoords<double> coords(std::size_t element) const;
};

/// Index ranges, positive corner volumes, and mid-edge nodes within 1e-6 of
/// the edge length of the edge midpoints (elements and faces).  Throws
/// ValidationError naming the offending entity.
void validate_mesh(const Mesh& mesh);

struct MeshStats {
    std::size_t n_elements = 0;
    std::size_t n_nodes = 0;
    double avg_quality = 0.0;
    double min_quality = 0.0;
};

MeshStats mesh_stats(const Mesh& mesh);

/// Reads the ASCII 2.2 interchange format.  Only 10-node tetrahedra (type 11)
/// and 6-node triangles (type 9) are accepted; physical names of triangles
/// become face sets and node sets of the same name.  A non-standard
/// $NodeSets section written by write_msh is read back when present.
Mesh read_msh(std::istream& in);
Mesh load_mesh(const std::filesystem::path& path);
void write_msh(const Mesh& mesh, std::ostream& out);
void save_mesh(const Mesh& mesh, const std::filesystem::path& path);

/// Box [0, lx] x [0, ly] x [0, lz] of nx * ny * nz blocks, each split into six
/// tetrahedra along its main diagonal.  (2nx+1)(2ny+1)(2nz+1) nodes, 6 nx ny nz
/// elements.  Sets: node/face "base" (z = 0) and "top" (z = lz); single-node
/// sets "base_origin" at (0, 0, 0) and "base_x" at (lx, 0, 0).
Mesh structured_box(double lx, double ly, double lz, int nx, int ny, int nz);

/// Solid of square cross-section sqrt(A(l)) centred on the z axis, z = l,
/// with n_axial layers and n_side blocks across.  Same sets as
/// structured_box; "base_origin" and "base_x" are the base corners at
/// y = -s/2.
Mesh tapered_square_column(const AreaProfile& profile, int n_axial, int n_side);

}  // namespace rpet::fem
