#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "rpet/error.hpp"
#include "rpet/fem/mesh.hpp"

namespace rpet::fem {

namespace {

constexpr int kTri6 = 9;
constexpr int kTet10 = 11;

// Interchange tet10 numbering swaps the last two mid-edge nodes (13 and 23).
constexpr std::array<int, 10> kTetPerm{0, 1, 2, 3, 4, 5, 6, 7, 9, 8};

template <typename T>
T next(std::istream& in, const char* what) {
    T v{};
    if (!(in >> v)) throw ParseError(std::string("mesh file: expected ") + what);
    return v;
}

void expect(std::istream& in, const std::string& token) {
    std::string t;
    if (!(in >> t) || t != token) throw ParseError("mesh file: expected " + token + ", found '" + t + "'");
}

std::string quoted_name(std::istream& in) {
    std::string rest;
    std::getline(in, rest);
    const auto a = rest.find('"');
    const auto b = rest.rfind('"');
    if (a == std::string::npos || b == a) throw ParseError("mesh file: physical name must be quoted");
    return rest.substr(a + 1, b - a - 1);
}

}  // namespace

Mesh read_msh(std::istream& in) {
    Mesh m;
    std::map<std::pair<int, int>, std::string> names;  // (dim, tag)
    std::unordered_map<long, int> node_index;
    bool have_nodes = false;
    std::vector<std::pair<std::string, std::vector<long>>> raw_node_sets;

    auto node_of = [&](long tag, const std::string& who) {
        const auto it = node_index.find(tag);
        if (it == node_index.end()) throw ParseError(who + ": unknown node tag " + std::to_string(tag));
        return it->second;
    };

    std::string section;
    while (in >> section) {
        if (section == "$MeshFormat") {
            const auto version = next<std::string>(in, "format version");
            const int file_type = next<int>(in, "file type");
            next<int>(in, "data size");
            if (version.rfind("2.", 0) != 0) throw ParseError("mesh file: unsupported format version " + version);
            if (file_type != 0) throw ParseError("mesh file: only ASCII files are supported");
            expect(in, "$EndMeshFormat");
        } else if (section == "$PhysicalNames") {
            const int n = next<int>(in, "physical name count");
            for (int i = 0; i < n; ++i) {
                const int dim = next<int>(in, "physical dimension");
                const int tag = next<int>(in, "physical tag");
                names[{dim, tag}] = quoted_name(in);
            }
            expect(in, "$EndPhysicalNames");
        } else if (section == "$Nodes") {
            const long n = next<long>(in, "node count");
            m.nodes.reserve(static_cast<std::size_t>(n));
            for (long i = 0; i < n; ++i) {
                const long tag = next<long>(in, "node tag");
                Eigen::Vector3d p;
                for (int k = 0; k < 3; ++k) p(k) = next<double>(in, "node coordinate");
                if (!node_index.emplace(tag, static_cast<int>(m.nodes.size())).second)
                    throw ParseError("node " + std::to_string(tag) + ": duplicate tag");
                m.nodes.push_back(p);
            }
            expect(in, "$EndNodes");
            have_nodes = true;
        } else if (section == "$Elements") {
            if (!have_nodes) throw ParseError("mesh file: $Elements before $Nodes");
            const long n = next<long>(in, "element count");
            for (long i = 0; i < n; ++i) {
                const long tag = next<long>(in, "element tag");
                const int type = next<int>(in, "element type");
                const int ntags = next<int>(in, "tag count");
                int physical = 0;
                for (int t = 0; t < ntags; ++t) {
                    const int v = next<int>(in, "element tag value");
                    if (t == 0) physical = v;
                }
                const std::string who = "element " + std::to_string(tag);
                if (type == kTet10) {
                    Element e;
                    for (int a = 0; a < 10; ++a) e[kTetPerm[a]] = node_of(next<long>(in, "node tag"), who);
                    m.elements.push_back(e);
                } else if (type == kTri6) {
                    Face f;
                    for (int a = 0; a < 6; ++a) f[a] = node_of(next<long>(in, "node tag"), who);
                    if (physical != 0) {
                        const auto it = names.find({2, physical});
                        const std::string name = it != names.end() ? it->second : "physical_" + std::to_string(physical);
                        m.face_sets[name].push_back(f);
                    }
                } else {
                    throw ParseError(who + ": unsupported element type " + std::to_string(type) +
                                     " (only 10-node tetrahedra and 6-node triangles)");
                }
            }
            expect(in, "$EndElements");
        } else if (section == "$NodeSets") {
            const int n = next<int>(in, "node set count");
            for (int i = 0; i < n; ++i) {
                auto name = next<std::string>(in, "node set name");
                const long count = next<long>(in, "node set size");
                std::vector<long> tags(static_cast<std::size_t>(count));
                for (auto& t : tags) t = next<long>(in, "node tag");
                raw_node_sets.emplace_back(std::move(name), std::move(tags));
            }
            expect(in, "$EndNodeSets");
        } else if (section.size() > 1 && section[0] == '$') {
            const std::string end = "$End" + section.substr(1);
            std::string t;
            while (in >> t && t != end) {
            }
            if (t != end) throw ParseError("mesh file: unterminated section " + section);
        } else {
            throw ParseError("mesh file: unexpected token '" + section + "'");
        }
    }
    if (!have_nodes) throw ParseError("mesh file: no $Nodes section");

    for (const auto& [name, faces] : m.face_sets) {
        std::set<int> ids;
        for (const auto& f : faces) ids.insert(f.begin(), f.end());
        m.node_sets[name].assign(ids.begin(), ids.end());
    }
    for (const auto& [name, tags] : raw_node_sets) {
        std::vector<int> ids;
        for (long t : tags) ids.push_back(node_of(t, "node set '" + name + "'"));
        m.node_sets[name] = std::move(ids);
    }
    validate_mesh(m);
    return m;
}

Mesh load_mesh(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open mesh '" + path.string() + "'");
    return read_msh(in);
}

void write_msh(const Mesh& m, std::ostream& out) {
    char buf[128];
    out << "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n";
    out << "$PhysicalNames\n" << m.face_sets.size() + 1 << "\n";
    int tag = 1;
    for (const auto& kv : m.face_sets) out << "2 " << tag++ << " \"" << kv.first << "\"\n";
    out << "3 " << tag << " \"volume\"\n";
    out << "$EndPhysicalNames\n";
    out << "$Nodes\n" << m.nodes.size() << "\n";
    for (std::size_t i = 0; i < m.nodes.size(); ++i) {
        const auto& p = m.nodes[i];
        std::snprintf(buf, sizeof buf, "%zu %.17g %.17g %.17g\n", i + 1, p.x(), p.y(), p.z());
        out << buf;
    }
    out << "$EndNodes\n";
    std::size_t n_faces = 0;
    for (const auto& kv : m.face_sets) n_faces += kv.second.size();
    out << "$Elements\n" << n_faces + m.elements.size() << "\n";
    std::size_t id = 1;
    tag = 1;
    for (const auto& kv : m.face_sets) {
        for (const auto& f : kv.second) {
            out << id++ << " " << kTri6 << " 2 " << tag << " " << tag;
            for (int a : f) out << " " << a + 1;
            out << "\n";
        }
        ++tag;
    }
    for (const auto& e : m.elements) {
        out << id++ << " " << kTet10 << " 2 " << tag << " " << tag;
        for (int a = 0; a < 10; ++a) out << " " << e[kTetPerm[a]] + 1;
        out << "\n";
    }
    out << "$EndElements\n";
    out << "$NodeSets\n" << m.node_sets.size() << "\n";
    for (const auto& [name, ids] : m.node_sets) {
        out << name << " " << ids.size() << "\n";
        for (std::size_t i = 0; i < ids.size(); ++i) out << ids[i] + 1 << (i + 1 == ids.size() ? "\n" : " ");
    }
    out << "$EndNodeSets\n";
}

void save_mesh(const Mesh& mesh, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write mesh '" + path.string() + "'");
    write_msh(mesh, out);
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace rpet::fem
