#include "talenti/mesh.hpp"

#include "talenti/error.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>

namespace talenti {

namespace {

std::uint64_t edge_key(int a, int b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
}

struct DisjointSets {
    std::vector<int> parent;
    explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) {
        a = find(a), b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

}  // namespace

TriMesh::TriMesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
    const int nv = static_cast<int>(vertices_.size());
    if (triangles_.empty()) throw InvalidGeometry("mesh has no triangles");
    for (const auto& p : vertices_)
        if (!std::isfinite(p.x()) || !std::isfinite(p.y())) throw InvalidGeometry("non-finite vertex coordinate");

    std::vector<char> used(nv, 0);
    const std::size_t nt = triangles_.size();
    soa_.v0.resize(nt), soa_.v1.resize(nt), soa_.v2.resize(nt);
    soa_.area.resize(nt);
    soa_.gx0.resize(nt), soa_.gx1.resize(nt), soa_.gx2.resize(nt);
    soa_.gy0.resize(nt), soa_.gy1.resize(nt), soa_.gy2.resize(nt);

    // directed edge -> triangle
    std::unordered_map<std::uint64_t, int> half_edges;
    half_edges.reserve(3 * nt);
    for (std::size_t t = 0; t < nt; ++t) {
        const auto& tri = triangles_[t];
        for (int k = 0; k < 3; ++k) {
            if (tri[k] < 0 || tri[k] >= nv) throw InvalidGeometry("triangle index out of range");
            used[tri[k]] = 1;
        }
        if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2])
            throw InvalidGeometry("triangle with repeated vertex");
        const Vec2& a = vertices_[tri[0]];
        const Vec2& b = vertices_[tri[1]];
        const Vec2& c = vertices_[tri[2]];
        const double twice = (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
        if (!(twice > 0.0)) throw InvalidGeometry("triangle " + std::to_string(t) + " is not counterclockwise");
        soa_.v0[t] = tri[0], soa_.v1[t] = tri[1], soa_.v2[t] = tri[2];
        soa_.area[t] = 0.5 * twice;
        // grad phi_k = rot(edge opposite k) / (2A)
        soa_.gx0[t] = (b.y() - c.y()) / twice, soa_.gy0[t] = (c.x() - b.x()) / twice;
        soa_.gx1[t] = (c.y() - a.y()) / twice, soa_.gy1[t] = (a.x() - c.x()) / twice;
        soa_.gx2[t] = (a.y() - b.y()) / twice, soa_.gy2[t] = (b.x() - a.x()) / twice;
        for (int k = 0; k < 3; ++k) {
            const int i = tri[k], j = tri[(k + 1) % 3];
            if (!half_edges.emplace(edge_key(i, j), static_cast<int>(t)).second)
                throw InvalidGeometry("edge used twice with the same orientation (non-manifold or flipped mesh)");
        }
    }
    for (int i = 0; i < nv; ++i)
        if (!used[i]) throw InvalidGeometry("vertex " + std::to_string(i) + " is not referenced by any triangle");

    DisjointSets sets(nt);
    std::vector<int> out_degree(nv, 0), in_degree(nv, 0);
    for (std::size_t t = 0; t < nt; ++t) {
        const auto& tri = triangles_[t];
        for (int k = 0; k < 3; ++k) {
            const int i = tri[k], j = tri[(k + 1) % 3];
            const auto twin = half_edges.find(edge_key(j, i));
            if (twin != half_edges.end()) {
                sets.unite(static_cast<int>(t), twin->second);
                continue;
            }
            const Vec2 e = vertices_[j] - vertices_[i];
            BoundaryEdge be;
            be.a = i, be.b = j;
            be.length = e.norm();
            be.normal = Vec2(e.y(), -e.x()) / be.length;
            be.triangle = static_cast<int>(t);
            boundary_.push_back(be);
            ++out_degree[i], ++in_degree[j];
        }
    }
    for (int i = 0; i < nv; ++i)
        if (out_degree[i] != in_degree[i]) throw InvalidGeometry("boundary edges do not form closed loops");

    component_.resize(nt);
    std::vector<int> label(nt, -1);
    for (std::size_t t = 0; t < nt; ++t) {
        const int root = sets.find(static_cast<int>(t));
        if (label[root] < 0) label[root] = component_count_++;
        component_[t] = label[root];
    }
    vertex_component_.assign(nv, -1);
    for (std::size_t t = 0; t < nt; ++t)
        for (int v : triangles_[t]) {
            if (vertex_component_[v] >= 0 && vertex_component_[v] != component_[t])
                throw InvalidGeometry("components touch at a vertex");
            vertex_component_[v] = component_[t];
        }
}

double TriMesh::area() const {
    double a = 0.0;
    for (double x : soa_.area) a += x;
    return a;
}

std::vector<double> TriMesh::component_areas() const {
    std::vector<double> out(component_count_, 0.0);
    for (std::size_t t = 0; t < triangles_.size(); ++t) out[component_[t]] += soa_.area[t];
    return out;
}

double TriMesh::max_edge_length() const {
    double m = 0.0;
    for (const auto& tri : triangles_)
        for (int k = 0; k < 3; ++k) m = std::max(m, (vertices_[tri[k]] - vertices_[tri[(k + 1) % 3]]).norm());
    return m;
}

double TriMesh::boundary_length() const {
    double s = 0.0;
    for (const auto& e : boundary_) s += e.length;
    return s;
}

std::vector<std::vector<int>> TriMesh::boundary_loops() const {
    // follow each boundary edge to the next one leaving its head; at pinch
    // vertices the first unused outgoing edge is taken
    std::unordered_multimap<int, int> leaving;
    for (std::size_t k = 0; k < boundary_.size(); ++k) leaving.emplace(boundary_[k].a, static_cast<int>(k));
    std::vector<char> done(boundary_.size(), 0);
    std::vector<std::vector<int>> loops;
    for (std::size_t start = 0; start < boundary_.size(); ++start) {
        if (done[start]) continue;
        std::vector<int> loop;
        std::size_t k = start;
        while (!done[k]) {
            done[k] = 1;
            loop.push_back(boundary_[k].a);
            auto [lo, hi] = leaving.equal_range(boundary_[k].b);
            std::size_t next = k;
            for (auto it = lo; it != hi; ++it)
                if (!done[it->second]) {
                    next = static_cast<std::size_t>(it->second);
                    break;
                }
            if (next == k) break;
            k = next;
        }
        loops.push_back(std::move(loop));
    }
    return loops;
}

double TriMesh::boundary_enclosed_area() const {
    double twice = 0.0;
    for (const auto& e : boundary_) {
        const Vec2& p = vertices_[e.a];
        const Vec2& q = vertices_[e.b];
        twice += p.x() * q.y() - p.y() * q.x();
    }
    return 0.5 * twice;
}

std::vector<int> TriMesh::euler_characteristics() const {
    std::vector<int> v(component_count_, 0), e(component_count_, 0), t(component_count_, 0);
    for (int c : vertex_component_) ++v[c];
    for (std::size_t i = 0; i < triangles_.size(); ++i) ++t[component_[i]];
    // each interior edge appears twice as a half edge, each boundary edge once
    std::vector<int> half(component_count_, 0), bnd(component_count_, 0);
    for (std::size_t i = 0; i < triangles_.size(); ++i) half[component_[i]] += 3;
    for (const auto& be : boundary_) ++bnd[component_[be.triangle]];
    std::vector<int> chi(component_count_);
    for (int c = 0; c < component_count_; ++c) {
        e[c] = (half[c] - bnd[c]) / 2 + bnd[c];
        chi[c] = v[c] - e[c] + t[c];
    }
    return chi;
}

TriMesh refine(const TriMesh& mesh) {
    std::vector<Vec2> verts = mesh.vertices();
    std::unordered_map<std::uint64_t, int> midpoint;
    midpoint.reserve(3 * mesh.triangle_count());
    auto mid = [&](int a, int b) {
        const std::uint64_t key = edge_key(std::min(a, b), std::max(a, b));
        auto it = midpoint.find(key);
        if (it != midpoint.end()) return it->second;
        const int id = static_cast<int>(verts.size());
        verts.push_back(0.5 * (mesh.vertices()[a] + mesh.vertices()[b]));
        midpoint.emplace(key, id);
        return id;
    };
    std::vector<std::array<int, 3>> tris;
    tris.reserve(4 * mesh.triangle_count());
    for (const auto& t : mesh.triangles()) {
        const int a = t[0], b = t[1], c = t[2];
        const int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
        tris.push_back({a, ab, ca});
        tris.push_back({ab, b, bc});
        tris.push_back({ca, bc, c});
        tris.push_back({ab, bc, ca});
    }
    return TriMesh(std::move(verts), std::move(tris));
}

void write_mesh(std::ostream& out, const TriMesh& mesh) {
    std::ostringstream buf;
    buf.precision(17);
    buf << mesh.vertex_count() << ' ' << mesh.triangle_count() << '\n';
    for (const auto& p : mesh.vertices()) buf << p.x() << ' ' << p.y() << '\n';
    for (const auto& t : mesh.triangles()) buf << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    out << buf.str();
    if (!out) throw Error("failed to write mesh");
}

TriMesh read_mesh(std::istream& in) {
    std::string line;
    std::istringstream body;
    {
        std::ostringstream kept;
        while (std::getline(in, line)) {
            const auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos || line[first] == '#') continue;
            kept << line << '\n';
        }
        body.str(kept.str());
    }
    long long nv = -1, nt = -1;
    if (!(body >> nv >> nt) || nv < 3 || nt < 1) throw InvalidInput("mesh header must be '<vertices> <triangles>'");
    std::vector<Vec2> verts(static_cast<std::size_t>(nv));
    for (auto& p : verts) {
        double x, y;
        if (!(body >> x >> y)) throw InvalidInput("mesh file truncated in vertex block");
        p = Vec2(x, y);
    }
    std::vector<std::array<int, 3>> tris(static_cast<std::size_t>(nt));
    for (auto& t : tris)
        if (!(body >> t[0] >> t[1] >> t[2])) throw InvalidInput("mesh file truncated in triangle block");
    std::string extra;
    if (body >> extra) throw InvalidInput("trailing data after triangle block");
    return TriMesh(std::move(verts), std::move(tris));
}

}  // namespace talenti
