#include "talenti/error.hpp"
#include "talenti/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <unordered_map>
#include <unordered_set>

namespace talenti {

namespace {

double orient(const Vec2& a, const Vec2& b, const Vec2& c) {
    return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

double incircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    const double adx = a.x() - d.x(), ady = a.y() - d.y();
    const double bdx = b.x() - d.x(), bdy = b.y() - d.y();
    const double cdx = c.x() - d.x(), cdy = c.y() - d.y();
    const double ad = adx * adx + ady * ady, bd = bdx * bdx + bdy * bdy, cd = cdx * cdx + cdy * cdy;
    return adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) + ad * (bdx * cdy - bdy * cdx);
}

double segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const double len2 = ab.squaredNorm();
    double s = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
    s = std::clamp(s, 0.0, 1.0);
    return (p - (a + s * ab)).norm();
}

bool point_in_polygon(const Vec2& p, const Polygon& poly) {
    bool inside = false;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[j];
        if ((a.y() > p.y()) != (b.y() > p.y())) {
            const double x = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
            if (p.x() < x) inside = !inside;
        }
    }
    return inside;
}

bool segments_cross(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    const double d1 = orient(a, b, c), d2 = orient(a, b, d);
    const double d3 = orient(c, d, a), d4 = orient(c, d, b);
    if (((d1 > 0) != (d2 > 0) || d1 == 0 || d2 == 0) && ((d3 > 0) != (d4 > 0) || d3 == 0 || d4 == 0)) {
        // collinear disjoint segments are not crossings
        if (d1 == 0 && d2 == 0) {
            const Vec2 dir = b - a;
            const double s0 = (c - a).dot(dir), s1 = (d - a).dot(dir), len = dir.squaredNorm();
            return std::max(s0, s1) >= 0.0 && std::min(s0, s1) <= len;
        }
        return true;
    }
    return false;
}

Polygon subdivide(const Polygon& poly, double h) {
    Polygon out;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[(i + 1) % poly.size()];
        const int pieces = std::max(1, static_cast<int>(std::ceil((b - a).norm() / h - 1e-9)));
        for (int k = 0; k < pieces; ++k) out.push_back(a + (b - a) * (static_cast<double>(k) / pieces));
    }
    return out;
}

std::vector<std::array<int, 3>> ear_clip(const Polygon& pts) {
    const int n = static_cast<int>(pts.size());
    std::vector<int> prev(n), next(n);
    for (int i = 0; i < n; ++i) prev[i] = (i + n - 1) % n, next[i] = (i + 1) % n;
    std::vector<std::array<int, 3>> tris;
    tris.reserve(n - 2);

    auto is_ear = [&](int i) {
        const int a = prev[i], c = next[i];
        const Vec2 &pa = pts[a], &pb = pts[i], &pc = pts[c];
        const double scale = (pa - pb).norm() * (pc - pb).norm();
        if (!(orient(pa, pb, pc) > 1e-10 * scale)) return false;
        const double tol = 1e-12 * scale;
        for (int v = next[c]; v != a; v = next[v]) {
            const Vec2& p = pts[v];
            if (orient(pa, pb, p) >= -tol && orient(pb, pc, p) >= -tol && orient(pc, pa, p) >= -tol) return false;
        }
        return true;
    };

    int remaining = n, cur = 0, misses = 0;
    while (remaining > 3) {
        if (is_ear(cur)) {
            tris.push_back({prev[cur], cur, next[cur]});
            next[prev[cur]] = next[cur];
            prev[next[cur]] = prev[cur];
            --remaining;
            cur = prev[cur];
            misses = 0;
        } else {
            cur = next[cur];
            if (++misses > remaining) throw InvalidGeometry("ear clipping failed: polygon is not simple");
        }
    }
    tris.push_back({prev[cur], cur, next[cur]});
    return tris;
}

std::uint64_t key(int a, int b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
}

class Triangulation {
public:
    Triangulation(std::vector<Vec2> pts, double h) : P(std::move(pts)), h_(h) {}

    std::vector<Vec2> P;

    void build_from(const std::vector<std::array<int, 3>>& tris, int boundary_count) {
        for (int i = 0; i < boundary_count; ++i) {
            const int j = (i + 1) % boundary_count;
            fixed_.insert(key(std::min(i, j), std::max(i, j)));
        }
        for (const auto& t : tris) add(t[0], t[1], t[2]);
        std::vector<std::array<int, 3>> stack;
        for (std::size_t t = 0; t < T_.size(); ++t)
            for (int k = 0; k < 3; ++k) stack.push_back({T_[t][k], T_[t][(k + 1) % 3], T_[t][(k + 2) % 3]});
        legalize(stack);
    }

    bool insert(const Vec2& p) {
        const int t = locate(p);
        if (t < 0) return false;
        const auto tri = T_[t];
        for (int k = 0; k < 3; ++k)
            if ((P[tri[k]] - p).norm() < 1e-6 * h_) return false;
        int on_edge = -1;
        for (int k = 0; k < 3; ++k) {
            const Vec2 &a = P[tri[k]], &b = P[tri[(k + 1) % 3]];
            if (std::abs(orient(a, b, p)) / (b - a).norm() < 1e-9 * h_) on_edge = k;
        }
        const int id = static_cast<int>(P.size());
        std::vector<std::array<int, 3>> stack;
        if (on_edge < 0) {
            P.push_back(p);
            const int a = tri[0], b = tri[1], c = tri[2];
            remove(t);
            add(a, b, id), add(b, c, id), add(c, a, id);
            stack = {{a, b, id}, {b, c, id}, {c, a, id}};
        } else {
            const int a = tri[on_edge], b = tri[(on_edge + 1) % 3], c = tri[(on_edge + 2) % 3];
            if (fixed_.count(key(std::min(a, b), std::max(a, b)))) return false;
            const int u = across(a, b);
            if (u < 0) return false;
            const int d = apex(u, b, a);
            P.push_back(p);
            remove(t), remove(u);
            add(a, id, c), add(id, b, c), add(b, id, d), add(id, a, d);
            stack = {{b, c, id}, {c, a, id}, {a, d, id}, {d, b, id}};
        }
        legalize(stack);
        return true;
    }

    // Delaunay refinement: circumcenters of triangles with a small minimum
    // angle are inserted; a circumcenter that encroaches a boundary segment
    // splits that segment instead. Input angles below 60 degrees can make
    // this cycle, so the number of insertions is capped.
    void improve_quality(double max_ratio, std::size_t max_insertions) {
        std::size_t inserted = 0;
        for (int pass = 0; pass < 64; ++pass) {
            std::vector<std::array<int, 3>> bad;
            for (std::size_t t = 0; t < T_.size(); ++t)
                if (alive_[t] && radius_edge_ratio(T_[t]) > max_ratio && !small_input_angle(T_[t])) bad.push_back(T_[t]);
            if (bad.empty()) return;
            bool progress = false;
            for (const auto& tri : bad) {
                if (inserted >= max_insertions) return;
                const auto it = he_.find(key(tri[0], tri[1]));
                if (it == he_.end() || T_[it->second] != tri) continue;
                const Vec2 c = circumcenter(P[tri[0]], P[tri[1]], P[tri[2]]);
                if (const auto seg = encroached_segment(c)) {
                    split_segment(seg->first, seg->second);
                    ++inserted, progress = true;
                } else if (insert(c)) {
                    ++inserted, progress = true;
                }
            }
            if (!progress) return;
        }
    }

    std::vector<std::array<int, 3>> triangles() const {
        std::vector<std::array<int, 3>> out;
        for (std::size_t t = 0; t < T_.size(); ++t)
            if (alive_[t]) out.push_back(T_[t]);
        return out;
    }

private:
    std::vector<std::array<int, 3>> T_;
    std::vector<char> alive_;
    std::vector<int> free_;
    std::unordered_map<std::uint64_t, int> he_;
    std::unordered_set<std::uint64_t> fixed_;
    int last_ = 0;
    double h_;

    static Vec2 circumcenter(const Vec2& a, const Vec2& b, const Vec2& c) {
        const Vec2 ab = b - a, ac = c - a;
        const double d = 2.0 * (ab.x() * ac.y() - ab.y() * ac.x());
        const double b2 = ab.squaredNorm(), c2 = ac.squaredNorm();
        return a + Vec2(ac.y() * b2 - ab.y() * c2, ab.x() * c2 - ac.x() * b2) / d;
    }

    double radius_edge_ratio(const std::array<int, 3>& t) const {
        const Vec2 &a = P[t[0]], &b = P[t[1]], &c = P[t[2]];
        const double r = (circumcenter(a, b, c) - a).norm();
        const double shortest = std::min({(b - a).norm(), (c - b).norm(), (a - c).norm()});
        return r / shortest;
    }

    bool is_fixed(int a, int b) const { return fixed_.count(key(std::min(a, b), std::max(a, b))) > 0; }

    // two boundary segments meeting at less than 60 degrees inside the triangle
    bool small_input_angle(const std::array<int, 3>& t) const {
        for (int k = 0; k < 3; ++k) {
            const int v = t[k], a = t[(k + 1) % 3], b = t[(k + 2) % 3];
            if (!is_fixed(v, a) || !is_fixed(v, b)) continue;
            const Vec2 e1 = P[a] - P[v], e2 = P[b] - P[v];
            if (e1.dot(e2) > 0.5 * e1.norm() * e2.norm()) return true;
        }
        return false;
    }

    std::optional<std::pair<int, int>> encroached_segment(const Vec2& p) const {
        for (std::uint64_t k : fixed_) {
            const int a = static_cast<int>(k >> 32), b = static_cast<int>(k & 0xffffffffu);
            if ((P[a] - p).dot(P[b] - p) < 0.0) return std::make_pair(a, b);
        }
        return std::nullopt;
    }

    void split_segment(int a, int b) {
        // boundary segments have a triangle on one side only
        if (he_.find(key(a, b)) == he_.end()) std::swap(a, b);
        const int t = he_.at(key(a, b));
        const int c = apex(t, a, b);
        const int m = static_cast<int>(P.size());
        P.push_back(0.5 * (P[a] + P[b]));
        fixed_.erase(key(std::min(a, b), std::max(a, b)));
        fixed_.insert(key(std::min(a, m), std::max(a, m)));
        fixed_.insert(key(std::min(m, b), std::max(m, b)));
        remove(t);
        add(a, m, c), add(m, b, c);
        std::vector<std::array<int, 3>> stack = {{b, c, m}, {c, a, m}};
        legalize(stack);
    }

    int add(int a, int b, int c) {
        int t;
        if (!free_.empty()) {
            t = free_.back();
            free_.pop_back();
            T_[t] = {a, b, c};
            alive_[t] = 1;
        } else {
            t = static_cast<int>(T_.size());
            T_.push_back({a, b, c});
            alive_.push_back(1);
        }
        he_[key(a, b)] = t, he_[key(b, c)] = t, he_[key(c, a)] = t;
        last_ = t;
        return t;
    }

    void remove(int t) {
        const auto& tri = T_[t];
        for (int k = 0; k < 3; ++k) he_.erase(key(tri[k], tri[(k + 1) % 3]));
        alive_[t] = 0;
        free_.push_back(t);
    }

    int across(int a, int b) const {
        const auto it = he_.find(key(b, a));
        return it == he_.end() ? -1 : it->second;
    }

    int apex(int t, int a, int b) const {
        for (int v : T_[t])
            if (v != a && v != b) return v;
        return -1;
    }

    void legalize(std::vector<std::array<int, 3>>& stack) {
        while (!stack.empty()) {
            const auto [a, b, p] = stack.back();
            stack.pop_back();
            const auto own = he_.find(key(a, b));
            if (own == he_.end() || apex(own->second, a, b) != p) continue;
            if (fixed_.count(key(std::min(a, b), std::max(a, b)))) continue;
            const int u = across(a, b);
            if (u < 0) continue;
            const int d = apex(u, b, a);
            const Vec2 &pa = P[a], &pb = P[b], &pp = P[p], &pd = P[d];
            const double L = std::max({(pa - pd).norm(), (pb - pd).norm(), (pp - pd).norm()});
            if (!(incircle(pa, pb, pp, pd) > 1e-12 * L * L * L * L)) continue;
            if (!(orient(pa, pd, pp) > 0.0 && orient(pd, pb, pp) > 0.0)) continue;
            remove(own->second), remove(u);
            add(a, d, p), add(d, b, p);
            stack.push_back({a, d, p});
            stack.push_back({d, b, p});
        }
    }

    int locate(const Vec2& p) const {
        int t = last_;
        if (!alive_[t]) t = static_cast<int>(std::find(alive_.begin(), alive_.end(), 1) - alive_.begin());
        const std::size_t limit = 4 * T_.size() + 16;
        for (std::size_t step = 0; step < limit; ++step) {
            const auto& tri = T_[t];
            bool moved = false;
            for (int j = 0; j < 3; ++j) {
                const int k = static_cast<int>((j + step) % 3);
                const Vec2 &a = P[tri[k]], &b = P[tri[(k + 1) % 3]];
                if (orient(a, b, p) < -1e-12 * (b - a).norm() * h_) {
                    const int n = across(tri[k], tri[(k + 1) % 3]);
                    if (n < 0) return brute_locate(p);
                    t = n;
                    moved = true;
                    break;
                }
            }
            if (!moved) return t;
        }
        return brute_locate(p);
    }

    int brute_locate(const Vec2& p) const {
        int best = -1;
        double best_val = -1e300;
        for (std::size_t t = 0; t < T_.size(); ++t) {
            if (!alive_[t]) continue;
            const auto& tri = T_[t];
            double worst = 1e300;
            for (int k = 0; k < 3; ++k) {
                const Vec2 &a = P[tri[k]], &b = P[tri[(k + 1) % 3]];
                worst = std::min(worst, orient(a, b, p) / (b - a).norm());
            }
            if (worst > best_val) best_val = worst, best = static_cast<int>(t);
        }
        return best_val >= -1e-9 * h_ ? best : -1;
    }
};

}  // namespace

namespace detail {

void triangulate_polygon(const Polygon& boundary, double h, std::vector<Vec2>& vertices,
                         std::vector<std::array<int, 3>>& triangles) {
    const Polygon pts = subdivide(boundary, h);
    const int nb = static_cast<int>(pts.size());
    Triangulation tri(pts, h);
    tri.build_from(ear_clip(pts), nb);

    // interior Steiner points on a triangular lattice, kept away from the boundary
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& p : pts) {
        xmin = std::min(xmin, p.x()), xmax = std::max(xmax, p.x());
        ymin = std::min(ymin, p.y()), ymax = std::max(ymax, p.y());
    }
    const double row = h * std::sqrt(3.0) / 2.0;
    const double clearance = 0.5 * h;
    const int rows = static_cast<int>(std::floor((ymax - ymin) / row));
    const int cols = static_cast<int>(std::floor((xmax - xmin) / h)) + 1;
    // center the lattice in the bounding box so symmetric domains stay symmetric
    const double y0 = ymin + 0.5 * ((ymax - ymin) - rows * row);
    const double x0 = xmin + 0.5 * ((xmax - xmin) - (cols - 1) * h);
    for (int j = 0; j <= rows; ++j) {
        const double y = y0 + j * row;
        const double shift = (j % 2) ? 0.5 * h : 0.0;
        for (int i = 0; i < cols; ++i) {
            // serpentine order keeps the point-location walk short
            const int ii = (j % 2) ? cols - 1 - i : i;
            const Vec2 p(x0 + ii * h + shift - 0.25 * h, y);
            if (!point_in_polygon(p, pts)) continue;
            bool clear = true;
            for (int k = 0; k < nb && clear; ++k)
                if (segment_distance(p, pts[k], pts[(k + 1) % nb]) < clearance) clear = false;
            if (clear) tri.insert(p);
        }
    }
    tri.improve_quality(std::sqrt(2.0), 20 * tri.P.size() + 1000);

    const int offset = static_cast<int>(vertices.size());
    vertices.insert(vertices.end(), tri.P.begin(), tri.P.end());
    for (auto t : tri.triangles()) triangles.push_back({t[0] + offset, t[1] + offset, t[2] + offset});
}

}  // namespace detail

Polygon component_polygon(const DomainComponent& component) {
    if (const auto* poly = std::get_if<Polygon>(&component)) {
        Polygon out = *poly;
        if (out.size() < 3) throw InvalidGeometry("polygon needs at least 3 vertices");
        if (polygon_signed_area(out) < 0.0) std::reverse(out.begin(), out.end());
        return out;
    }
    const auto& w = std::get<WulffComponent>(component);
    if (w.norm.dim() != 2) throw InvalidInput("mesh components must be two-dimensional");
    if (!(w.radius > 0.0) || !std::isfinite(w.radius)) throw InvalidInput("Wulff radius must be positive");
    if (w.segments < 8) throw InvalidInput("Wulff polygon needs at least 8 segments");
    Vec c(2);
    c << w.center.x(), w.center.y();
    return WulffShape(w.norm, c, w.radius).boundary_polygon(w.segments, w.match_area);
}

TriMesh mesh_domain(const DomainSpec& spec) {
    if (!(spec.target_h > 0.0) || !std::isfinite(spec.target_h)) throw InvalidInput("target_h must be positive");
    if (spec.components.empty()) throw InvalidInput("domain has no components");
    std::vector<Polygon> polys;
    for (const auto& c : spec.components) {
        polys.push_back(component_polygon(c));
        validate_simple_polygon(polys.back());
    }
    for (std::size_t i = 0; i < polys.size(); ++i)
        for (std::size_t j = i + 1; j < polys.size(); ++j) {
            const Polygon &A = polys[i], &B = polys[j];
            if (point_in_polygon(A[0], B) || point_in_polygon(B[0], A))
                throw InvalidGeometry("domain components overlap");
            for (std::size_t a = 0; a < A.size(); ++a)
                for (std::size_t b = 0; b < B.size(); ++b)
                    if (segments_cross(A[a], A[(a + 1) % A.size()], B[b], B[(b + 1) % B.size()]))
                        throw InvalidGeometry("domain components overlap");
        }

    // build somewhat below target so few meshes need an extra refinement pass
    const double spacing = 0.7 * spec.target_h;
    std::vector<Vec2> verts;
    std::vector<std::array<int, 3>> tris;
    for (const auto& poly : polys) detail::triangulate_polygon(poly, spacing, verts, tris);
    TriMesh mesh(std::move(verts), std::move(tris));
    while (mesh.max_edge_length() > spec.target_h) mesh = refine(mesh);
    return mesh;
}

}  // namespace talenti
