#pragma once

#include "talenti/anisotropy.hpp"
#include "talenti/kernels.hpp"

#include <array>
#include <iosfwd>
#include <variant>
#include <vector>

namespace talenti {

struct BoundaryEdge {
    int a = 0, b = 0;  ///< oriented so the mesh lies to the left of a -> b
    Vec2 normal;       ///< outward unit normal
    double length = 0.0;
    int triangle = 0;
};

/// Immutable 2D triangulation with counterclockwise triangles. Construction
/// validates every structural invariant and throws InvalidGeometry otherwise.
class TriMesh {
public:
    TriMesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles);

    const std::vector<Vec2>& vertices() const noexcept { return vertices_; }
    const std::vector<std::array<int, 3>>& triangles() const noexcept { return triangles_; }
    const std::vector<BoundaryEdge>& boundary_edges() const noexcept { return boundary_; }
    const kernels::TriangleSoA& soa() const noexcept { return soa_; }

    std::size_t vertex_count() const noexcept { return vertices_.size(); }
    std::size_t triangle_count() const noexcept { return triangles_.size(); }

    int component_of(std::size_t triangle) const { return component_.at(triangle); }
    int component_count() const noexcept { return component_count_; }
    /// Component of each vertex (vertices are never shared between components).
    const std::vector<int>& vertex_components() const noexcept { return vertex_component_; }

    double triangle_area(std::size_t t) const { return soa_.area.at(t); }
    double area() const;
    std::vector<double> component_areas() const;
    double max_edge_length() const;
    /// Classical (Euclidean) length of the boundary.
    double boundary_length() const;

    /// Closed boundary loops as vertex cycles.
    std::vector<std::vector<int>> boundary_loops() const;
    /// Shoelace area enclosed by the boundary loops (outer loops positive).
    double boundary_enclosed_area() const;
    /// V - E + T for each connected component.
    std::vector<int> euler_characteristics() const;

private:
    std::vector<Vec2> vertices_;
    std::vector<std::array<int, 3>> triangles_;
    std::vector<BoundaryEdge> boundary_;
    std::vector<int> component_;
    std::vector<int> vertex_component_;
    int component_count_ = 0;
    kernels::TriangleSoA soa_;
};

/// Polygonalized Wulff shape used as a domain component.
struct WulffComponent {
    AnisotropicNorm norm;
    Vec2 center = Vec2::Zero();
    double radius = 1.0;
    int segments = 256;
    /// Scale the polygon so its area equals k_n R^2 exactly.
    bool match_area = false;
};

using DomainComponent = std::variant<Polygon, WulffComponent>;

struct DomainSpec {
    std::vector<DomainComponent> components;
    double target_h = 0.1;
};

/// Counterclockwise boundary polygon of one component.
Polygon component_polygon(const DomainComponent& component);

/// Constrained Delaunay triangulation of each component with interior Steiner
/// points, then uniform refinement until every edge is at most target_h.
/// The input boundary polylines are preserved exactly, and connected component
/// i of the mesh is spec.components[i].
TriMesh mesh_domain(const DomainSpec& spec);

/// Uniform midpoint refinement: four children per triangle.
TriMesh refine(const TriMesh& mesh);

/// Plain-text mesh format:
///   line 1: "<vertex count> <triangle count>"
///   then one "x y" line per vertex and one "i j k" line per triangle
///   (0-based, counterclockwise). Lines starting with '#' are ignored.
void write_mesh(std::ostream& out, const TriMesh& mesh);
TriMesh read_mesh(std::istream& in);

namespace detail {
/// Triangulate one simple counterclockwise polygon (boundary spacing <= h).
void triangulate_polygon(const Polygon& boundary, double h, std::vector<Vec2>& vertices,
                         std::vector<std::array<int, 3>>& triangles);
}  // namespace detail

}  // namespace talenti
