#pragma once

#include "polycorr/geometry.hpp"

#include <array>
#include <map>
#include <vector>

namespace polycorr {

// Tiling of a polygon by positively oriented lattice triangles meeting along
// common faces. Triangles are stored with their lexicographically smallest
// corner first (one fixed rotation of the clockwise cycle) and sorted.
struct Triangulation {
    std::vector<std::array<Pt, 3>> triangles;
    std::vector<Pt> used_vertices;
};

// Tiling by strictly convex clockwise cells (triangles and larger polygons),
// same facial rules. Cells list extreme corners only, smallest corner first.
struct Subdivision {
    std::vector<std::vector<Pt>> cells;
    std::vector<Pt> used_vertices;
};

// Which points may serve as cell corners: the listed boundary sequence plus
// strictly interior lattice points (default), or every lattice point of the
// region, in which case listed boundary edges may be refined by the extra
// collinear points.
enum class VertexPool { ListedAndInterior, AllLattice };

std::vector<Triangulation> enumerate_triangulations(
    const LatticePolygon& poly, VertexPool pool = VertexPool::ListedAndInterior);

std::vector<Subdivision> enumerate_subdivisions(
    const LatticePolygon& poly, VertexPool pool = VertexPool::ListedAndInterior);

// Per-vertex sum of normalized volumes of the incident triangles; vertices
// not used by the triangulation are absent (value zero).
using CharFunction = std::map<Pt, Int>;

CharFunction char_function(const Triangulation& tau);

// Doubled area of one strictly convex clockwise cell.
Int cell_twice_area(const std::vector<Pt>& cell);

} // namespace polycorr
