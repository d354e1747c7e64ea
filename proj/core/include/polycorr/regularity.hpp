#pragma once

#include "polycorr/geometry.hpp"
#include "polycorr/triangulate.hpp"

#include <set>
#include <vector>

namespace polycorr {

// A tiling is height-induced when some lifting of the lattice points of the
// region has the tiling's cells as the facets of its lower hull. Decided
// exactly: a fast concrete lifting is tried first, then full rational
// constraint elimination; any positive answer is backed by a verified
// witness.
bool is_regular(const std::vector<std::vector<Pt>>& cells, const LatticePolygon& poly);
bool is_regular(const Triangulation& tau, const LatticePolygon& poly);
bool is_regular(const Subdivision& s, const LatticePolygon& poly);

// Distinct characteristic functions of the height-induced triangulations.
std::set<CharFunction> secondary_polytope_vertices(
    const LatticePolygon& poly, VertexPool pool = VertexPool::ListedAndInterior);

} // namespace polycorr
