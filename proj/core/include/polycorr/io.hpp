#pragma once

#include "polycorr/genpoly.hpp"
#include "polycorr/geometry.hpp"
#include "polycorr/triangulate.hpp"

#include <string>
#include <vector>

namespace polycorr {

// JSON (de)serialization. Input validation failures throw schema_error.
// Serialization is canonical: object keys sorted, terms in their natural
// order, no whitespace; repeated calls yield byte-identical strings.

LatticePolygon parse_polygon_json(const std::string& text);
SimplicialPolytope parse_polytope_json(const std::string& text);

// Dispatch on "dim": polygons get dim 2, polytopes dim >= 3.
int json_input_dim(const std::string& text);

std::string polygon_to_json(const LatticePolygon& poly);
std::string polytope_to_json(const SimplicialPolytope& poly);

// Canonical JSON array of term objects.
std::string genpoly_to_json(const GenPoly& p);

std::string triangulations_to_json(const std::vector<Triangulation>& ts);
std::string subdivisions_to_json(const std::vector<Subdivision>& ss);

} // namespace polycorr
