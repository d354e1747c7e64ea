#pragma once

#include "polycorr/genpoly.hpp"
#include "polycorr/geometry.hpp"
#include "polycorr/triangulate.hpp"

namespace polycorr {

// Triangulation-side generating function: one term per triangulation, beta
// graded by triangle count, x exponents the characteristic function in
// normalized-volume units.
GenPoly correlator_direct(const LatticePolygon& poly);

inline int beta_degree(const GenPoly& p) { return p.beta_degree(); }

// Cell-subdivision generating function: one term per subdivision carrying
// the rotation multiplicity of its cells, mu^-(edge count), one t_q factor
// per (q+2)-corner cell and the same x grading per cell corner.
GenPoly subdivision_genfun(const LatticePolygon& poly);

} // namespace polycorr
