#pragma once

#include "polycorr/genpoly.hpp"
#include "polycorr/geometry.hpp"

#include <vector>

namespace polycorr {

enum class GaussianVariant {
    hermitian_n, // reference one-matrix model, propagator 1/N
    deformed_2d, // lattice-indexed model, propagator 1/mu
};

// Parameters of the Gaussian measure used by the pairing engines. A zero box
// (n == 0) leaves factor indices unconstrained.
struct GaussianSpec {
    GaussianVariant variant = GaussianVariant::deformed_2d;
    IndexBox box{};
    bool strict_box = false; // correlator_wick sums internal indices over the
                             // whole box instead of the polygon's points
    int pairing_cap = 16;    // max monomial length for brute pairing sums
};

// One matrix-entry factor H[row, col]. Indices are lattice points; the
// reference Hermitian model embeds scalar indices on the x-axis (i -> {i, 0}).
struct Factor {
    Pt row;
    Pt col;
};

using Monomial = std::vector<Factor>;

// Two-point function of the Gaussian measure: nonzero exactly when the
// factors are mutually transposed, with the variant's weight.
GenPoly propagator(const Factor& a, const Factor& b, const GaussianSpec& spec);

// Full pairing sum over perfect matchings of the factors; zero for odd
// length, 1 for the empty product. Throws std::invalid_argument beyond the
// pairing cap or when a factor index leaves a nonzero box.
GenPoly wick_expectation(const Monomial& m, const GaussianSpec& spec);

// Gaussian moment of the k-th power trace in the reference model, as an exact
// polynomial in N. The normalized form is N<Tr H^k> (propagator weights
// included): each pairing lands on N^{2-2g} so the coefficients count
// gluings by genus. The raw form drops the propagator weights and the outer
// N, counting index loops: leading term Catalan(k/2) * N^{k/2+1}. k must be
// even and positive; throws std::invalid_argument otherwise or beyond the cap.
GenPoly hmm_trace_moment(int k, bool raw = false);

// Gaussian-side evaluation of the order-k interaction term against the
// polygon's boundary word: the coefficient of beta^k as a pairing sum over
// k-multisets of admissible triangles, carrying mu^{-(3k+m)/2} and the full
// x-deformation. Internal indices run over the polygon's lattice points, or
// over the whole index box when spec.strict_box is set (the box must contain
// the polygon).
GenPoly correlator_wick(const LatticePolygon& poly, int k,
                        const GaussianSpec& spec);

// Expectation of the boundary word of an arbitrary closed index cycle in the
// convex-cell model, truncated to at most max_cells interaction cells. Cell
// corners range over the given region; each cell of q+2 corners contributes
// t_q, its rotation count and per-corner x-weights. The cycle may revisit
// points (consecutive entries must differ); immediate back-and-forth lobes
// self-pair. This is the subdivision-side counterpart of correlator_wick.
GenPoly cell_expectation(const std::vector<Pt>& cycle,
                         const std::vector<Pt>& region, int max_cells);

} // namespace polycorr
