#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace polycorr {

using Int = long long;

// Lattice point in the plane. All geometry below is exact integer arithmetic;
// coordinates stay small (desk scale), so long long never overflows here.
struct Pt {
    Int x = 0;
    Int y = 0;
    friend auto operator<=>(const Pt&, const Pt&) = default;
};

inline Pt operator+(Pt a, Pt b) { return {a.x + b.x, a.y + b.y}; }
inline Pt operator-(Pt a, Pt b) { return {a.x - b.x, a.y - b.y}; }

inline Int cross(Pt a, Pt b) { return a.x * b.y - a.y * b.x; }
inline Int dot(Pt a, Pt b) { return a.x * b.x + a.y * b.y; }

// Signed orientation of the triple (i, j, k), computed at the middle point:
// cross(i - j, k - j). Positive triples are the admissible ones throughout;
// |orient2| is the normalized (doubled) area of the triangle.
Int orient2(Pt i, Pt j, Pt k);

// Shoelace sum over a closed cycle; positive for counterclockwise traversal.
Int twice_signed_area(const std::vector<Pt>& cycle);

bool collinear(Pt a, Pt b, Pt c);

// p lies on the closed segment [a, b].
bool on_segment(Pt p, Pt a, Pt b);

// Closed segments [a,b] and [c,d] share at least one point.
bool segments_intersect(Pt a, Pt b, Pt c, Pt d);

// Exact point-vs-simple-cycle classification: +1 strictly inside, 0 on the
// boundary curve, -1 strictly outside. Works for either orientation.
int point_vs_cycle(Pt p, const std::vector<Pt>& cycle);

// p lies on the polyline of the (closed) cycle.
bool on_cycle(Pt p, const std::vector<Pt>& cycle);

// Winding number of an arbitrary closed lattice cycle around p. The cycle may
// self-intersect; p must not lie on the curve.
Int winding_number(const std::vector<Pt>& cycle, Pt p);

// Number of lattice points on the closed curve of the cycle (each edge
// contributes gcd(|dx|, |dy|) half-open points).
Int boundary_lattice_count(const std::vector<Pt>& cycle);

// Simple clockwise lattice polygon given by its listed boundary sequence.
// Listed points must be distinct and the curve simple; consecutive collinear
// triples are accepted (a listed point may subdivide a geometric edge) unless
// allow_collinear is false. The shoelace sum must be strictly negative, i.e.
// the listing runs clockwise.
class LatticePolygon {
  public:
    static LatticePolygon from_boundary(std::vector<Pt> boundary,
                                        bool allow_collinear = true);

    const std::vector<Pt>& boundary() const { return boundary_; }
    int n() const { return static_cast<int>(boundary_.size()); }

    // Positive doubled area of the enclosed region.
    Int twice_area() const { return -twice_signed_area(boundary_); }

  private:
    explicit LatticePolygon(std::vector<Pt> boundary)
        : boundary_(std::move(boundary)) {}
    std::vector<Pt> boundary_;
};

// All lattice points of the closed region, sorted.
std::vector<Pt> lattice_points(const LatticePolygon& poly);

// Lattice points strictly inside the region (off the boundary curve), sorted.
std::vector<Pt> interior_points(const LatticePolygon& poly);

// Key equal for two polygons exactly when one is a lattice translate of the
// other up to cyclic rotation of the boundary listing.
std::string canonical_key(const LatticePolygon& poly);

// True when the cycle bounds a convex polygon traversed once, in either
// direction. Collinear corners are tolerated: the strict corners must form the
// convex hull in matching cyclic order and every flat run must move forward.
bool is_convex_cell(const std::vector<Pt>& cycle);

// Convexity with every listed corner strict (no collinear triples) and the
// cycle running clockwise. This is the admissibility test for interaction
// cells.
bool is_strict_convex_cw_cell(const std::vector<Pt>& cycle);

// Centered coordinate box {|x| <= n, |y| <= n}.
struct IndexBox {
    Int n = 0;
    bool contains(Pt p) const;
    // All points of the box in sorted order.
    std::vector<Pt> points() const;
};

// Smallest centered box containing every listed boundary point.
IndexBox covering_box(const LatticePolygon& poly);

// ---------------------------------------------------------------------------
// Arbitrary-dimension primitives (desk scale: d <= 4).

using PtD = std::vector<Int>;

// Determinant of the (d x d) edge matrix rows (pts[k] - pts[0]), k = 1..d.
// pts must hold d+1 points of dimension d. Sign decides admissibility of the
// simplex, |value| is its normalized volume.
Int orient_d(const std::vector<PtD>& pts);

// Exact integer determinant (Bareiss elimination).
Int det_int(std::vector<std::vector<Int>> m);

// Boundary simplicial complex of a convex lattice polytope. Facets store
// vertex indices, d per facet, oriented outward: appending any interior point
// to a facet tuple yields a negative orient_d.
struct SimplicialPolytope {
    int d = 3;
    std::vector<PtD> vertices;
    std::vector<std::vector<int>> facets;
};

// Validates dimension bookkeeping, facet non-degeneracy, the ridge condition
// (every (d-1)-subset of a facet shared by exactly two facets) and the
// outward orientation of every facet. Throws schema_error on violation.
SimplicialPolytope make_simplicial_polytope(int d, std::vector<PtD> vertices,
                                            std::vector<std::vector<int>> facets);

// +1 strictly inside, 0 on the boundary, -1 outside (convex polytope).
int point_vs_polytope(const PtD& p, const SimplicialPolytope& poly);

std::vector<PtD> lattice_points(const SimplicialPolytope& poly);
std::vector<PtD> interior_points(const SimplicialPolytope& poly);

// d! times the Euclidean volume.
Int normalized_volume(const SimplicialPolytope& poly);

// Translation-invariant key: equal iff the vertex sets and facet index sets
// agree after shifting the bounding-box corner to the origin.
std::string canonical_key(const SimplicialPolytope& poly);

} // namespace polycorr
