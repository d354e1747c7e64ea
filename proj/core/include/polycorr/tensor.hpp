#pragma once

#include "polycorr/genpoly.hpp"
#include "polycorr/geometry.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace polycorr {

// Gluing tree for the rank-d interaction cells. Every vertex carries d+1
// attachment slots numbered 0..d; an internal edge joins two slots of two
// distinct vertices, and every slot not used by an internal edge is open.
// `marked` singles out one open slot (vertex, slot), or {-1, -1} for none.
struct Tree {
    int d = 3;
    int vertices = 1;
    std::vector<std::array<int, 4>> edges;  // vertex, slot, vertex, slot
    std::array<int, 2> marked{-1, -1};
};

// Checks slot ranges, per-vertex slot uniqueness, connectivity, acyclicity
// and the marked slot being open. Returns the tree unchanged, throws
// schema_error otherwise.
Tree validate_tree(const Tree& t);

// Open slots (vertex, slot), sorted.
std::vector<std::array<int, 2>> open_edges(const Tree& t);

// Number of open slots; always (d+1) + (V-1)(d-1) on a valid tree.
int open_edge_count(const Tree& t);

// Rooted coding of the tree read from one open slot. Distinguishes slot
// numbers, so it keys a (tree, marked slot) pair up to index relabeling.
std::string tree_code_rooted(const Tree& t, std::array<int, 2> root);

// Minimum of the rooted codings over all open slots; canonical key of the
// unmarked tree. The marked slot is ignored.
std::string tree_code(const Tree& t);

// Number of vertices encoded in a rooted or canonical code.
int tree_code_vertices(const std::string& code);

// JSON round trip, e.g. {"d":3,"vertices":2,"edges":[[0,0,1,0]],"marked":[0,1]}.
Tree parse_tree_json(const std::string& text);
std::string tree_to_json(const Tree& t);

// Joins open slot `ea` of `a` to open slot `eb` of `b`. Vertices of `b` are
// reindexed after those of `a`. A marked slot of `a` survives unless it is
// `ea` itself; a marked slot of `b` is dropped.
Tree glue_tree(const Tree& a, std::array<int, 2> ea,
               const Tree& b, std::array<int, 2> eb);

// Glues slot `vb` of `b` onto every open slot of `a` except `va`; each
// result is marked at `va`. Sorted by rooted code.
std::vector<Tree> tree_gluing_set(const Tree& a, std::array<int, 2> va,
                                  const Tree& b, std::array<int, 2> vb);

// Canonical unmarked trees with at most max_vertices vertices, sorted by
// code. Desk scale: the count grows quickly with the bound.
std::vector<Tree> enumerate_trees(int d, int max_vertices);

// Simplex images of the tree vertices, one (d+1)-tuple each. Slot k of a
// vertex corresponds to the facet of its tuple omitting entry k. Tuples
// joined by an edge must carry the shared facet in mutually reversed order.
struct Placement {
    std::vector<std::vector<PtD>> simplex;
};

// 1 when the d+1 points are positively oriented, 0 otherwise.
int omega_simplex(const std::vector<PtD>& pts);

// Edge consistency of the tuples, including nondegeneracy of every simplex.
bool placement_consistent(const Tree& t, const Placement& p);

// Union polytope of a placement. Accepted when some connected build order of
// the tree keeps every partial union a convex body: simplices pairwise
// interior-disjoint, hull volume equal to the volume sum, every corner point
// a hull vertex and every hull facet spanned by exactly d points. Returns
// nothing when rejected.
std::optional<SimplicialPolytope> polytope_of_tree(const Tree& t, const Placement& p);

// Product of omega_simplex over the vertices, gated by union acceptance.
int tree_potential_weight(const Tree& t, const Placement& p);

// Orientation pattern of the boundary word: per facet (in the order of
// sorted point tuples), false selects the ascending tuple and true its
// last-two swap. Chosen lexicographically minimal among the patterns that
// pair against a positively oriented cone tiling pulled from the lex-least
// vertex. Throws schema_error when that tiling degenerates.
std::vector<bool> boundary_pattern(const SimplicialPolytope& poly);

// Correlator of one target with its value over the tree variables.
struct TensorCorrelator {
    SimplicialPolytope target;
    GenPoly value;
};

// Tiling route: sum over partitions of the target into accepted cell
// placements with trees of at most max_tree_vertices vertices. Each tiling
// contributes its orientation-matching count times mu^-(number of facet
// pairs) times the tree-variable monomial.
GenPoly correlator_tensor_direct(const SimplicialPolytope& poly,
                                 int max_tree_vertices);

// Pairing route at a fixed number of cells: Gaussian expectation of the
// boundary word against that many interaction cells, vacuum-normalized.
// Cells place their corners in `pool`; empty means the lattice points of
// the target.
GenPoly correlator_tensor_wick(const SimplicialPolytope& poly, int order,
                               int max_tree_vertices,
                               std::vector<PtD> pool = {});

// Trees whose single accepted cell covers the target exactly, keyed by
// canonical code with the number of such placements.
std::map<std::string, long long> single_cell_covers(const SimplicialPolytope& poly,
                                                    int max_tree_vertices);

// Truncation window for the commutator check: compared tree-variable degree,
// largest tree size kept in the output, and the cell budget of boundary
// evaluations.
struct TensorCheckCaps {
    int t_degree = 2;
    int tree_vertices = 4;
    int eval_cells = 2;
};

// Commutator identity of the marked-tree constraint operators on one
// fixture: both operator orders on the left against the gluing-set
// difference on the right, evaluated through the pairing engine and compared
// inside the window. The marked slots of t1 and t2 are taken from the
// arguments, not from the trees.
bool virasoro_like_check(const Tree& t1, std::array<int, 2> v1,
                         const Tree& t2, std::array<int, 2> v2,
                         const SimplicialPolytope& fixture,
                         const TensorCheckCaps& caps = {});

} // namespace polycorr
