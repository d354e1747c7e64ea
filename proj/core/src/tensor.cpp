#include "polycorr/tensor.hpp"
#include "polycorr/errors.hpp"

#include <json.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>

namespace polycorr {

namespace {

using nlohmann::json;
using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// ---------------------------------------------------------------------------
// Tuple helpers.

std::vector<PtD> facet_tuple(const std::vector<PtD>& tuple, int k) {
    std::vector<PtD> out;
    out.reserve(tuple.size() - 1);
    for (int i = 0; i < static_cast<int>(tuple.size()); ++i)
        if (i != k) out.push_back(tuple[i]);
    return out;
}

std::vector<PtD> reversed(std::vector<PtD> v) {
    std::reverse(v.begin(), v.end());
    return v;
}

std::vector<PtD> insert_at(std::vector<PtD> base, int pos, const PtD& p) {
    base.insert(base.begin() + pos, p);
    return base;
}

// Swap parity of a tuple of distinct points against its ascending order:
// false for even, true for odd.
bool tuple_minus_class(const std::vector<PtD>& tuple) {
    int inv = 0;
    for (size_t i = 0; i < tuple.size(); ++i)
        for (size_t j = i + 1; j < tuple.size(); ++j)
            if (tuple[j] < tuple[i]) ++inv;
    return inv % 2 != 0;
}

std::vector<PtD> sorted_set(std::vector<PtD> tuple) {
    std::sort(tuple.begin(), tuple.end());
    return tuple;
}

std::string pts_key(const std::vector<PtD>& pts) {
    std::ostringstream os;
    for (const PtD& p : pts) {
        for (Int c : p) os << c << ',';
        os << ';';
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Exact feasibility of a strict linear system sum(c_i x_i) > rhs by variable
// elimination. Coefficients stay integral; every derived row is reduced.

struct StrictRow {
    std::vector<Int> c;
    Int rhs = 0;
};

void reduce_row(StrictRow& r) {
    Int g = r.rhs < 0 ? -r.rhs : r.rhs;
    for (Int v : r.c) g = std::gcd(g, v < 0 ? -v : v);
    if (g > 1) {
        for (Int& v : r.c) v /= g;
        r.rhs /= g;
    }
}

bool strict_feasible(std::vector<StrictRow> rows, int dim) {
    for (int v = 0; v < dim; ++v) {
        std::vector<StrictRow> lower, upper, rest;
        for (auto& r : rows) {
            if (r.c[v] > 0)
                lower.push_back(std::move(r));
            else if (r.c[v] < 0)
                upper.push_back(std::move(r));
            else
                rest.push_back(std::move(r));
        }
        for (const auto& lo : lower)
            for (const auto& up : upper) {
                StrictRow r;
                r.c.assign(dim, 0);
                const Int a = lo.c[v];
                const Int b = -up.c[v];
                for (int i = 0; i < dim; ++i) r.c[i] = b * lo.c[i] + a * up.c[i];
                r.rhs = b * lo.rhs + a * up.rhs;
                reduce_row(r);
                rest.push_back(std::move(r));
            }
        rows = std::move(rest);
        for (auto it = rows.begin(); it != rows.end();) {
            bool zero = true;
            for (Int c : it->c)
                if (c != 0) {
                    zero = false;
                    break;
                }
            if (!zero) {
                ++it;
                continue;
            }
            if (it->rhs >= 0) return false;
            it = rows.erase(it);
        }
    }
    for (const auto& r : rows)
        if (r.rhs >= 0) return false;
    return true;
}

// Normal vector of the hyperplane through d points, chosen so that
// n . (x - q0) equals the determinant with the facet edges as leading rows
// and x - q0 last.
std::vector<Int> facet_normal(const std::vector<PtD>& q) {
    const int d = static_cast<int>(q.size());
    std::vector<std::vector<Int>> edges(d - 1, std::vector<Int>(d));
    for (int i = 1; i < d; ++i)
        for (int j = 0; j < d; ++j) edges[i - 1][j] = q[i][j] - q[0][j];
    std::vector<Int> n(d, 0);
    for (int j = 0; j < d; ++j) {
        std::vector<std::vector<Int>> minor(d - 1, std::vector<Int>(d - 1));
        for (int r = 0; r < d - 1; ++r) {
            int cc = 0;
            for (int cidx = 0; cidx < d; ++cidx) {
                if (cidx == j) continue;
                minor[r][cc++] = edges[r][cidx];
            }
        }
        Int m = det_int(minor);
        n[j] = ((d - 1 + j) % 2 == 0) ? m : -m;
    }
    return n;
}

// Strict interior of a nondegenerate simplex as rows n.x > rhs.
std::vector<StrictRow> interior_rows(const std::vector<PtD>& tuple) {
    const int d = static_cast<int>(tuple.size()) - 1;
    std::vector<StrictRow> rows;
    for (int k = 0; k <= d; ++k) {
        const std::vector<PtD> f = facet_tuple(tuple, k);
        std::vector<Int> n = facet_normal(f);
        Int c = 0, opp = 0;
        for (int j = 0; j < d; ++j) {
            c += n[j] * f[0][j];
            opp += n[j] * tuple[k][j];
        }
        StrictRow r;
        if (opp > c) {
            r.c = n;
            r.rhs = c;
        } else {
            r.c = n;
            for (Int& v : r.c) v = -v;
            r.rhs = -c;
        }
        reduce_row(r);
        rows.push_back(std::move(r));
    }
    return rows;
}

bool simplices_overlap(const std::vector<PtD>& a, const std::vector<PtD>& b) {
    static std::map<std::string, bool> memo;
    std::string ka = pts_key(sorted_set(a)), kb = pts_key(sorted_set(b));
    if (kb < ka) std::swap(ka, kb);
    const std::string key = ka + "|" + kb;
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    std::vector<StrictRow> rows = interior_rows(a);
    std::vector<StrictRow> rb = interior_rows(b);
    rows.insert(rows.end(), rb.begin(), rb.end());
    const bool r = strict_feasible(std::move(rows), static_cast<int>(a.size()) - 1);
    memo.emplace(key, r);
    return r;
}

// ---------------------------------------------------------------------------
// Exact convex hull of a small point set by supporting-plane scan. Facet
// planes may hold more than d points; their polygons are fanned into
// outward-oriented simplices. all_extreme reports whether every input point
// is a vertex of the hull.

struct HullD {
    bool full_dim = false;
    bool all_extreme = false;
    Int vol = 0;                              // d! times Euclidean volume
    std::vector<std::vector<int>> tri_facets; // outward point-index tuples
};

// Orders coplanar points into their convex polygon; returns an empty list
// when some point is not extreme in the plane. dim - 1 = 2 projects along
// the largest normal coordinate, dim - 1 = 1 sorts along the segment.
std::vector<int> plane_polygon(const std::vector<PtD>& pts, const std::vector<int>& on,
                               const std::vector<Int>& normal) {
    const int d = static_cast<int>(normal.size());
    if (static_cast<int>(on.size()) == d) return on;
    if (d == 2) {
        std::vector<int> cyc = on;
        std::sort(cyc.begin(), cyc.end(),
                  [&](int a, int b) { return pts[a] < pts[b]; });
        if (cyc.size() > 2) return {};
        return cyc;
    }
    if (d != 3) return {};
    int drop = 0;
    for (int j = 1; j < 3; ++j) {
        Int a = normal[j] < 0 ? -normal[j] : normal[j];
        Int b = normal[drop] < 0 ? -normal[drop] : normal[drop];
        if (a > b) drop = j;
    }
    auto proj = [&](int idx, int axis) {
        int cols[2];
        int cc = 0;
        for (int j = 0; j < 3; ++j)
            if (j != drop) cols[cc++] = j;
        return pts[idx][cols[axis]];
    };
    // Gift wrapping on the projected polygon.
    int start = on[0];
    for (int i : on)
        if (std::pair(proj(i, 0), proj(i, 1)) < std::pair(proj(start, 0), proj(start, 1)))
            start = i;
    std::vector<int> cyc{start};
    int cur = start;
    for (;;) {
        int next = -1;
        for (int cand : on) {
            if (cand == cur) continue;
            if (next == -1) {
                next = cand;
                continue;
            }
            const Int ax = proj(next, 0) - proj(cur, 0), ay = proj(next, 1) - proj(cur, 1);
            const Int bx = proj(cand, 0) - proj(cur, 0), by = proj(cand, 1) - proj(cur, 1);
            const Int cr = ax * by - ay * bx;
            if (cr < 0 || (cr == 0 && ax * ax + ay * ay < bx * bx + by * by)) next = cand;
        }
        if (next == start) break;
        cyc.push_back(next);
        cur = next;
        if (cyc.size() > on.size()) return {};
    }
    if (cyc.size() != on.size()) return {};
    return cyc;
}

HullD brute_hull(const std::vector<PtD>& pts) {
    HullD h;
    const int n = static_cast<int>(pts.size());
    if (n == 0) return h;
    const int d = static_cast<int>(pts[0].size());
    PtD sum(d, 0);
    for (const PtD& p : pts)
        for (int j = 0; j < d; ++j) sum[j] += p[j];

    // Supporting planes, canonicalized as (outward normal, offset).
    std::set<std::pair<std::vector<Int>, Int>> planes;
    std::vector<int> idx(d);
    std::vector<bool> covered(n, false);

    std::function<void(int, int)> scan = [&](int pos, int first) {
        if (pos == d) {
            std::vector<PtD> q(d);
            for (int i = 0; i < d; ++i) q[i] = pts[idx[i]];
            std::vector<Int> nv = facet_normal(q);
            bool zero = true;
            for (Int v : nv)
                if (v != 0) zero = false;
            if (zero) return;
            Int c = 0;
            for (int j = 0; j < d; ++j) c += nv[j] * q[0][j];
            bool above = false, below = false;
            for (int i = 0; i < n; ++i) {
                Int s = -c;
                for (int j = 0; j < d; ++j) s += nv[j] * pts[i][j];
                if (s > 0) above = true;
                if (s < 0) below = true;
            }
            if (above && below) return;
            if (above) {
                for (Int& v : nv) v = -v;
                c = -c;
            }
            Int g = c < 0 ? -c : c;
            for (Int v : nv) g = std::gcd(g, v < 0 ? -v : v);
            if (g > 1) {
                for (Int& v : nv) v /= g;
                c /= g;
            }
            planes.emplace(nv, c);
            return;
        }
        for (int i = first; i < n; ++i) {
            idx[pos] = i;
            scan(pos + 1, i + 1);
        }
    };
    scan(0, 0);
    if (planes.empty()) return h;

    h.all_extreme = true;
    for (const auto& [nv, c] : planes) {
        std::vector<int> on;
        for (int i = 0; i < n; ++i) {
            Int s = -c;
            for (int j = 0; j < d; ++j) s += nv[j] * pts[i][j];
            if (s == 0) on.push_back(i);
        }
        std::vector<int> cyc = plane_polygon(pts, on, nv);
        if (cyc.empty()) {
            h.all_extreme = false;
            continue;
        }
        for (int i : on) covered[i] = true;
        std::vector<std::vector<int>> fans;
        if (d == 2)
            fans.push_back({cyc[0], cyc[1]});
        else
            for (size_t t = 1; t + 1 < cyc.size(); ++t)
                fans.push_back({cyc[0], cyc[t], cyc[t + 1]});
        for (std::vector<int>& tri : fans) {
            std::vector<PtD> tp(d);
            for (int i = 0; i < d; ++i) tp[i] = pts[tri[i]];
            std::vector<Int> tn = facet_normal(tp);
            Int tc = 0, sc = 0;
            for (int j = 0; j < d; ++j) {
                tc += tn[j] * tp[0][j];
                sc += tn[j] * sum[j];
            }
            // Outward means the averaged interior point sits on the negative
            // side of the oriented facet tuple.
            if (sc - static_cast<Int>(n) * tc > 0) std::swap(tri[d - 2], tri[d - 1]);
            h.tri_facets.push_back(tri);
        }
    }
    for (int i = 0; i < n; ++i)
        if (!covered[i]) h.all_extreme = false;

    // Volume via signed cones from pts[0] over the outward facet fan.
    for (const auto& tri : h.tri_facets) {
        std::vector<PtD> tp;
        for (int i : tri) tp.push_back(pts[i]);
        tp.push_back(pts[0]);
        h.vol -= orient_d(tp);
    }
    h.full_dim = h.vol > 0;
    return h;
}

// ---------------------------------------------------------------------------
// Union acceptance. A placement is kept when some connected build order of
// the tree makes every prefix a convex body: pairwise interior-disjoint
// simplices, hull volume matching the volume sum, every corner a hull vertex.

struct UnionCheck {
    bool accepted = false;
    std::vector<PtD> pts;                      // distinct corners of the union
    std::vector<std::vector<int>> tri_facets;  // outward hull facets
};

UnionCheck accept_union_core(const std::vector<std::vector<PtD>>& simplices,
                             const std::vector<std::pair<int, int>>& edges) {
    UnionCheck out;
    const int v = static_cast<int>(simplices.size());
    for (const auto& s : simplices)
        if (orient_d(s) == 0) return out;

    std::vector<Int> vols(v);
    for (int i = 0; i < v; ++i) {
        Int o = orient_d(simplices[i]);
        vols[i] = o < 0 ? -o : o;
    }
    std::vector<std::vector<bool>> overlap(v, std::vector<bool>(v, false));
    for (int i = 0; i < v; ++i)
        for (int j = i + 1; j < v; ++j)
            overlap[i][j] = overlap[j][i] = simplices_overlap(simplices[i], simplices[j]);

    std::vector<unsigned> adj(v, 0);
    for (auto [a, b] : edges) {
        adj[a] |= 1u << b;
        adj[b] |= 1u << a;
    }
    auto connected = [&](unsigned mask) {
        unsigned seen = mask & (mask ^ (mask - 1));
        for (;;) {
            unsigned grow = seen;
            for (int i = 0; i < v; ++i)
                if ((seen >> i) & 1u) grow |= adj[i] & mask;
            if (grow == seen) break;
            seen = grow;
        }
        return seen == mask;
    };

    std::map<unsigned, HullD> hulls;
    auto valid = [&](unsigned mask) -> const HullD* {
        for (int i = 0; i < v; ++i)
            if ((mask >> i) & 1u)
                for (int j = i + 1; j < v; ++j)
                    if (((mask >> j) & 1u) && overlap[i][j]) return nullptr;
        auto it = hulls.find(mask);
        if (it == hulls.end()) {
            std::vector<PtD> pts;
            for (int i = 0; i < v; ++i)
                if ((mask >> i) & 1u)
                    for (const PtD& p : simplices[i]) pts.push_back(p);
            std::sort(pts.begin(), pts.end());
            pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
            it = hulls.emplace(mask, brute_hull(pts)).first;
        }
        const HullD& h = it->second;
        Int want = 0;
        for (int i = 0; i < v; ++i)
            if ((mask >> i) & 1u) want += vols[i];
        if (!h.full_dim || !h.all_extreme || h.vol != want) return nullptr;
        return &h;
    };

    const unsigned full = v >= 32 ? 0 : (1u << v) - 1u;
    std::vector<char> reach(full + 1, 0);
    for (int i = 0; i < v; ++i) reach[1u << i] = 1;
    std::vector<unsigned> order;
    for (unsigned m = 1; m <= full; ++m) order.push_back(m);
    std::sort(order.begin(), order.end(), [](unsigned a, unsigned b) {
        return __builtin_popcount(a) < __builtin_popcount(b);
    });
    for (unsigned mask : order) {
        if (__builtin_popcount(mask) < 2) continue;
        if (!connected(mask)) continue;
        bool prev = false;
        for (int i = 0; i < v && !prev; ++i)
            if (((mask >> i) & 1u) && reach[mask ^ (1u << i)] && connected(mask ^ (1u << i)))
                prev = true;
        if (!prev) continue;
        if (valid(mask)) reach[mask] = 1;
    }
    if (!reach[full]) return out;
    const HullD* h = valid(full);
    if (!h) return out;

    std::vector<PtD> pts;
    for (const auto& s : simplices)
        for (const PtD& p : s) pts.push_back(p);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    out.accepted = true;
    out.pts = std::move(pts);
    out.tri_facets = h->tri_facets;
    return out;
}

// ---------------------------------------------------------------------------
// Tree internals.

struct TreeAdj {
    // per vertex, per slot: peer vertex and peer slot, or {-1, -1}
    std::vector<std::vector<std::array<int, 2>>> at;
};

TreeAdj tree_adjacency(const Tree& t) {
    TreeAdj a;
    a.at.assign(t.vertices, std::vector<std::array<int, 2>>(t.d + 1, {-1, -1}));
    for (const auto& e : t.edges) {
        a.at[e[0]][e[1]] = {e[2], e[3]};
        a.at[e[2]][e[3]] = {e[0], e[1]};
    }
    return a;
}

void rooted_code_rec(const Tree& t, const TreeAdj& a, int v, int entry, std::string& out) {
    out.push_back(static_cast<char>('0' + entry));
    out.push_back('(');
    for (int s = 0; s <= t.d; ++s) {
        if (s == entry) continue;
        const auto [pv, ps] = a.at[v][s];
        if (pv < 0)
            out.push_back('.');
        else
            rooted_code_rec(t, a, pv, ps, out);
    }
    out.push_back(')');
}

// Parses a rooted code back into a tree; vertices are numbered in the order
// the code visits them.
Tree tree_from_code(const std::string& code, int d) {
    Tree t;
    t.d = d;
    t.vertices = 0;
    size_t pos = 0;
    std::function<int(void)> rec = [&]() -> int {
        if (pos >= code.size() || code[pos] < '0' || code[pos] > '9')
            throw schema_error("bad tree code");
        const int entry = code[pos++] - '0';
        if (pos >= code.size() || code[pos] != '(') throw schema_error("bad tree code");
        ++pos;
        const int me = t.vertices++;
        for (int s = 0; s <= d; ++s) {
            if (s == entry) continue;
            if (pos >= code.size()) throw schema_error("bad tree code");
            if (code[pos] == '.') {
                ++pos;
                continue;
            }
            const int childslot = code[pos] - '0';
            const int child = rec();
            t.edges.push_back({me, s, child, childslot});
        }
        if (pos >= code.size() || code[pos] != ')') throw schema_error("bad tree code");
        ++pos;
        return me;
    };
    rec();
    if (pos != code.size()) throw schema_error("bad tree code");
    return t;
}

// Edges of a tree ordered so that each one extends the set already reached
// from vertex 0.
std::vector<std::array<int, 4>> bfs_edges(const Tree& t) {
    std::vector<std::array<int, 4>> out;
    std::vector<bool> seen(t.vertices, false);
    seen[0] = true;
    std::vector<std::array<int, 4>> pending = t.edges;
    while (!pending.empty()) {
        bool moved = false;
        for (auto it = pending.begin(); it != pending.end(); ++it) {
            auto e = *it;
            if (seen[e[0]] && !seen[e[2]]) {
                out.push_back(e);
                seen[e[2]] = true;
                pending.erase(it);
                moved = true;
                break;
            }
            if (seen[e[2]] && !seen[e[0]]) {
                out.push_back({e[2], e[3], e[0], e[1]});
                seen[e[0]] = true;
                pending.erase(it);
                moved = true;
                break;
            }
        }
        if (!moved) throw schema_error("tree is not connected");
    }
    return out;
}

// ---------------------------------------------------------------------------
// Cell universe over a fixed point pool: all accepted tree placements with
// their boundary factor monomials, plus the attachment graph they are
// enumerated with. Pairing variables are interned facet point sets with an
// orientation class bit.

struct CellEntry {
    std::string code;
    int verts = 0;
    std::vector<int> setids;   // sorted simplex set ids
    std::vector<int> factors;  // sorted variable ids
    long long mult = 0;
    Int vol = 0;
};

// One accepted placement of a marked tree, kept with its geometry so a later
// contraction can test whether attaching another placement stays a valid
// glued complex.
struct TreePlacement {
    int head = 0;                          // variable at the marked slot
    int mvtx = 0;                          // marked slot position
    int mslot = 0;
    std::vector<int> tids;                 // placement tuple per tree vertex
    std::vector<std::array<int, 4>> edges;
    std::vector<std::array<int, 2>> open;  // open (vertex, slot), mark excluded
};

struct Universe {
    int d = 3;
    int maxv = 1;
    std::vector<PtD> pool;

    std::vector<std::vector<PtD>> tuples;  // positively oriented (d+1)-tuples
    std::map<std::vector<PtD>, int> tuple_index;
    std::vector<int> tuple_set;
    std::vector<std::vector<PtD>> sets;
    std::vector<Int> setvol;
    std::vector<std::vector<char>> setdisj;
    std::vector<std::vector<std::vector<int>>> attach;  // [tuple][su*(d+1)+sw]

    std::map<std::pair<std::vector<PtD>, bool>, int> var_index;
    std::vector<std::pair<std::vector<PtD>, bool>> var_list;
    std::vector<int> var_rev;

    std::vector<CellEntry> cells;

    std::map<std::string, bool> accept_memo;
    std::map<std::pair<std::vector<int>, int>, GenPoly> eval_memo;

    std::vector<TreePlacement> placements;
    std::map<std::string, std::vector<int>> placement_memo;

    int intern_var(const std::vector<PtD>& set, bool minus) {
        auto key = std::make_pair(set, minus);
        auto it = var_index.find(key);
        if (it != var_index.end()) return it->second;
        const int id = static_cast<int>(var_list.size());
        var_index.emplace(key, id);
        var_list.push_back(key);
        var_rev.push_back(-1);
        auto rit = var_index.find(std::make_pair(set, !minus));
        if (rit != var_index.end()) {
            var_rev[id] = rit->second;
            var_rev[rit->second] = id;
        }
        return id;
    }

    int var_of_tuple(const std::vector<PtD>& facet) {
        return intern_var(sorted_set(facet), tuple_minus_class(facet));
    }
};

// Enumerates the placements of one tree over the universe pool: vertex 0
// runs through every positive tuple, every further vertex is forced by the
// attach rule at its edge. Prunes on pairwise overlap and on a volume cap.
void walk_placements(Universe& u, const Tree& tree, Int volcap, Int volexact,
                     const std::function<void(const std::vector<int>&)>& sink) {
    const auto edges = bfs_edges(tree);
    std::vector<int> tup(tree.vertices, -1);
    Int volsum = 0;

    std::function<void(size_t)> rec = [&](size_t ei) {
        if (ei == edges.size()) {
            if (volexact >= 0 && volsum != volexact) return;
            sink(tup);
            return;
        }
        const auto [pu, su, pw, sw] = edges[ei];
        const int base = tup[pu];
        for (int cand : u.attach[base][su * (u.d + 1) + sw]) {
            const Int cv = u.setvol[u.tuple_set[cand]];
            if (volcap >= 0 && volsum + cv > volcap) continue;
            bool bad = false;
            for (int q = 0; q < tree.vertices && !bad; ++q)
                if (tup[q] >= 0 && !u.setdisj[u.tuple_set[tup[q]]][u.tuple_set[cand]])
                    bad = true;
            if (bad) continue;
            tup[pw] = cand;
            volsum += cv;
            rec(ei + 1);
            volsum -= cv;
            tup[pw] = -1;
        }
    };

    for (int root = 0; root < static_cast<int>(u.tuples.size()); ++root) {
        const Int rv = u.setvol[u.tuple_set[root]];
        if (volcap >= 0 && rv > volcap) continue;
        tup[0] = root;
        volsum = rv;
        rec(0);
        volsum = 0;
        tup[0] = -1;
    }
}

bool placement_accepted(Universe& u, const Tree& tree, const std::vector<int>& tup) {
    std::ostringstream key;
    for (int t : tup) key << u.tuple_set[t] << ',';
    for (const auto& e : tree.edges) key << '|' << e[0] << ',' << e[2];
    const std::string k = key.str();
    auto it = u.accept_memo.find(k);
    if (it != u.accept_memo.end()) return it->second;
    std::vector<std::vector<PtD>> simp;
    for (int t : tup) simp.push_back(u.tuples[t]);
    std::vector<std::pair<int, int>> ed;
    for (const auto& e : tree.edges) ed.emplace_back(e[0], e[2]);
    const bool ok = accept_union_core(simp, ed).accepted;
    u.accept_memo.emplace(k, ok);
    return ok;
}

// Unglued facet variables of a placement, sorted.
std::vector<int> placement_factors(Universe& u, const Tree& tree, const std::vector<int>& tup) {
    std::vector<std::vector<bool>> used(tree.vertices, std::vector<bool>(u.d + 1, false));
    for (const auto& e : tree.edges) {
        used[e[0]][e[1]] = true;
        used[e[2]][e[3]] = true;
    }
    std::vector<int> out;
    for (int v = 0; v < tree.vertices; ++v)
        for (int s = 0; s <= u.d; ++s) {
            if (used[v][s]) continue;
            out.push_back(u.var_of_tuple(facet_tuple(u.tuples[tup[v]], s)));
        }
    std::sort(out.begin(), out.end());
    return out;
}

Universe& universe_for(const std::vector<PtD>& pool, int d, int maxv) {
    static std::map<std::string, std::unique_ptr<Universe>> cache;
    std::ostringstream os;
    os << d << '#' << maxv << '#' << pts_key(pool);
    const std::string key = os.str();
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;

    auto up = std::make_unique<Universe>();
    Universe& u = *up;
    u.d = d;
    u.maxv = maxv;
    u.pool = pool;

    // Positive tuples.
    const int n = static_cast<int>(pool.size());
    std::vector<int> pick;
    std::function<void(void)> gen = [&]() {
        if (static_cast<int>(pick.size()) == d + 1) {
            std::vector<PtD> tup;
            for (int i : pick) tup.push_back(pool[i]);
            if (orient_d(tup) > 0) {
                u.tuple_index.emplace(tup, static_cast<int>(u.tuples.size()));
                u.tuples.push_back(tup);
            }
            return;
        }
        for (int i = 0; i < n; ++i) {
            if (std::find(pick.begin(), pick.end(), i) != pick.end()) continue;
            pick.push_back(i);
            gen();
            pick.pop_back();
        }
    };
    gen();

    std::map<std::vector<PtD>, int> setidx;
    for (const auto& tup : u.tuples) {
        std::vector<PtD> s = sorted_set(tup);
        auto sit = setidx.find(s);
        if (sit == setidx.end()) {
            sit = setidx.emplace(s, static_cast<int>(u.sets.size())).first;
            u.sets.push_back(s);
            Int o = orient_d(tup);
            u.setvol.push_back(o < 0 ? -o : o);
        }
        u.tuple_set.push_back(sit->second);
    }
    const int ns = static_cast<int>(u.sets.size());
    u.setdisj.assign(ns, std::vector<char>(ns, 0));
    for (int i = 0; i < ns; ++i)
        for (int j = i; j < ns; ++j) {
            std::vector<PtD> a = u.sets[i], b = u.sets[j];
            const bool dis = (i != j) && !simplices_overlap(a, b);
            u.setdisj[i][j] = u.setdisj[j][i] = dis ? 1 : 0;
        }

    // Attachment graph: child tuple = reversed shared facet with the apex
    // inserted at the child slot.
    const int slots = (d + 1) * (d + 1);
    u.attach.assign(u.tuples.size(), std::vector<std::vector<int>>(slots));
    for (size_t t = 0; t < u.tuples.size(); ++t)
        for (int su = 0; su <= d; ++su) {
            const std::vector<PtD> base = reversed(facet_tuple(u.tuples[t], su));
            for (int sw = 0; sw <= d; ++sw)
                for (const PtD& apex : pool) {
                    auto cand = insert_at(base, sw, apex);
                    auto cit = u.tuple_index.find(cand);
                    if (cit != u.tuple_index.end())
                        u.attach[t][su * (d + 1) + sw].push_back(cit->second);
                }
        }

    // Accepted cells grouped by tree code, geometry and factor monomial.
    std::map<std::tuple<std::string, std::vector<int>, std::vector<int>>, long long> grouped;
    for (const Tree& tree : enumerate_trees(d, maxv)) {
        const std::string code = tree_code(tree);
        walk_placements(u, tree, /*volcap=*/-1, /*volexact=*/-1, [&](const std::vector<int>& tup) {
            if (!placement_accepted(u, tree, tup)) return;
            std::vector<int> sets;
            for (int t : tup) sets.push_back(u.tuple_set[t]);
            std::sort(sets.begin(), sets.end());
            grouped[{code, sets, placement_factors(u, tree, tup)}] += 1;
        });
    }
    for (const auto& [k, mult] : grouped) {
        CellEntry ce;
        ce.code = std::get<0>(k);
        ce.setids = std::get<1>(k);
        ce.factors = std::get<2>(k);
        ce.mult = mult;
        ce.verts = static_cast<int>(ce.setids.size());
        for (int s : ce.setids) ce.vol += u.setvol[s];
        u.cells.push_back(std::move(ce));
    }

    auto [pos, ok] = cache.emplace(key, std::move(up));
    (void)ok;
    return *pos->second;
}

// ---------------------------------------------------------------------------
// Gaussian pairing engine: balanced multisets of cells against a fixed
// boundary word. Matching counts are factorials per facet pair, repeated
// identical cells divide by their symmetry, and each propagator carries one
// inverse power of mu.

long long checked_ll(const BigRat& r) {
    if (boost::multiprecision::denominator(r) != 1)
        throw std::logic_error("pairing value is not integral");
    const BigInt n = boost::multiprecision::numerator(r);
    if (n > std::numeric_limits<long long>::max() || n < std::numeric_limits<long long>::min())
        throw std::logic_error("pairing value overflow");
    return static_cast<long long>(n);
}

BigInt big_factorial(int k) {
    BigInt f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

class PairEngine {
  public:
    PairEngine(const Universe& u, std::vector<int> word, int max_cells, bool exact)
        : u_(u), max_cells_(max_cells), exact_(exact) {
        cnt_.assign(u_.var_list.size(), 0);
        word_len_ = static_cast<int>(word.size());
        for (int v : word) add_var(v);
        max_cell_factors_ = 1;
        for (const auto& c : u_.cells)
            max_cell_factors_ = std::max(max_cell_factors_, static_cast<int>(c.factors.size()));
    }

    std::map<Exponent, BigRat> run() {
        dfs(0, 0);
        return acc_;
    }

  private:
    void add_var(int e) {
        const int r = u_.var_rev[e];
        if (r >= 0 && cnt_[e] < cnt_[r])
            --deficit_;
        else
            ++deficit_;
        if (cnt_[e]++ == 0) touched_.push_back(e);
    }

    void del_var(int e) {
        if (--cnt_[e] == 0) touched_.pop_back();
        const int r = u_.var_rev[e];
        if (r >= 0 && cnt_[e] < cnt_[r])
            ++deficit_;
        else
            --deficit_;
    }

    void dfs(int first, int depth) {
        if (deficit_ == 0 && (!exact_ || depth == max_cells_)) emit();
        if (depth == max_cells_) return;
        if (deficit_ > max_cell_factors_ * (max_cells_ - depth)) return;
        for (int c = first; c < static_cast<int>(u_.cells.size()); ++c) {
            for (int v : u_.cells[c].factors) add_var(v);
            chosen_.push_back(c);
            dfs(c, depth + 1);
            chosen_.pop_back();
            const auto& fs = u_.cells[c].factors;
            for (auto it = fs.rbegin(); it != fs.rend(); ++it) del_var(*it);
        }
    }

    void emit() {
        BigRat coeff = 1;
        for (int e : touched_) {
            const int r = u_.var_rev[e];
            if (r < 0 || cnt_[e] != cnt_[r]) return;  // unmatched class
            if (e < r) coeff *= big_factorial(cnt_[e]);
        }
        Exponent expo;
        int total = word_len_;
        for (size_t i = 0; i < chosen_.size();) {
            size_t j = i;
            while (j < chosen_.size() && chosen_[j] == chosen_[i]) ++j;
            const CellEntry& cell = u_.cells[chosen_[i]];
            const int rep = static_cast<int>(j - i);
            expo.ttree[cell.code] += rep;
            total += rep * static_cast<int>(cell.factors.size());
            BigRat sym = 1;
            for (int r = 0; r < rep; ++r) sym *= cell.mult;
            coeff *= sym / big_factorial(rep);
            i = j;
        }
        expo.mu = -total / 2;
        acc_[expo] += coeff;
    }

    const Universe& u_;
    int max_cells_;
    bool exact_;
    int word_len_ = 0;
    int max_cell_factors_ = 1;
    std::vector<int> cnt_;
    std::vector<int> touched_;
    std::vector<int> chosen_;
    int deficit_ = 0;
    std::map<Exponent, BigRat> acc_;
};

GenPoly engine_poly(const std::map<Exponent, BigRat>& acc) {
    GenPoly p;
    for (const auto& [e, c] : acc) {
        const long long v = checked_ll(c);
        if (v != 0) p.add_term(e, v);
    }
    return p;
}

// ---------------------------------------------------------------------------
// Boundary pattern: per facet of the target, the orientation class the
// boundary word carries. Solved by orienting the cone tiling pulled from the
// lex-least vertex and taking the lex-least flipped pattern.

std::vector<std::vector<PtD>> sorted_facet_sets(const SimplicialPolytope& poly) {
    std::vector<std::vector<PtD>> sets;
    for (const auto& f : poly.facets) {
        std::vector<PtD> s;
        for (int i : f) s.push_back(poly.vertices[i]);
        std::sort(s.begin(), s.end());
        sets.push_back(std::move(s));
    }
    std::sort(sets.begin(), sets.end());
    return sets;
}

std::vector<bool> boundary_pattern_impl(const SimplicialPolytope& poly) {
    const int d = poly.d;
    const std::vector<std::vector<PtD>> fsets = sorted_facet_sets(poly);
    PtD v0 = poly.vertices[0];
    for (const PtD& p : poly.vertices) v0 = std::min(v0, p);

    // Cone cells over the facets missing v0.
    std::vector<std::vector<PtD>> cones;
    Int volsum = 0;
    for (const auto& fs : fsets) {
        if (std::find(fs.begin(), fs.end(), v0) != fs.end()) continue;
        std::vector<PtD> cell = fs;
        cell.push_back(v0);
        const Int o = orient_d(cell);
        if (o == 0) continue;
        volsum += o < 0 ? -o : o;
        std::sort(cell.begin(), cell.end());
        cones.push_back(std::move(cell));
    }
    if (volsum != normalized_volume(poly))
        throw schema_error("cone tiling does not fill the polytope");

    // Facet incidence of the cone complex: boundary facets carry the pattern,
    // internal ones must pair with opposite classes.
    struct ConeFacet {
        int boundary = -1;            // index into fsets or -1
        std::array<int, 2> cells{-1, -1};
    };
    std::map<std::vector<PtD>, ConeFacet> inc;
    const int nc = static_cast<int>(cones.size());
    for (int c = 0; c < nc; ++c)
        for (int k = 0; k <= d; ++k) {
            std::vector<PtD> fs = facet_tuple(cones[c], k);
            auto& rec = inc[fs];
            if (rec.cells[0] < 0)
                rec.cells[0] = c;
            else if (rec.cells[1] < 0)
                rec.cells[1] = c;
            else
                throw schema_error("cone tiling facet shared three times");
        }
    for (auto& [fs, rec] : inc) {
        const auto bit = std::lower_bound(fsets.begin(), fsets.end(), fs);
        if (bit != fsets.end() && *bit == fs)
            rec.boundary = static_cast<int>(bit - fsets.begin());
        if (rec.boundary >= 0 && rec.cells[1] >= 0)
            throw schema_error("cone tiling boundary facet shared twice");
        if (rec.boundary < 0 && rec.cells[1] < 0)
            throw schema_error("cone tiling has an unmatched facet");
    }

    // Positive orderings of each cone cell with their facet classes.
    struct Choice {
        std::map<std::vector<PtD>, bool> cls;
    };
    std::vector<std::vector<Choice>> choices(nc);
    for (int c = 0; c < nc; ++c) {
        std::vector<PtD> tup = cones[c];
        std::sort(tup.begin(), tup.end());
        do {
            if (orient_d(tup) <= 0) continue;
            Choice ch;
            for (int k = 0; k <= d; ++k) {
                const std::vector<PtD> ft = facet_tuple(tup, k);
                ch.cls[sorted_set(ft)] = tuple_minus_class(ft);
            }
            choices[c].push_back(std::move(ch));
        } while (std::next_permutation(tup.begin(), tup.end()));
    }

    std::set<std::vector<bool>> patterns;
    std::vector<const Choice*> pick(nc, nullptr);
    std::function<void(int)> dfs = [&](int c) {
        if (c == nc) {
            std::vector<bool> pat(fsets.size(), false);
            for (int i = 0; i < nc; ++i)
                for (const auto& [fs, cls] : pick[i]->cls) {
                    const auto& rec = inc.at(fs);
                    if (rec.boundary >= 0) pat[rec.boundary] = !cls;  // flipped
                }
            patterns.insert(pat);
            return;
        }
        for (const Choice& ch : choices[c]) {
            bool ok = true;
            for (const auto& [fs, cls] : ch.cls) {
                const auto& rec = inc.at(fs);
                if (rec.boundary >= 0) continue;
                const int other = rec.cells[0] == c ? rec.cells[1] : rec.cells[0];
                if (other < c && pick[other]->cls.at(fs) == cls) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            pick[c] = &ch;
            dfs(c + 1);
            pick[c] = nullptr;
        }
    };
    dfs(0);
    if (patterns.empty()) throw schema_error("cone tiling admits no orientation");
    return *patterns.begin();
}

std::vector<int> boundary_word_vars(Universe& u, const SimplicialPolytope& poly) {
    const std::vector<std::vector<PtD>> fsets = sorted_facet_sets(poly);
    const std::vector<bool> pat = boundary_pattern(poly);
    std::vector<int> word;
    for (size_t i = 0; i < fsets.size(); ++i) word.push_back(u.intern_var(fsets[i], pat[i]));
    std::sort(word.begin(), word.end());
    return word;
}

// ---------------------------------------------------------------------------
// Direct route: exact tilings of the target by accepted cells.

struct GeomGroup {
    std::string code;
    std::vector<int> setids;
    Int vol = 0;
    std::vector<std::pair<std::vector<int>, long long>> options;  // factors, mult
};

GenPoly direct_sum(Universe& u, const std::vector<int>& word, Int target_vol) {
    std::map<std::pair<std::string, std::vector<int>>, size_t> index;
    std::vector<GeomGroup> groups;
    for (const CellEntry& c : u.cells) {
        auto key = std::make_pair(c.code, c.setids);
        auto it = index.find(key);
        if (it == index.end()) {
            it = index.emplace(key, groups.size()).first;
            GeomGroup g;
            g.code = c.code;
            g.setids = c.setids;
            g.vol = c.vol;
            groups.push_back(std::move(g));
        }
        groups[it->second].options.emplace_back(c.factors, c.mult);
    }

    GenPoly out;
    std::vector<int> chosen;
    std::vector<int> occupied;  // set ids in use

    auto disjoint_from_chosen = [&](const GeomGroup& g) {
        for (int s : g.setids)
            for (int t : occupied)
                if (!u.setdisj[s][t]) return false;
        return true;
    };

    // Value of one complete tiling: sum over per-cell orientation options of
    // the orientation-matching count against the boundary word.
    auto emit = [&]() {
        std::function<void(size_t, std::map<int, int>&, long long, int, Exponent)> rec =
            [&](size_t gi, std::map<int, int>& cnt, long long mult, int total, Exponent expo) {
                if (gi == chosen.size()) {
                    long long coeff = mult;
                    for (const auto& [v, k] : cnt) {
                        const int r = u.var_rev[v];
                        if (r < 0 || cnt.count(r) == 0 || cnt.at(r) != k) return;
                        if (v < r)
                            for (int i = 2; i <= k; ++i) coeff *= i;
                    }
                    expo.mu = -total / 2;
                    out.add_term(expo, coeff);
                    return;
                }
                const GeomGroup& g = groups[chosen[gi]];
                for (const auto& [factors, m] : g.options) {
                    for (int v : factors) ++cnt[v];
                    Exponent e2 = expo;
                    e2.ttree[g.code] += 1;
                    rec(gi + 1, cnt, mult * m, total + static_cast<int>(factors.size()), e2);
                    for (int v : factors) {
                        auto it = cnt.find(v);
                        if (--it->second == 0) cnt.erase(it);
                    }
                }
            };
        std::map<int, int> cnt;
        for (int v : word) ++cnt[v];
        Exponent expo;
        rec(0, cnt, 1, static_cast<int>(word.size()), expo);
    };

    std::function<void(size_t, Int)> rec = [&](size_t first, Int vol) {
        if (vol == target_vol) {
            emit();
            return;
        }
        for (size_t gi = first; gi < groups.size(); ++gi) {
            const GeomGroup& g = groups[gi];
            if (vol + g.vol > target_vol) continue;
            if (!disjoint_from_chosen(g)) continue;
            chosen.push_back(static_cast<int>(gi));
            occupied.insert(occupied.end(), g.setids.begin(), g.setids.end());
            rec(gi + 1, vol + g.vol);
            occupied.resize(occupied.size() - g.setids.size());
            chosen.pop_back();
        }
    };
    rec(0, 0);
    return out;
}

// ---------------------------------------------------------------------------
// Constraint-operator calculus for the commutator check. States are boundary
// factor multisets with polynomial coefficients; the three operator pieces
// act by tree-variable differentiation (with cell extraction), by gluing
// sums, and by contraction against a matching boundary factor.
//
// A state key stores two sorted factor lists joined by a -1 marker: first the
// factors the contraction piece may still consume, then factors pinned by a
// derivative piece. Contraction never consumes a pinned factor; without that
// ordering rule the compositions in the commutator are ambiguous. Live factors
// that a contraction itself released are stored as placement tags rather than
// bare variable ids, so a second contraction landing on them can verify the
// combined geometry; tags decode back to their variables at evaluation.

using StateSum = std::map<std::vector<int>, GenPoly>;

std::vector<int> state_key(const std::vector<int>& live, const std::vector<int>& pinned) {
    std::vector<int> out = live;
    out.push_back(-1);
    out.insert(out.end(), pinned.begin(), pinned.end());
    return out;
}

void split_state(const std::vector<int>& key, std::vector<int>& live,
                 std::vector<int>& pinned) {
    const auto sep = std::find(key.begin(), key.end(), -1);
    live.assign(key.begin(), sep);
    pinned.assign(sep + 1, key.end());
}

void state_add(StateSum& s, const std::vector<int>& b, const GenPoly& p) {
    if (p.is_zero()) return;
    auto it = s.find(b);
    if (it == s.end())
        s.emplace(b, p);
    else {
        it->second += p;
        if (it->second.is_zero()) s.erase(it);
    }
}

// d/dt of one tree variable inside the coefficient polynomial.
GenPoly ttree_deriv(const GenPoly& p, const std::string& code) {
    GenPoly out;
    for (const auto& [e, c] : p.terms()) {
        auto it = e.ttree.find(code);
        if (it == e.ttree.end()) continue;
        Exponent e2 = e;
        const int k = it->second;
        if (k == 1)
            e2.ttree.erase(code);
        else
            e2.ttree[code] = k - 1;
        out.add_term(e2, c * k);
    }
    return out;
}

std::vector<int> with_factors(const std::vector<int>& b, const std::vector<int>& add) {
    std::vector<int> out = b;
    out.insert(out.end(), add.begin(), add.end());
    std::sort(out.begin(), out.end());
    return out;
}

// Every way a host tree (given by canonical code) arises by gluing the marked
// tree onto one open slot of a smaller tree, returning the smaller tree's code
// once per realizing slot. Cutting the host across each internal edge supplies
// the candidate smaller trees; counting by cut direction instead would double
// hosts whose two halves are exchanged by a symmetry.
const std::vector<std::string>& splits_matching(const std::string& host_code, int d,
                                                const std::string& marked_rooted) {
    static std::map<std::pair<std::string, std::string>, std::vector<std::string>> memo;
    const auto key = std::make_pair(host_code, marked_rooted);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;

    const Tree host = tree_from_code(host_code, d);
    const Tree part = tree_from_code(marked_rooted, d);
    const std::array<int, 2> pmark{0, marked_rooted[0] - '0'};

    std::set<std::string> cands;
    for (const auto& e : host.edges)
        for (int dir = 0; dir < 2; ++dir) {
            const int av = dir == 0 ? e[0] : e[2];
            // Component containing av once the edge is cut.
            Tree side;
            side.d = host.d;
            std::vector<int> map(host.vertices, -1);
            std::vector<int> stack{av};
            map[av] = 0;
            side.vertices = 1;
            while (!stack.empty()) {
                const int v = stack.back();
                stack.pop_back();
                for (const auto& e2 : host.edges) {
                    if (e2 == e) continue;
                    int to = -1;
                    if (e2[0] == v)
                        to = e2[2];
                    else if (e2[2] == v)
                        to = e2[0];
                    if (to < 0 || map[to] >= 0) continue;
                    map[to] = side.vertices++;
                    stack.push_back(to);
                }
            }
            if (side.vertices + part.vertices != host.vertices) continue;
            for (const auto& e2 : host.edges) {
                if (e2 == e) continue;
                if (map[e2[0]] >= 0 && map[e2[2]] >= 0)
                    side.edges.push_back({map[e2[0]], e2[1], map[e2[2]], e2[3]});
            }
            cands.insert(tree_code(side));
        }

    std::vector<std::string> out;
    for (const std::string& cand : cands) {
        const Tree rest = tree_from_code(cand, d);
        for (const auto& slot : open_edges(rest))
            if (tree_code(glue_tree(rest, slot, part, pmark)) == host_code)
                out.push_back(cand);
    }
    std::sort(out.begin(), out.end());
    auto [pos, ok] = memo.emplace(key, std::move(out));
    (void)ok;
    return pos->second;
}

// Accepted placements of a marked tree, registered individually so a later
// contraction can reuse their geometry. Returns indices into the registry.
const std::vector<int>& marked_placements(Universe& u, const Tree& tree, std::array<int, 2> mark) {
    const std::string key = tree_code_rooted(tree, mark);
    auto it = u.placement_memo.find(key);
    if (it != u.placement_memo.end()) return it->second;

    std::vector<int> ids;
    walk_placements(u, tree, -1, -1, [&](const std::vector<int>& tup) {
        if (!placement_accepted(u, tree, tup)) return;
        TreePlacement p;
        p.mvtx = mark[0];
        p.mslot = mark[1];
        p.head = u.var_of_tuple(facet_tuple(u.tuples[tup[mark[0]]], mark[1]));
        p.tids = tup;
        p.edges = tree.edges;
        std::vector<std::vector<bool>> used(tree.vertices, std::vector<bool>(u.d + 1, false));
        for (const auto& e : tree.edges) {
            used[e[0]][e[1]] = true;
            used[e[2]][e[3]] = true;
        }
        used[mark[0]][mark[1]] = true;
        for (int v = 0; v < tree.vertices; ++v)
            for (int s = 0; s <= u.d; ++s)
                if (!used[v][s]) p.open.push_back({v, s});
        ids.push_back(static_cast<int>(u.placements.size()));
        u.placements.push_back(std::move(p));
    });
    auto [pos, ok] = u.placement_memo.emplace(key, std::move(ids));
    (void)ok;
    return pos->second;
}

// Live factors created by a contraction are tagged with the placement slot
// they came from; the tag keeps enough geometry to validate a further
// contraction landing on them. Plain variable ids stay below the tag range.
constexpr int kTagBase = 1 << 20;

int make_tag(int pid, int vtx, int slot) { return kTagBase + (pid << 6) + (vtx << 3) + slot; }

int live_var(Universe& u, int v) {
    if (v < kTagBase) return v;
    const int raw = v - kTagBase;
    const TreePlacement& p = u.placements[raw >> 6];
    return u.var_of_tuple(facet_tuple(u.tuples[p.tids[(raw >> 3) & 7]], raw & 7));
}

// Whether attaching placement `plug` by its marked facet onto vertex `hvtx`
// of placement `host` keeps the union an accepted complex.
bool glue_accepted(Universe& u, int host_id, int hvtx, int plug_id) {
    std::ostringstream os;
    os << "g|" << host_id << '|' << hvtx << '|' << plug_id;
    const std::string k = os.str();
    auto it = u.accept_memo.find(k);
    if (it != u.accept_memo.end()) return it->second;

    const TreePlacement& a = u.placements[host_id];
    const TreePlacement& b = u.placements[plug_id];
    bool ok = true;
    for (int ta : a.tids) {
        for (int tb : b.tids)
            if (!u.setdisj[u.tuple_set[ta]][u.tuple_set[tb]]) {
                ok = false;
                break;
            }
        if (!ok) break;
    }
    if (ok) {
        std::vector<std::vector<PtD>> simp;
        for (int t : a.tids) simp.push_back(u.tuples[t]);
        for (int t : b.tids) simp.push_back(u.tuples[t]);
        const int na = static_cast<int>(a.tids.size());
        std::vector<std::pair<int, int>> ed;
        for (const auto& e : a.edges) ed.emplace_back(e[0], e[2]);
        for (const auto& e : b.edges) ed.emplace_back(na + e[0], na + e[2]);
        ed.emplace_back(hvtx, na + b.mvtx);
        ok = accept_union_core(simp, ed).accepted;
    }
    u.accept_memo.emplace(k, ok);
    return ok;
}

// One application of the constraint operator attached to (tree, mark).
StateSum apply_constraint(Universe& u, const Tree& tree, std::array<int, 2> mark,
                          const StateSum& in) {
    const std::string code = tree_code(tree);
    const std::string rooted = tree_code_rooted(tree, mark);
    const GenPoly mu1 = mu_pow(1);

    const auto& placed = marked_placements(u, tree, mark);

    // Placements of the operator tree itself; the marked slot rejoins the
    // other unglued facets.
    std::vector<std::pair<std::vector<int>, long long>> own_cells;
    {
        std::map<std::vector<int>, long long> grouped;
        for (int pid : placed) {
            const TreePlacement& p = u.placements[pid];
            std::vector<int> f;
            f.reserve(p.open.size() + 1);
            for (const auto& [v, s] : p.open)
                f.push_back(u.var_of_tuple(facet_tuple(u.tuples[p.tids[v]], s)));
            f.push_back(p.head);
            std::sort(f.begin(), f.end());
            grouped[f] += 1;
        }
        for (auto& [f, m] : grouped) own_cells.emplace_back(f, m);
    }

    StateSum out;
    for (const auto& [key, coeff] : in) {
        std::vector<int> live, pinned;
        split_state(key, live, pinned);

        // Derivative piece, coefficient part.
        state_add(out, key, -(mu1 * ttree_deriv(coeff, code)));
        // Derivative piece, cell-extraction part.
        for (const auto& [factors, m] : own_cells)
            state_add(out, state_key(live, with_factors(pinned, factors)),
                      -(mu1 * coeff * m));

        // Gluing piece. Coefficient part: cut every tree variable in the
        // coefficient; extraction part: cut every universe cell.
        std::set<std::string> codes_in_coeff;
        for (const auto& [e, c] : coeff.terms())
            for (const auto& [g, k] : e.ttree) codes_in_coeff.insert(g);
        for (const std::string& g : codes_in_coeff)
            for (const std::string& rest : splits_matching(g, u.d, rooted))
                state_add(out, key, ttree_var(rest) * ttree_deriv(coeff, g));
        for (const CellEntry& cell : u.cells)
            for (const std::string& rest : splits_matching(cell.code, u.d, rooted))
                state_add(out, state_key(live, with_factors(pinned, cell.factors)),
                          ttree_var(rest) * coeff * cell.mult);

        // Contraction piece: consume one live factor whose facet matches the
        // marked facet's partner, release the placement's other open slots as
        // tagged live factors. Landing on a tagged factor also requires the
        // two placements to glue into an accepted complex.
        for (int pid : placed) {
            const TreePlacement& p = u.placements[pid];
            const int partner = u.var_rev[p.head];
            if (partner < 0) continue;
            std::vector<int> padd;
            padd.reserve(p.open.size());
            for (const auto& [v, s] : p.open) padd.push_back(make_tag(pid, v, s));
            for (size_t i = 0; i < live.size();) {
                size_t j = i;
                while (j < live.size() && live[j] == live[i]) ++j;
                const int lv = live[i];
                bool hit = false;
                if (lv < kTagBase) {
                    hit = lv == partner;
                } else if (live_var(u, lv) == partner) {
                    const int raw = lv - kTagBase;
                    hit = glue_accepted(u, raw >> 6, (raw >> 3) & 7, pid);
                }
                if (hit) {
                    std::vector<int> live2 = live;
                    live2.erase(live2.begin() + static_cast<std::ptrdiff_t>(i));
                    state_add(out, state_key(with_factors(live2, padd), pinned),
                              -(coeff * static_cast<long long>(j - i)));
                }
                i = j;
            }
        }
    }
    return out;
}

GenPoly evaluate_states(Universe& u, const StateSum& s, int max_cells) {
    GenPoly total;
    for (const auto& [key, coeff] : s) {
        std::vector<int> live, pinned;
        split_state(key, live, pinned);
        for (int& v : live) v = live_var(u, v);
        auto mkey = std::make_pair(with_factors(live, pinned), max_cells);
        auto it = u.eval_memo.find(mkey);
        if (it == u.eval_memo.end()) {
            PairEngine eng(u, mkey.first, max_cells, /*exact=*/false);
            it = u.eval_memo.emplace(mkey, engine_poly(eng.run())).first;
        }
        total += coeff * it->second;
    }
    return total;
}

GenPoly window_filter(const GenPoly& p, int t_degree, int max_verts) {
    GenPoly out;
    for (const auto& [e, c] : p.terms()) {
        int deg = 0;
        bool big = false;
        for (const auto& [code, k] : e.ttree) {
            deg += k;
            if (tree_code_vertices(code) > max_verts) big = true;
        }
        if (big || deg > t_degree) continue;
        out.add_term(e, c);
    }
    return out;
}

} // namespace

// ---------------------------------------------------------------------------
// Trees.

Tree validate_tree(const Tree& t) {
    if (t.d < 2 || t.d > 4) throw schema_error("tree dimension out of range");
    if (t.vertices < 1) throw schema_error("tree needs at least one vertex");
    std::set<std::pair<int, int>> seen;
    for (const auto& e : t.edges) {
        if (e[0] < 0 || e[0] >= t.vertices || e[2] < 0 || e[2] >= t.vertices)
            throw schema_error("tree edge vertex out of range");
        if (e[1] < 0 || e[1] > t.d || e[3] < 0 || e[3] > t.d)
            throw schema_error("tree edge slot out of range");
        if (e[0] == e[2]) throw schema_error("tree edge joins a vertex to itself");
        if (!seen.emplace(e[0], e[1]).second || !seen.emplace(e[2], e[3]).second)
            throw schema_error("tree slot used twice");
    }
    if (static_cast<int>(t.edges.size()) != t.vertices - 1)
        throw schema_error("tree edge count must be vertices - 1");
    if (t.vertices > 1) bfs_edges(t);  // throws when disconnected
    if (t.marked[0] >= 0 || t.marked[1] >= 0) {
        if (t.marked[0] < 0 || t.marked[0] >= t.vertices || t.marked[1] < 0 || t.marked[1] > t.d)
            throw schema_error("marked slot out of range");
        if (seen.count({t.marked[0], t.marked[1]}))
            throw schema_error("marked slot is not open");
    }
    return t;
}

std::vector<std::array<int, 2>> open_edges(const Tree& t) {
    std::set<std::pair<int, int>> used;
    for (const auto& e : t.edges) {
        used.emplace(e[0], e[1]);
        used.emplace(e[2], e[3]);
    }
    std::vector<std::array<int, 2>> out;
    for (int v = 0; v < t.vertices; ++v)
        for (int s = 0; s <= t.d; ++s)
            if (!used.count({v, s})) out.push_back({v, s});
    return out;
}

int open_edge_count(const Tree& t) { return static_cast<int>(open_edges(t).size()); }

std::string tree_code_rooted(const Tree& t, std::array<int, 2> root) {
    const TreeAdj a = tree_adjacency(t);
    if (root[0] < 0 || root[0] >= t.vertices || root[1] < 0 || root[1] > t.d)
        throw schema_error("root slot out of range");
    if (a.at[root[0]][root[1]][0] >= 0) throw schema_error("root slot is not open");
    std::string out;
    rooted_code_rec(t, a, root[0], root[1], out);
    return out;
}

std::string tree_code(const Tree& t) {
    std::string best;
    for (const auto& e : open_edges(t)) {
        std::string c = tree_code_rooted(t, e);
        if (best.empty() || c < best) best = std::move(c);
    }
    return best;
}

int tree_code_vertices(const std::string& code) {
    return static_cast<int>(std::count(code.begin(), code.end(), '('));
}

Tree parse_tree_json(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw schema_error("invalid JSON");
    if (!j.is_object()) throw schema_error("tree must be an object");
    Tree t;
    if (!j.contains("d") || !j["d"].is_number_integer())
        throw schema_error("tree needs integer d");
    t.d = j["d"].get<int>();
    if (!j.contains("vertices") || !j["vertices"].is_number_integer())
        throw schema_error("tree needs integer vertices");
    t.vertices = j["vertices"].get<int>();
    if (j.contains("edges")) {
        if (!j["edges"].is_array()) throw schema_error("edges must be an array");
        for (const auto& e : j["edges"]) {
            if (!e.is_array() || e.size() != 4) throw schema_error("edge must hold 4 integers");
            std::array<int, 4> a{};
            for (int i = 0; i < 4; ++i) {
                if (!e[i].is_number_integer()) throw schema_error("edge must hold 4 integers");
                a[i] = e[i].get<int>();
            }
            t.edges.push_back(a);
        }
    }
    if (j.contains("marked") && !j["marked"].is_null()) {
        const auto& m = j["marked"];
        if (!m.is_array() || m.size() != 2 || !m[0].is_number_integer() ||
            !m[1].is_number_integer())
            throw schema_error("marked must hold 2 integers");
        t.marked = {m[0].get<int>(), m[1].get<int>()};
    }
    return validate_tree(t);
}

std::string tree_to_json(const Tree& t) {
    json j;
    j["d"] = t.d;
    j["vertices"] = t.vertices;
    j["edges"] = json::array();
    for (const auto& e : t.edges) j["edges"].push_back({e[0], e[1], e[2], e[3]});
    if (t.marked[0] >= 0)
        j["marked"] = {t.marked[0], t.marked[1]};
    else
        j["marked"] = nullptr;
    return j.dump();
}

Tree glue_tree(const Tree& a, std::array<int, 2> ea, const Tree& b, std::array<int, 2> eb) {
    validate_tree(a);
    validate_tree(b);
    if (a.d != b.d) throw schema_error("glued trees must share d");
    auto is_open = [](const Tree& t, std::array<int, 2> e) {
        const auto oe = open_edges(t);
        return std::find(oe.begin(), oe.end(), e) != oe.end();
    };
    if (!is_open(a, ea) || !is_open(b, eb)) throw schema_error("glue slot is not open");
    Tree out;
    out.d = a.d;
    out.vertices = a.vertices + b.vertices;
    out.edges = a.edges;
    for (const auto& e : b.edges)
        out.edges.push_back({e[0] + a.vertices, e[1], e[2] + a.vertices, e[3]});
    out.edges.push_back({ea[0], ea[1], eb[0] + a.vertices, eb[1]});
    if (a.marked[0] >= 0 && a.marked != ea) out.marked = a.marked;
    return out;
}

std::vector<Tree> tree_gluing_set(const Tree& a, std::array<int, 2> va,
                                  const Tree& b, std::array<int, 2> vb) {
    std::vector<Tree> out;
    for (const auto& e : open_edges(a)) {
        if (e == va) continue;
        Tree g = glue_tree(a, e, b, vb);
        g.marked = va;
        out.push_back(std::move(g));
    }
    std::sort(out.begin(), out.end(), [](const Tree& x, const Tree& y) {
        return tree_code_rooted(x, x.marked) < tree_code_rooted(y, y.marked);
    });
    return out;
}

std::vector<Tree> enumerate_trees(int d, int max_vertices) {
    std::vector<Tree> all;
    std::map<std::string, Tree> level;
    Tree single;
    single.d = d;
    level.emplace(tree_code(single), single);
    for (int v = 1; v <= max_vertices; ++v) {
        for (const auto& [code, t] : level) all.push_back(t);
        if (v == max_vertices) break;
        std::map<std::string, Tree> next;
        Tree unit;
        unit.d = d;
        for (const auto& [code, t] : level)
            for (const auto& e : open_edges(t))
                for (int s = 0; s <= d; ++s) {
                    Tree g = glue_tree(t, e, unit, {0, s});
                    next.emplace(tree_code(g), g);
                }
        level = std::move(next);
    }
    std::sort(all.begin(), all.end(),
              [](const Tree& x, const Tree& y) { return tree_code(x) < tree_code(y); });
    return all;
}

// ---------------------------------------------------------------------------
// Placements.

int omega_simplex(const std::vector<PtD>& pts) { return orient_d(pts) > 0 ? 1 : 0; }

bool placement_consistent(const Tree& t, const Placement& p) {
    validate_tree(t);
    if (static_cast<int>(p.simplex.size()) != t.vertices) return false;
    for (const auto& s : p.simplex) {
        if (static_cast<int>(s.size()) != t.d + 1) return false;
        for (const auto& pt : s)
            if (static_cast<int>(pt.size()) != t.d) return false;
        if (orient_d(s) == 0) return false;
    }
    for (const auto& e : t.edges) {
        const auto& su = p.simplex[e[0]];
        const auto& sw = p.simplex[e[2]];
        if (facet_tuple(sw, e[3]) != reversed(facet_tuple(su, e[1]))) return false;
    }
    return true;
}

std::optional<SimplicialPolytope> polytope_of_tree(const Tree& t, const Placement& p) {
    if (!placement_consistent(t, p)) return std::nullopt;
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : t.edges) edges.emplace_back(e[0], e[2]);
    UnionCheck uc = accept_union_core(p.simplex, edges);
    if (!uc.accepted) return std::nullopt;
    try {
        return make_simplicial_polytope(t.d, uc.pts, uc.tri_facets);
    } catch (const schema_error&) {
        return std::nullopt;
    }
}

int tree_potential_weight(const Tree& t, const Placement& p) {
    if (!placement_consistent(t, p)) return 0;
    for (const auto& s : p.simplex)
        if (omega_simplex(s) == 0) return 0;
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : t.edges) edges.emplace_back(e[0], e[2]);
    return accept_union_core(p.simplex, edges).accepted ? 1 : 0;
}

// ---------------------------------------------------------------------------
// Boundary pattern and correlators.

std::vector<bool> boundary_pattern(const SimplicialPolytope& poly) {
    static std::map<std::string, std::vector<bool>> memo;
    const std::string key = canonical_key(poly);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    std::vector<bool> pat = boundary_pattern_impl(poly);
    memo.emplace(key, pat);
    return pat;
}

GenPoly correlator_tensor_direct(const SimplicialPolytope& poly, int max_tree_vertices) {
    const Int vol = normalized_volume(poly);
    const int maxv = static_cast<int>(std::min<Int>(max_tree_vertices, vol));
    Universe& u = universe_for(lattice_points(poly), poly.d, maxv);
    const std::vector<int> word = boundary_word_vars(u, poly);
    return direct_sum(u, word, vol);
}

GenPoly correlator_tensor_wick(const SimplicialPolytope& poly, int order,
                               int max_tree_vertices, std::vector<PtD> pool) {
    if (order < 0) throw schema_error("order must be nonnegative");
    if (pool.empty()) pool = lattice_points(poly);
    Universe& u = universe_for(pool, poly.d, max_tree_vertices);
    const std::vector<int> word = boundary_word_vars(u, poly);

    std::vector<GenPoly> raw(order + 1), vac(order + 1), norm(order + 1);
    for (int k = 0; k <= order; ++k) {
        PairEngine re(u, word, k, /*exact=*/true);
        raw[k] = engine_poly(re.run());
        PairEngine ve(u, {}, k, /*exact=*/true);
        vac[k] = engine_poly(ve.run());
    }
    for (int k = 0; k <= order; ++k) {
        norm[k] = raw[k];
        for (int j = 1; j <= k; ++j) norm[k] -= vac[j] * norm[k - j];
    }
    return norm[order];
}

std::map<std::string, long long> single_cell_covers(const SimplicialPolytope& poly,
                                                    int max_tree_vertices) {
    const Int vol = normalized_volume(poly);
    Universe& u = universe_for(lattice_points(poly), poly.d, 1);
    std::map<std::string, long long> out;
    for (const Tree& tree : enumerate_trees(poly.d, max_tree_vertices)) {
        const std::string code = tree_code(tree);
        long long count = 0;
        walk_placements(u, tree, vol, vol, [&](const std::vector<int>& tup) {
            if (placement_accepted(u, tree, tup)) ++count;
        });
        if (count > 0) out.emplace(code, count);
    }
    return out;
}

bool virasoro_like_check(const Tree& t1, std::array<int, 2> v1,
                         const Tree& t2, std::array<int, 2> v2,
                         const SimplicialPolytope& fixture,
                         const TensorCheckCaps& caps) {
    validate_tree(t1);
    validate_tree(t2);
    const Int vol = normalized_volume(fixture);
    Universe& u = universe_for(lattice_points(fixture), fixture.d,
                               static_cast<int>(std::min<Int>(vol, caps.tree_vertices)));

    StateSum base;
    base.emplace(state_key(boundary_word_vars(u, fixture), {}), GenPoly::constant(1));

    const StateSum a2 = apply_constraint(u, t2, v2, base);
    const StateSum a12 = apply_constraint(u, t1, v1, a2);
    const StateSum a1 = apply_constraint(u, t1, v1, base);
    const StateSum a21 = apply_constraint(u, t2, v2, a1);

    StateSum rhs;
    for (const Tree& g : tree_gluing_set(t1, v1, t2, v2)) {
        const StateSum part = apply_constraint(u, g, g.marked, base);
        for (const auto& [b, c] : part) state_add(rhs, b, c);
    }
    for (const Tree& g : tree_gluing_set(t2, v2, t1, v1)) {
        const StateSum part = apply_constraint(u, g, g.marked, base);
        for (const auto& [b, c] : part) state_add(rhs, b, -c);
    }

    GenPoly lhs_val = evaluate_states(u, a12, caps.eval_cells);
    lhs_val -= evaluate_states(u, a21, caps.eval_cells);
    const GenPoly rhs_val = evaluate_states(u, rhs, caps.eval_cells);

    const GenPoly lw = window_filter(lhs_val, caps.t_degree, caps.tree_vertices);
    const GenPoly rw = window_filter(rhs_val, caps.t_degree, caps.tree_vertices);
    if (std::getenv("POLYCORR_DEBUG_COMMUTATOR") && !(lw == rw)) {
        fprintf(stderr, "LHS: %s\n", lw.str().c_str());
        fprintf(stderr, "RHS: %s\n", rw.str().c_str());
        fprintf(stderr, "DIFF: %s\n", (lw - rw).str().c_str());
    }
    return lw == rw;
}

} // namespace polycorr
