#include "polycorr/geometry.hpp"
#include "polycorr/errors.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace polycorr {

Int orient2(Pt i, Pt j, Pt k) { return cross(i - j, k - j); }

Int twice_signed_area(const std::vector<Pt>& cycle) {
    Int s = 0;
    const size_t n = cycle.size();
    for (size_t i = 0; i < n; ++i) s += cross(cycle[i], cycle[(i + 1) % n]);
    return s;
}

bool collinear(Pt a, Pt b, Pt c) { return orient2(a, b, c) == 0; }

bool on_segment(Pt p, Pt a, Pt b) {
    if (orient2(a, p, b) != 0) return false;
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

bool segments_intersect(Pt a, Pt b, Pt c, Pt d) {
    const Int o1 = cross(b - a, c - a);
    const Int o2 = cross(b - a, d - a);
    const Int o3 = cross(d - c, a - c);
    const Int o4 = cross(d - c, b - c);
    if (((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) &&
        ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0)))
        return true;
    if (o1 == 0 && on_segment(c, a, b)) return true;
    if (o2 == 0 && on_segment(d, a, b)) return true;
    if (o3 == 0 && on_segment(a, c, d)) return true;
    if (o4 == 0 && on_segment(b, c, d)) return true;
    return false;
}

bool on_cycle(Pt p, const std::vector<Pt>& cycle) {
    const size_t n = cycle.size();
    for (size_t i = 0; i < n; ++i)
        if (on_segment(p, cycle[i], cycle[(i + 1) % n])) return true;
    return false;
}

int point_vs_cycle(Pt p, const std::vector<Pt>& cycle) {
    if (on_cycle(p, cycle)) return 0;
    // Half-open crossing rule with an exact sidedness test; no divisions.
    bool inside = false;
    const size_t n = cycle.size();
    for (size_t i = 0; i < n; ++i) {
        Pt a = cycle[i], b = cycle[(i + 1) % n];
        if ((a.y > p.y) != (b.y > p.y)) {
            const Int side = cross(b - a, p - a);
            if (b.y > a.y ? side > 0 : side < 0) inside = !inside;
        }
    }
    return inside ? 1 : -1;
}

Int winding_number(const std::vector<Pt>& cycle, Pt p) {
    Int w = 0;
    const size_t n = cycle.size();
    for (size_t i = 0; i < n; ++i) {
        Pt a = cycle[i], b = cycle[(i + 1) % n];
        const Int side = cross(b - a, p - a);
        if (a.y <= p.y && b.y > p.y && side > 0) ++w;
        if (a.y > p.y && b.y <= p.y && side < 0) --w;
    }
    return w;
}

Int boundary_lattice_count(const std::vector<Pt>& cycle) {
    Int b = 0;
    const size_t n = cycle.size();
    for (size_t i = 0; i < n; ++i) {
        Pt d = cycle[(i + 1) % n] - cycle[i];
        b += std::gcd(std::llabs(d.x), std::llabs(d.y));
    }
    return b;
}

LatticePolygon LatticePolygon::from_boundary(std::vector<Pt> boundary,
                                             bool allow_collinear) {
    const size_t n = boundary.size();
    if (n < 3) throw schema_error("polygon boundary needs at least 3 points");

    {
        std::set<Pt> distinct(boundary.begin(), boundary.end());
        if (distinct.size() != n)
            throw schema_error("polygon boundary has repeated points");
    }

    for (size_t i = 0; i < n; ++i) {
        Pt a = boundary[(i + n - 1) % n], b = boundary[i], c = boundary[(i + 1) % n];
        if (orient2(a, b, c) == 0) {
            if (!allow_collinear)
                throw schema_error("collinear boundary triple rejected");
            // A flat listed corner must continue forward, never fold back.
            if (dot(b - a, c - b) <= 0)
                throw schema_error("boundary folds back on itself");
        }
    }

    // Non-adjacent edges must be fully disjoint; adjacent edges may meet only
    // in their shared endpoint (guaranteed by the fold-back check above).
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            if (j == i + 1 || (i == 0 && j == n - 1)) continue;
            if (segments_intersect(boundary[i], boundary[(i + 1) % n],
                                   boundary[j], boundary[(j + 1) % n]))
                throw schema_error("polygon boundary self-intersects");
        }
    }

    if (twice_signed_area(boundary) >= 0)
        throw schema_error("polygon boundary must be listed clockwise");

    return LatticePolygon(std::move(boundary));
}

namespace {

template <typename Pred>
std::vector<Pt> scan_region(const std::vector<Pt>& cycle, Pred keep) {
    Int xmin = cycle[0].x, xmax = cycle[0].x, ymin = cycle[0].y, ymax = cycle[0].y;
    for (Pt p : cycle) {
        xmin = std::min(xmin, p.x); xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y); ymax = std::max(ymax, p.y);
    }
    std::vector<Pt> out;
    for (Int x = xmin; x <= xmax; ++x)
        for (Int y = ymin; y <= ymax; ++y)
            if (keep(Pt{x, y})) out.push_back({x, y});
    return out;
}

} // namespace

std::vector<Pt> lattice_points(const LatticePolygon& poly) {
    return scan_region(poly.boundary(), [&](Pt p) {
        return point_vs_cycle(p, poly.boundary()) >= 0;
    });
}

std::vector<Pt> interior_points(const LatticePolygon& poly) {
    return scan_region(poly.boundary(), [&](Pt p) {
        return point_vs_cycle(p, poly.boundary()) == 1;
    });
}

std::string canonical_key(const LatticePolygon& poly) {
    const std::vector<Pt>& b = poly.boundary();
    const size_t n = b.size();
    std::string best;
    for (size_t r = 0; r < n; ++r) {
        std::ostringstream os;
        os << "P2";
        for (size_t i = 0; i < n; ++i) {
            Pt p = b[(r + i) % n] - b[r];
            os << '|' << p.x << ',' << p.y;
        }
        std::string s = os.str();
        if (best.empty() || s < best) best = std::move(s);
    }
    return best;
}

namespace {

// Strict corners of a cycle (nonzero turn) in listing order, provided every
// flat corner moves forward and all turns share one sign. Returns empty on
// any violation.
std::vector<Pt> strict_corners_if_consistent(const std::vector<Pt>& cycle, int* sign_out) {
    const size_t n = cycle.size();
    int sign = 0;
    std::vector<Pt> corners;
    for (size_t i = 0; i < n; ++i) {
        Pt a = cycle[(i + n - 1) % n], b = cycle[i], c = cycle[(i + 1) % n];
        if (b == a || c == b) return {};
        const Int turn = cross(b - a, c - b);
        if (turn == 0) {
            if (dot(b - a, c - b) <= 0) return {};
            continue;
        }
        const int s = turn > 0 ? 1 : -1;
        if (sign == 0) sign = s;
        else if (s != sign) return {};
        corners.push_back(b);
    }
    if (sign_out) *sign_out = sign;
    return corners;
}

// Convex hull (strict vertices only) in counterclockwise order.
std::vector<Pt> hull_ccw(std::vector<Pt> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const size_t n = pts.size();
    if (n < 3) return {};
    std::vector<Pt> h(2 * n);
    size_t k = 0;
    for (size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 1]) <= 0) --k;
        h[k++] = pts[i];
    }
    for (size_t i = n - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 1]) <= 0) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return h;
}

bool cyclic_equal(const std::vector<Pt>& a, const std::vector<Pt>& b) {
    if (a.size() != b.size()) return false;
    const size_t n = a.size();
    for (size_t r = 0; r < n; ++r) {
        bool ok = true;
        for (size_t i = 0; i < n && ok; ++i) ok = a[(r + i) % n] == b[i];
        if (ok) return true;
    }
    return false;
}

} // namespace

bool is_convex_cell(const std::vector<Pt>& cycle) {
    if (cycle.size() < 3) return false;
    {
        std::set<Pt> distinct(cycle.begin(), cycle.end());
        if (distinct.size() != cycle.size()) return false;
    }
    int sign = 0;
    std::vector<Pt> corners = strict_corners_if_consistent(cycle, &sign);
    if (corners.size() < 3) return false;

    // Same-signed turns alone admit cycles that wind more than once around
    // their hull; demand that the strict corners are exactly the hull,
    // traversed once in the matching direction.
    std::vector<Pt> hull = hull_ccw(cycle);
    if (hull.size() != corners.size()) return false;
    if (sign < 0) std::reverse(hull.begin(), hull.end());
    return cyclic_equal(corners, hull);
}

bool is_strict_convex_cw_cell(const std::vector<Pt>& cycle) {
    const size_t n = cycle.size();
    if (n < 3) return false;
    for (size_t i = 0; i < n; ++i) {
        Pt a = cycle[(i + n - 1) % n], b = cycle[i], c = cycle[(i + 1) % n];
        if (cross(b - a, c - b) >= 0) return false;
    }
    std::set<Pt> distinct(cycle.begin(), cycle.end());
    if (distinct.size() != n) return false;

    std::vector<Pt> hull = hull_ccw(std::vector<Pt>(cycle.begin(), cycle.end()));
    if (hull.size() != n) return false;
    std::vector<Pt> cw(cycle.begin(), cycle.end());
    std::reverse(cw.begin(), cw.end());
    return cyclic_equal(cw, hull);
}

bool IndexBox::contains(Pt p) const {
    return std::llabs(p.x) <= n && std::llabs(p.y) <= n;
}

std::vector<Pt> IndexBox::points() const {
    std::vector<Pt> out;
    out.reserve(static_cast<size_t>((2 * n + 1) * (2 * n + 1)));
    for (Int x = -n; x <= n; ++x)
        for (Int y = -n; y <= n; ++y) out.push_back({x, y});
    return out;
}

IndexBox covering_box(const LatticePolygon& poly) {
    Int m = 0;
    for (Pt p : poly.boundary())
        m = std::max({m, std::llabs(p.x), std::llabs(p.y)});
    return IndexBox{m};
}

// ---------------------------------------------------------------------------

Int det_int(std::vector<std::vector<Int>> m) {
    const size_t n = m.size();
    if (n == 0) return 1;
    Int sign = 1, prev = 1;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            size_t piv = k + 1;
            while (piv < n && m[piv][k] == 0) ++piv;
            if (piv == n) return 0;
            std::swap(m[k], m[piv]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i) {
            for (size_t j = k + 1; j < n; ++j)
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

Int orient_d(const std::vector<PtD>& pts) {
    if (pts.empty()) throw schema_error("orient_d: empty point list");
    const size_t d = pts[0].size();
    if (pts.size() != d + 1) throw schema_error("orient_d: need d+1 points");
    for (const PtD& p : pts)
        if (p.size() != d) throw schema_error("orient_d: dimension mismatch");
    std::vector<std::vector<Int>> m(d, std::vector<Int>(d));
    for (size_t i = 0; i < d; ++i)
        for (size_t j = 0; j < d; ++j) m[i][j] = pts[i + 1][j] - pts[0][j];
    return det_int(std::move(m));
}

namespace {

// orient_d with the last point replaced by the vertex sum; the sign equals
// the sign of orient_d(facet..., centroid) without leaving integers.
Int facet_vs_centroid(const SimplicialPolytope& poly, const std::vector<int>& facet) {
    const size_t d = static_cast<size_t>(poly.d);
    PtD c(d, 0);
    for (const PtD& v : poly.vertices)
        for (size_t j = 0; j < d; ++j) c[j] += v[j];
    const Int V = static_cast<Int>(poly.vertices.size());
    std::vector<std::vector<Int>> m(d, std::vector<Int>(d));
    const PtD& f0 = poly.vertices[static_cast<size_t>(facet[0])];
    for (size_t i = 0; i + 1 < d; ++i) {
        const PtD& fi = poly.vertices[static_cast<size_t>(facet[i + 1])];
        for (size_t j = 0; j < d; ++j) m[i][j] = fi[j] - f0[j];
    }
    for (size_t j = 0; j < d; ++j) m[d - 1][j] = c[j] - V * f0[j];
    return det_int(std::move(m));
}

Int facet_orient_with(const SimplicialPolytope& poly, const std::vector<int>& facet,
                      const PtD& p) {
    std::vector<PtD> pts;
    pts.reserve(static_cast<size_t>(poly.d) + 1);
    for (int idx : facet) pts.push_back(poly.vertices[static_cast<size_t>(idx)]);
    pts.push_back(p);
    return orient_d(pts);
}

} // namespace

SimplicialPolytope make_simplicial_polytope(int d, std::vector<PtD> vertices,
                                            std::vector<std::vector<int>> facets) {
    if (d < 2) throw schema_error("polytope dimension must be >= 2");
    if (vertices.size() < static_cast<size_t>(d) + 1)
        throw schema_error("polytope needs at least d+1 vertices");
    for (const PtD& v : vertices)
        if (v.size() != static_cast<size_t>(d))
            throw schema_error("polytope vertex dimension mismatch");
    {
        std::set<PtD> distinct(vertices.begin(), vertices.end());
        if (distinct.size() != vertices.size())
            throw schema_error("polytope has repeated vertices");
    }
    if (facets.empty()) throw schema_error("polytope needs facets");

    SimplicialPolytope poly{d, std::move(vertices), std::move(facets)};

    std::map<std::vector<int>, int> ridge_count;
    for (const std::vector<int>& f : poly.facets) {
        if (f.size() != static_cast<size_t>(d))
            throw schema_error("facet must have d vertices");
        for (int idx : f)
            if (idx < 0 || static_cast<size_t>(idx) >= poly.vertices.size())
                throw schema_error("facet index out of range");
        std::set<int> fs(f.begin(), f.end());
        if (fs.size() != f.size()) throw schema_error("facet repeats a vertex");

        if (facet_vs_centroid(poly, f) >= 0)
            throw schema_error("facet degenerate or not oriented outward");

        std::vector<int> sorted(f.begin(), f.end());
        std::sort(sorted.begin(), sorted.end());
        for (size_t skip = 0; skip < sorted.size(); ++skip) {
            std::vector<int> ridge;
            for (size_t i = 0; i < sorted.size(); ++i)
                if (i != skip) ridge.push_back(sorted[i]);
            ++ridge_count[ridge];
        }
    }
    for (const auto& [ridge, count] : ridge_count)
        if (count != 2)
            throw schema_error("boundary complex not closed: ridge shared by " +
                               std::to_string(count) + " facets");
    return poly;
}

int point_vs_polytope(const PtD& p, const SimplicialPolytope& poly) {
    bool boundary = false;
    for (const std::vector<int>& f : poly.facets) {
        const Int o = facet_orient_with(poly, f, p);
        if (o > 0) return -1;
        if (o == 0) boundary = true;
    }
    return boundary ? 0 : 1;
}

namespace {

template <typename Pred>
std::vector<PtD> scan_polytope(const SimplicialPolytope& poly, Pred keep) {
    const size_t d = static_cast<size_t>(poly.d);
    PtD lo = poly.vertices[0], hi = poly.vertices[0];
    for (const PtD& v : poly.vertices)
        for (size_t j = 0; j < d; ++j) {
            lo[j] = std::min(lo[j], v[j]);
            hi[j] = std::max(hi[j], v[j]);
        }
    std::vector<PtD> out;
    PtD p = lo;
    while (true) {
        if (keep(p)) out.push_back(p);
        size_t j = 0;
        while (j < d && p[j] == hi[j]) { p[j] = lo[j]; ++j; }
        if (j == d) break;
        ++p[j];
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

std::vector<PtD> lattice_points(const SimplicialPolytope& poly) {
    return scan_polytope(poly, [&](const PtD& p) {
        return point_vs_polytope(p, poly) >= 0;
    });
}

std::vector<PtD> interior_points(const SimplicialPolytope& poly) {
    return scan_polytope(poly, [&](const PtD& p) {
        return point_vs_polytope(p, poly) == 1;
    });
}

Int normalized_volume(const SimplicialPolytope& poly) {
    const PtD& v0 = poly.vertices[0];
    Int vol = 0;
    for (const std::vector<int>& f : poly.facets) {
        const Int o = facet_orient_with(poly, f, v0);
        if (o > 0) throw schema_error("facet not oriented outward");
        vol -= o;
    }
    return vol;
}

std::string canonical_key(const SimplicialPolytope& poly) {
    const size_t d = static_cast<size_t>(poly.d);
    PtD lo = poly.vertices[0];
    for (const PtD& v : poly.vertices)
        for (size_t j = 0; j < d; ++j) lo[j] = std::min(lo[j], v[j]);

    std::vector<PtD> shifted;
    shifted.reserve(poly.vertices.size());
    for (const PtD& v : poly.vertices) {
        PtD s(d);
        for (size_t j = 0; j < d; ++j) s[j] = v[j] - lo[j];
        shifted.push_back(std::move(s));
    }
    std::vector<size_t> order(shifted.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return shifted[a] < shifted[b]; });
    std::vector<int> rank(shifted.size());
    for (size_t i = 0; i < order.size(); ++i) rank[order[i]] = static_cast<int>(i);

    std::vector<std::vector<int>> facet_sets;
    for (const std::vector<int>& f : poly.facets) {
        std::vector<int> g;
        g.reserve(f.size());
        for (int idx : f) g.push_back(rank[static_cast<size_t>(idx)]);
        std::sort(g.begin(), g.end());
        facet_sets.push_back(std::move(g));
    }
    std::sort(facet_sets.begin(), facet_sets.end());

    std::ostringstream os;
    os << "P" << poly.d;
    for (size_t i : order) {
        os << '|';
        for (size_t j = 0; j < d; ++j) os << (j ? "," : "") << shifted[i][j];
    }
    os << "#";
    for (const std::vector<int>& f : facet_sets) {
        os << '|';
        for (size_t j = 0; j < f.size(); ++j) os << (j ? "," : "") << f[j];
    }
    return os.str();
}

} // namespace polycorr
