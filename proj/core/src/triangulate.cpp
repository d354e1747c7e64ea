#include "polycorr/triangulate.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>

namespace polycorr {

namespace {

using Edge = std::pair<Pt, Pt>;

// Directed edges bounding the not-yet-covered part of the region. The
// uncovered area lies to the right of every edge, so the edge set always
// decomposes into clockwise loops.
struct Front {
    std::set<Edge> edges;
    std::map<Pt, int> degree;

    bool empty() const { return edges.empty(); }

    bool contains(const Pt& a, const Pt& b) const {
        return edges.count({a, b}) != 0;
    }

    bool is_vertex(const Pt& p) const {
        auto it = degree.find(p);
        return it != degree.end() && it->second > 0;
    }

    Edge canonical() const { return *edges.begin(); }

    void insert(const Pt& a, const Pt& b) {
        edges.insert({a, b});
        degree[a] += 1;
        degree[b] += 1;
    }

    void erase(const Pt& a, const Pt& b) {
        edges.erase({a, b});
        degree[a] -= 1;
        degree[b] -= 1;
    }
};

bool proper_cross(const Pt& a, const Pt& b, const Pt& c, const Pt& d) {
    Int o1 = orient2(c, a, b);
    Int o2 = orient2(d, a, b);
    Int o3 = orient2(a, c, d);
    Int o4 = orient2(b, c, d);
    return ((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) &&
           ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0));
}

bool strictly_inside_segment(const Pt& p, const Pt& a, const Pt& b) {
    return p != a && p != b && on_segment(p, a, b);
}

int winding_over_edges(const Front& front, const Pt& p) {
    int w = 0;
    for (const auto& [a, b] : front.edges) {
        Int side = orient2(b, a, p);
        if (a.y <= p.y && b.y > p.y && side > 0) ++w;
        if (a.y > p.y && b.y <= p.y && side < 0) --w;
    }
    return w;
}

// A prospective corner must sit on the current region boundary or strictly
// inside the uncovered area. Points buried in edges of the front would split
// an edge that has to be matched exactly, so they are rejected.
bool corner_available(const Front& front, const Pt& p) {
    if (front.is_vertex(p)) return true;
    for (const auto& [a, b] : front.edges)
        if (strictly_inside_segment(p, a, b)) return false;
    return winding_over_edges(front, p) == -1;
}

// Full admissibility of a candidate cell against the current front. cell[0]
// -> cell[1] is the consumed front edge; the remaining edges either match a
// front edge exactly (gluing) or run through uncovered territory.
bool cell_fits(const Front& front, const std::vector<Pt>& cell) {
    const size_t q = cell.size();
    for (size_t i = 0; i < q; ++i) {
        const Pt& a = cell[i];
        const Pt& b = cell[(i + 1) % q];
        for (const auto& [c, d] : front.edges) {
            if (a == c && b == d) continue;          // consumed base or flush gluing
            if (a == d && b == c) return false;      // covered side
            if (strictly_inside_segment(c, a, b)) return false;
            if (strictly_inside_segment(d, a, b)) return false;
            if (strictly_inside_segment(a, c, d)) return false;
            if (strictly_inside_segment(b, c, d)) return false;
            if (proper_cross(a, b, c, d)) return false;
        }
    }
    for (const auto& [p, deg] : front.degree) {
        if (deg <= 0) continue;
        if (std::find(cell.begin(), cell.end(), p) != cell.end()) continue;
        if (point_vs_cycle(p, cell) > 0) return false;
    }
    return true;
}

void apply_cell(Front& front, const std::vector<Pt>& cell, std::vector<Edge>& added,
                std::vector<Edge>& removed) {
    const size_t q = cell.size();
    front.erase(cell[0], cell[1]);
    removed.push_back({cell[0], cell[1]});
    for (size_t i = 1; i < q; ++i) {
        const Pt& a = cell[i];
        const Pt& b = cell[(i + 1) % q];
        if (front.contains(a, b)) {
            front.erase(a, b);
            removed.push_back({a, b});
        } else {
            front.insert(b, a);
            added.push_back({b, a});
        }
    }
}

void undo_cell(Front& front, const std::vector<Edge>& added, const std::vector<Edge>& removed) {
    for (const auto& [a, b] : added) front.erase(a, b);
    for (const auto& [a, b] : removed) front.insert(a, b);
}

std::vector<Pt> rotate_min_first(const std::vector<Pt>& cycle) {
    size_t best = 0;
    for (size_t i = 1; i < cycle.size(); ++i)
        if (cycle[i] < cycle[best]) best = i;
    std::vector<Pt> out;
    out.reserve(cycle.size());
    for (size_t i = 0; i < cycle.size(); ++i)
        out.push_back(cycle[(best + i) % cycle.size()]);
    return out;
}

struct Enumerator {
    std::vector<Pt> pool;
    size_t max_corners = 3;
    std::vector<std::vector<Pt>> stack;
    std::vector<Subdivision>* out = nullptr;

    void emit() {
        Subdivision s;
        s.cells = stack;
        for (auto& c : s.cells) c = rotate_min_first(c);
        std::sort(s.cells.begin(), s.cells.end());
        std::set<Pt> used;
        for (const auto& c : s.cells) used.insert(c.begin(), c.end());
        s.used_vertices.assign(used.begin(), used.end());
        out->push_back(std::move(s));
    }

    void try_place(Front& front, const std::vector<Pt>& cell) {
        if (!cell_fits(front, cell)) return;
        std::vector<Edge> added, removed;
        apply_cell(front, cell, added, removed);
        stack.push_back(cell);
        search(front);
        stack.pop_back();
        undo_cell(front, added, removed);
    }

    // Grow a strictly convex clockwise chain u, v, w1, ..; every corner lies
    // strictly right of the base edge, so each completed cycle is visited
    // exactly once from its base.
    void grow(Front& front, std::vector<Pt>& chain) {
        const Pt u = chain[0];  // by value: push_back below reallocates
        const Pt v = chain[1];
        if (chain.size() >= 3) {
            const Pt& last = chain.back();
            const Pt& prev = chain[chain.size() - 2];
            if (cross(last - prev, u - last) < 0 && cross(u - last, v - u) < 0 &&
                is_strict_convex_cw_cell(chain))
                try_place(front, chain);
        }
        if (chain.size() >= max_corners) return;
        for (const Pt& c : pool) {
            if (orient2(u, v, c) <= 0) continue;
            if (chain.size() >= 3) {
                const Pt& last = chain.back();
                const Pt& prev = chain[chain.size() - 2];
                if (cross(last - prev, c - last) >= 0) continue;
            } else {
                if (cross(v - u, c - v) >= 0) continue;
            }
            if (!corner_available(front, c)) continue;
            chain.push_back(c);
            grow(front, chain);
            chain.pop_back();
        }
    }

    void search(Front& front) {
        if (front.empty()) {
            emit();
            return;
        }
        auto [u, v] = front.canonical();
        std::vector<Pt> chain = {u, v};
        grow(front, chain);
    }
};

std::vector<Pt> boundary_interior_lattice(const Pt& a, const Pt& b) {
    Pt d = b - a;
    Int g = std::gcd(d.x, d.y);
    std::vector<Pt> pts;
    for (Int k = 1; k < g; ++k) pts.push_back({a.x + d.x / g * k, a.y + d.y / g * k});
    return pts;
}

std::vector<std::vector<Pt>> boundary_refinements(const LatticePolygon& poly) {
    const auto& bd = poly.boundary();
    std::vector<std::vector<Pt>> per_edge;
    for (size_t i = 0; i < bd.size(); ++i)
        per_edge.push_back(boundary_interior_lattice(bd[i], bd[(i + 1) % bd.size()]));

    std::vector<std::vector<Pt>> result;
    std::vector<Pt> current;
    std::function<void(size_t)> rec = [&](size_t i) {
        if (i == bd.size()) {
            result.push_back(current);
            return;
        }
        current.push_back(bd[i]);
        size_t mark = current.size();
        const auto& mids = per_edge[i];
        for (unsigned mask = 0; mask < (1u << mids.size()); ++mask) {
            current.resize(mark);
            for (size_t k = 0; k < mids.size(); ++k)
                if (mask & (1u << k)) current.push_back(mids[k]);
            rec(i + 1);
        }
        current.resize(mark - 1);
    };
    rec(0);
    return result;
}

std::vector<Subdivision> enumerate_cells(const LatticePolygon& poly, VertexPool pool_mode,
                                         size_t max_corners) {
    std::vector<std::vector<Pt>> boundaries;
    std::vector<Pt> pool;
    if (pool_mode == VertexPool::ListedAndInterior) {
        boundaries.push_back(poly.boundary());
        pool = poly.boundary();
        auto inner = interior_points(poly);
        pool.insert(pool.end(), inner.begin(), inner.end());
    } else {
        boundaries = boundary_refinements(poly);
        pool = lattice_points(poly);
    }
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());

    std::vector<Subdivision> out;
    for (const auto& bd : boundaries) {
        Front front;
        for (size_t i = 0; i < bd.size(); ++i)
            front.insert(bd[i], bd[(i + 1) % bd.size()]);
        Enumerator e;
        e.pool = pool;
        e.max_corners = std::min(max_corners, pool.size());
        e.out = &out;
        e.search(front);
    }
    std::sort(out.begin(), out.end(),
              [](const Subdivision& a, const Subdivision& b) { return a.cells < b.cells; });
    return out;
}

} // namespace

std::vector<Triangulation> enumerate_triangulations(const LatticePolygon& poly, VertexPool pool) {
    auto subs = enumerate_cells(poly, pool, 3);
    std::vector<Triangulation> out;
    out.reserve(subs.size());
    for (const auto& s : subs) {
        Triangulation t;
        for (const auto& c : s.cells) t.triangles.push_back({c[0], c[1], c[2]});
        t.used_vertices = s.used_vertices;
        out.push_back(std::move(t));
    }
    return out;
}

std::vector<Subdivision> enumerate_subdivisions(const LatticePolygon& poly, VertexPool pool) {
    return enumerate_cells(poly, pool, 1000);
}

Int cell_twice_area(const std::vector<Pt>& cell) {
    Int s = 0;
    for (size_t i = 0; i < cell.size(); ++i) {
        const Pt& a = cell[i];
        const Pt& b = cell[(i + 1) % cell.size()];
        s += cross(a, b);
    }
    return -s;
}

CharFunction char_function(const Triangulation& tau) {
    CharFunction phi;
    for (const auto& t : tau.triangles) {
        Int vol = orient2(t[0], t[1], t[2]);
        for (const auto& v : t) phi[v] += vol;
    }
    return phi;
}

} // namespace polycorr
