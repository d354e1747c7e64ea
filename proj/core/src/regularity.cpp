#include "polycorr/regularity.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace polycorr {

namespace {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Row means  sum_i coeff[i] * h_i >= rhs  (or == rhs in the equality block).
// Coefficients stay integral throughout; rows are gcd-reduced after every
// combination step.
struct Row {
    std::vector<BigInt> c;
    BigInt rhs;

    bool operator<(const Row& o) const {
        if (c != o.c) return c < o.c;
        return rhs < o.rhs;
    }
    bool operator==(const Row& o) const { return c == o.c && rhs == o.rhs; }
};

void gcd_reduce(Row& r) {
    BigInt g = 0;
    for (const auto& x : r.c) g = boost::multiprecision::gcd(g, abs(x));
    g = boost::multiprecision::gcd(g, abs(r.rhs));
    if (g > 1) {
        for (auto& x : r.c) x /= g;
        r.rhs /= g;
    }
}

// Affine weights reproducing p from the first three corners a, b, c of a
// clockwise cell, scaled by the doubled cell-triangle area d = orient2(a,b,c):
// d*p = wa*a + wb*b + wc*c with wa + wb + wc = d.
struct Bary {
    Int d, wa, wb, wc;
};

Bary barycentric(const Pt& a, const Pt& b, const Pt& c, const Pt& p) {
    Bary w;
    w.d = orient2(a, b, c);
    w.wa = -cross(b - p, c - p);
    w.wb = -cross(c - p, a - p);
    w.wc = -cross(a - p, b - p);
    return w;
}

struct System {
    std::vector<Pt> points;
    std::map<Pt, size_t> id;
    std::vector<Row> ineqs;
    std::vector<Row> eqs;
};

// Lifted cells must lie strictly below every lattice point that is not one of
// their corners; corners of a cell beyond the first three must lie on the
// plane of the first three. Strictness is homogeneous, so a unit gap loses
// nothing.
System build_system(const std::vector<std::vector<Pt>>& cells, const LatticePolygon& poly) {
    System sys;
    sys.points = lattice_points(poly);
    for (size_t i = 0; i < sys.points.size(); ++i) sys.id[sys.points[i]] = i;
    const size_t nv = sys.points.size();

    for (const auto& cell : cells) {
        if (cell.size() < 3) throw std::invalid_argument("cell with fewer than three corners");
        const Pt &a = cell[0], &b = cell[1], &c = cell[2];
        if (orient2(a, b, c) <= 0)
            throw std::invalid_argument("cell corners are not a clockwise cycle");
        for (const Pt& corner : cell)
            if (!sys.id.count(corner))
                throw std::invalid_argument("cell corner outside the region");

        auto fill = [&](const Pt& p, bool equality) {
            Bary w = barycentric(a, b, c, p);
            Row r;
            r.c.assign(nv, 0);
            r.c[sys.id.at(p)] += w.d;
            r.c[sys.id.at(a)] -= w.wa;
            r.c[sys.id.at(b)] -= w.wb;
            r.c[sys.id.at(c)] -= w.wc;
            r.rhs = equality ? 0 : w.d;
            gcd_reduce(r);
            if (equality)
                sys.eqs.push_back(std::move(r));
            else
                sys.ineqs.push_back(std::move(r));
        };

        for (size_t k = 3; k < cell.size(); ++k) fill(cell[k], true);
        for (const Pt& p : sys.points)
            if (std::find(cell.begin(), cell.end(), p) == cell.end()) fill(p, false);
    }
    return sys;
}

bool satisfies(const System& sys, const std::vector<Rat>& h) {
    auto eval = [&](const Row& r) {
        Rat v = -Rat(r.rhs);
        for (size_t i = 0; i < h.size(); ++i)
            if (r.c[i] != 0) v += Rat(r.c[i]) * h[i];
        return v;
    };
    for (const auto& r : sys.eqs)
        if (eval(r) != 0) return false;
    for (const auto& r : sys.ineqs)
        if (eval(r) < 0) return false;
    return true;
}

// Exact feasibility by variable elimination with a smallest-fill pivot
// order; reconstructs a witness on success.
bool feasible(const System& sys, std::vector<Rat>& witness) {
    const size_t nv = sys.points.size();
    std::vector<Row> rows = sys.ineqs;

    struct Subst {
        size_t var;
        Row eq;
    };
    std::vector<Subst> substs;
    std::vector<Row> eqs = sys.eqs;
    std::vector<bool> eliminated(nv, false);

    auto subst_into = [&](Row& r, const Row& eq, size_t v) {
        if (r.c[v] == 0) return;
        BigInt a = eq.c[v];
        BigInt f = r.c[v];
        BigInt mr = a > 0 ? a : -a;
        BigInt me = a > 0 ? -f : f;
        for (size_t i = 0; i < nv; ++i) r.c[i] = mr * r.c[i] + me * eq.c[i];
        r.rhs = mr * r.rhs + me * eq.rhs;
        gcd_reduce(r);
    };

    for (size_t e = 0; e < eqs.size(); ++e) {
        Row& r = eqs[e];
        size_t pivot = nv;
        for (size_t i = 0; i < nv; ++i)
            if (r.c[i] != 0) {
                pivot = i;
                break;
            }
        if (pivot == nv) {
            if (r.rhs != 0) return false;
            continue;
        }
        eliminated[pivot] = true;
        for (size_t j = e + 1; j < eqs.size(); ++j) subst_into(eqs[j], r, pivot);
        for (auto& row : rows) subst_into(row, r, pivot);
        substs.push_back({pivot, r});
    }

    struct Stage {
        size_t var;
        std::vector<Row> lower;  // c[var] > 0, lower bounds on var
        std::vector<Row> upper;  // c[var] < 0, upper bounds on var
    };
    std::vector<Stage> stages;
    std::vector<bool> done = eliminated;

    for (;;) {
        size_t best = nv;
        long long best_cost = -1;
        for (size_t v = 0; v < nv; ++v) {
            if (done[v]) continue;
            long long pos = 0, neg = 0;
            for (const auto& r : rows) {
                if (r.c[v] > 0) ++pos;
                if (r.c[v] < 0) ++neg;
            }
            long long cost = std::max(pos, 1ll) * std::max(neg, 1ll);
            if (best == nv || cost < best_cost) {
                best = v;
                best_cost = cost;
            }
        }
        if (best == nv) break;
        done[best] = true;

        Stage st;
        st.var = best;
        std::vector<Row> rest;
        for (auto& r : rows) {
            if (r.c[best] > 0)
                st.lower.push_back(r);
            else if (r.c[best] < 0)
                st.upper.push_back(r);
            else
                rest.push_back(std::move(r));
        }
        std::set<Row> combos;
        for (const auto& lo : st.lower)
            for (const auto& up : st.upper) {
                BigInt fl = -up.c[best];
                BigInt fu = lo.c[best];
                Row r;
                r.c.assign(nv, 0);
                for (size_t i = 0; i < nv; ++i) r.c[i] = fl * lo.c[i] + fu * up.c[i];
                r.rhs = fl * lo.rhs + fu * up.rhs;
                gcd_reduce(r);
                bool all_zero =
                    std::all_of(r.c.begin(), r.c.end(), [](const BigInt& x) { return x == 0; });
                if (all_zero) {
                    if (r.rhs > 0) return false;
                    continue;
                }
                combos.insert(std::move(r));
            }
        rows = std::move(rest);
        rows.insert(rows.end(), combos.begin(), combos.end());
        std::sort(rows.begin(), rows.end());
        rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
        stages.push_back(std::move(st));
    }

    for (const auto& r : rows)
        if (r.rhs > 0) return false;

    witness.assign(nv, 0);
    for (size_t si = stages.size(); si-- > 0;) {
        const Stage& st = stages[si];
        bool has_lo = false, has_up = false;
        Rat lo = 0, up = 0;
        auto bound = [&](const Row& r) {
            Rat acc = r.rhs;
            for (size_t i = 0; i < nv; ++i)
                if (i != st.var && r.c[i] != 0) acc -= Rat(r.c[i]) * witness[i];
            return acc / Rat(r.c[st.var]);
        };
        for (const auto& r : st.lower) {
            Rat b = bound(r);
            if (!has_lo || b > lo) lo = b, has_lo = true;
        }
        for (const auto& r : st.upper) {
            Rat b = bound(r);
            if (!has_up || b < up) up = b, has_up = true;
        }
        if (has_lo && has_up)
            witness[st.var] = (lo + up) / 2;
        else if (has_lo)
            witness[st.var] = lo + 1;
        else if (has_up)
            witness[st.var] = up - 1;
    }
    for (size_t si = substs.size(); si-- > 0;) {
        const Subst& s = substs[si];
        Rat v = s.eq.rhs;
        for (size_t i = 0; i < nv; ++i)
            if (i != s.var && s.eq.c[i] != 0) v -= Rat(s.eq.c[i]) * witness[i];
        witness[s.var] = v / Rat(s.eq.c[s.var]);
    }
    return true;
}

} // namespace

bool is_regular(const std::vector<std::vector<Pt>>& cells, const LatticePolygon& poly) {
    System sys = build_system(cells, poly);

    std::vector<Rat> parab(sys.points.size());
    for (size_t i = 0; i < sys.points.size(); ++i) {
        const Pt& p = sys.points[i];
        parab[i] = Rat(p.x * p.x + p.y * p.y);
    }
    if (satisfies(sys, parab)) return true;

    std::vector<Rat> witness;
    if (!feasible(sys, witness)) return false;
    if (!satisfies(sys, witness))
        throw std::logic_error("height witness failed exact recheck");
    return true;
}

bool is_regular(const Triangulation& tau, const LatticePolygon& poly) {
    std::vector<std::vector<Pt>> cells;
    cells.reserve(tau.triangles.size());
    for (const auto& t : tau.triangles) cells.push_back({t[0], t[1], t[2]});
    return is_regular(cells, poly);
}

bool is_regular(const Subdivision& s, const LatticePolygon& poly) {
    return is_regular(s.cells, poly);
}

std::set<CharFunction> secondary_polytope_vertices(const LatticePolygon& poly, VertexPool pool) {
    std::set<CharFunction> out;
    for (const auto& tau : enumerate_triangulations(poly, pool))
        if (is_regular(tau, poly)) out.insert(char_function(tau));
    return out;
}

} // namespace polycorr
