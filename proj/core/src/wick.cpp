#include "polycorr/wick.hpp"

#include "polycorr/triangulate.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

namespace polycorr {
namespace {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;
using DirEdge = std::pair<Pt, Pt>;

BigInt factorial(int n) {
    BigInt f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// Directed-edge interner. Both directions of an edge are registered together
// so rev[] is total; degenerate loops (a, a) are rejected up front because
// the multiset engine's balance counter cannot represent self-pairing.
struct EdgeTable {
    std::map<DirEdge, int> ids;
    std::vector<int> rev;

    int intern(Pt a, Pt b) {
        if (a == b) throw std::invalid_argument("degenerate index step");
        auto it = ids.find({a, b});
        if (it != ids.end()) return it->second;
        const int e = static_cast<int>(rev.size());
        ids.emplace(DirEdge{a, b}, e);
        ids.emplace(DirEdge{b, a}, e + 1);
        rev.push_back(e + 1);
        rev.push_back(e);
        return e;
    }
};

// One interaction cell of the pairing sum: its directed boundary edges, the
// exponent it contributes and the number of cyclic readings it stands for.
struct CellEntry {
    std::vector<int> edges;
    Exponent inc;
    long long rotations = 1;
};

// Sums, over multisets of cells, the Gaussian matching count of the combined
// factor word (cells plus the fixed boundary word). A multiset contributes
// only when every directed edge type is balanced against its reverse; the
// matching count is then the product of p! over balanced type pairs. Cell
// repetitions divide by the multiset symmetries and multiply the per-cell
// rotation weights, so the whole sum stays a polynomial identity with the
// enumerative side. Accumulation is rational; integrality of every final
// coefficient is asserted on conversion.
class MultisetEngine {
  public:
    MultisetEngine(std::vector<CellEntry> universe, int edge_count)
        : universe_(std::move(universe)), cnt_(edge_count, 0) {
        max_cell_edges_ = 0;
        for (const CellEntry& c : universe_)
            max_cell_edges_ = std::max(max_cell_edges_,
                                       static_cast<int>(c.edges.size()));
    }

    GenPoly run(const std::vector<int>& boundary_word,
                const std::vector<int>& rev, int max_cells,
                bool exact_depth, int word_length) {
        rev_ = &rev;
        word_length_ = word_length;
        max_cells_ = max_cells;
        exact_depth_ = exact_depth;
        acc_.clear();
        for (int e : boundary_word) add_edge(e);
        dfs(0, 0);
        for (auto it = boundary_word.rbegin(); it != boundary_word.rend(); ++it)
            del_edge(*it);

        GenPoly out;
        for (const auto& [e, c] : acc_) {
            if (denominator(c) != 1)
                throw std::logic_error("pairing sum left a fractional term");
            out.add_term(e, static_cast<Coeff>(numerator(c)));
        }
        return out;
    }

  private:
    // Additions and removals must nest: every removal sequence runs in exact
    // reverse of its addition sequence, keeping touched_ a stack of the edge
    // types with nonzero count.
    void add_edge(int e) {
        if (cnt_[e] < cnt_[(*rev_)[e]]) --deficit_; else ++deficit_;
        if (cnt_[e]++ == 0) touched_.push_back(e);
    }

    void del_edge(int e) {
        if (--cnt_[e] == 0) touched_.pop_back();
        if (cnt_[e] < cnt_[(*rev_)[e]]) ++deficit_; else --deficit_;
    }

    void dfs(int first, int depth) {
        if (deficit_ == 0 && (!exact_depth_ || depth == max_cells_)) emit();
        if (depth == max_cells_) return;
        if (deficit_ > max_cell_edges_ * (max_cells_ - depth)) return;
        for (int u = first; u < static_cast<int>(universe_.size()); ++u) {
            const std::vector<int>& edges = universe_[u].edges;
            for (int e : edges) add_edge(e);
            chosen_.push_back(u);
            dfs(u, depth + 1);
            chosen_.pop_back();
            for (auto it = edges.rbegin(); it != edges.rend(); ++it)
                del_edge(*it);
        }
    }

    void emit() {
        BigRat coeff = 1;
        for (int e : touched_)
            if (e < (*rev_)[e]) coeff *= factorial(cnt_[e]);

        Exponent expo;
        int slots = word_length_;
        for (std::size_t i = 0; i < chosen_.size();) {
            std::size_t j = i;
            while (j < chosen_.size() && chosen_[j] == chosen_[i]) ++j;
            const CellEntry& cell = universe_[chosen_[i]];
            const int mult = static_cast<int>(j - i);
            for (int r = 0; r < mult; ++r) expo = expo + cell.inc;
            slots += mult * static_cast<int>(cell.edges.size());
            BigRat sym = 1;
            for (int r = 0; r < mult; ++r) sym *= cell.rotations;
            coeff *= sym / factorial(mult);
            i = j;
        }
        expo.mu = -slots / 2;
        acc_[expo] += coeff;
    }

    std::vector<CellEntry> universe_;
    std::vector<int> cnt_;
    std::vector<int> touched_;
    std::vector<int> chosen_;
    const std::vector<int>* rev_ = nullptr;
    int deficit_ = 0;
    int max_cell_edges_ = 0;
    int max_cells_ = 0;
    int word_length_ = 0;
    bool exact_depth_ = false;
    std::map<Exponent, BigRat> acc_;
};

// The boundary word of a listed cycle is read against the cell orientation:
// the cycle is traversed reversed, so each listed step (a, b) enters the
// pairing as the factor H[b, a]. This is the only place the flip happens.
std::vector<int> boundary_word(const std::vector<Pt>& cycle, EdgeTable& table) {
    std::vector<int> word;
    const int m = static_cast<int>(cycle.size());
    for (int i = 0; i < m; ++i)
        word.push_back(table.intern(cycle[(i + 1) % m], cycle[i]));
    return word;
}

bool in_box(const IndexBox& box, Pt p) {
    return box.n == 0 || box.contains(p);
}

GenPoly propagator_weight(const GaussianSpec& spec) {
    return spec.variant == GaussianVariant::hermitian_n ? n_pow(-1)
                                                        : mu_pow(-1);
}

long long count_matchings(const Monomial& m, unsigned used, int first) {
    const int L = static_cast<int>(m.size());
    while (first < L && (used & (1u << first))) ++first;
    if (first == L) return 1;
    long long total = 0;
    for (int j = first + 1; j < L; ++j) {
        if (used & (1u << j)) continue;
        if (m[first].row != m[j].col || m[first].col != m[j].row) continue;
        total += count_matchings(m, used | (1u << first) | (1u << j), first);
    }
    return total;
}

int loop_count(const std::vector<std::pair<int, int>>& pairs, int k) {
    std::vector<int> parent(k);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    for (auto [i, j] : pairs) {
        parent[find(i)] = find((j + 1) % k);
        parent[find((i + 1) % k)] = find(j);
    }
    int loops = 0;
    for (int v = 0; v < k; ++v)
        if (find(v) == v) ++loops;
    return loops;
}

void trace_pairings(int k, std::vector<std::pair<int, int>>& pairs,
                    unsigned used, int first, bool raw, GenPoly& out) {
    while (first < k && (used & (1u << first))) ++first;
    if (first == k) {
        Exponent e;
        e.npow = loop_count(pairs, k) + (raw ? 0 : 1 - k / 2);
        out.add_term(e, 1);
        return;
    }
    for (int j = first + 1; j < k; ++j) {
        if (used & (1u << j)) continue;
        pairs.push_back({first, j});
        trace_pairings(k, pairs, used | (1u << first) | (1u << j), first, raw,
                       out);
        pairs.pop_back();
    }
}

// Canonical clockwise triangles with corners in the pool, each listed once
// (least corner first).
std::vector<CellEntry> triangle_universe(const std::vector<Pt>& pool,
                                         EdgeTable& table) {
    std::vector<CellEntry> cells;
    const int n = static_cast<int>(pool.size());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                const Int o = orient2(pool[i], pool[j], pool[k]);
                if (o == 0) continue;
                const Pt a = pool[i];
                const Pt b = o > 0 ? pool[j] : pool[k];
                const Pt c = o > 0 ? pool[k] : pool[j];
                CellEntry cell;
                cell.edges = {table.intern(a, b), table.intern(b, c),
                              table.intern(c, a)};
                cell.inc.beta = 1;
                const int v = static_cast<int>(o > 0 ? o : -o);
                cell.inc.x[a] += v;
                cell.inc.x[b] += v;
                cell.inc.x[c] += v;
                cells.push_back(std::move(cell));
            }
    return cells;
}

// Every strictly convex clockwise cell with corners in the region, one entry
// per corner set; the cyclic reading multiplicity goes into rotations.
std::vector<CellEntry> convex_cell_universe(const std::vector<Pt>& region,
                                            EdgeTable& table) {
    if (region.size() > 16)
        throw std::invalid_argument("cell region too large");
    std::vector<Pt> pts = region;
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const int n = static_cast<int>(pts.size());

    std::vector<CellEntry> cells;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        std::vector<Pt> sub;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) sub.push_back(pts[i]);
        if (sub.size() < 3) continue;

        // Monotone chain with strict turns; subsets with interior or
        // edge-interior points drop out because the hull comes back shorter.
        auto half_hull = [](auto first, auto last) {
            std::vector<Pt> h;
            for (auto it = first; it != last; ++it) {
                while (h.size() >= 2 &&
                       cross(h.back() - h[h.size() - 2],
                             *it - h[h.size() - 2]) <= 0)
                    h.pop_back();
                h.push_back(*it);
            }
            h.pop_back();
            return h;
        };
        std::vector<Pt> hull = half_hull(sub.begin(), sub.end());
        const std::vector<Pt> upper = half_hull(sub.rbegin(), sub.rend());
        hull.insert(hull.end(), upper.begin(), upper.end());
        if (hull.size() != sub.size()) continue;

        std::reverse(hull.begin(), hull.end()); // counterclockwise -> clockwise
        std::rotate(hull.begin(), std::min_element(hull.begin(), hull.end()),
                    hull.end());
        if (!is_strict_convex_cw_cell(hull)) continue;

        CellEntry cell;
        const int q = static_cast<int>(hull.size());
        const Int v = cell_twice_area(hull);
        for (int i = 0; i < q; ++i) {
            cell.edges.push_back(table.intern(hull[i], hull[(i + 1) % q]));
            cell.inc.x[hull[i]] += static_cast<int>(v);
        }
        cell.inc.t[q - 2] += 1;
        cell.rotations = q;
        cells.push_back(std::move(cell));
    }
    return cells;
}

} // namespace

GenPoly propagator(const Factor& a, const Factor& b, const GaussianSpec& spec) {
    for (const Factor* f : {&a, &b})
        if (!in_box(spec.box, f->row) || !in_box(spec.box, f->col))
            throw std::invalid_argument("factor index outside the box");
    if (a.row != b.col || a.col != b.row) return {};
    return propagator_weight(spec);
}

GenPoly wick_expectation(const Monomial& m, const GaussianSpec& spec) {
    const int L = static_cast<int>(m.size());
    if (L > spec.pairing_cap)
        throw std::invalid_argument("monomial exceeds the pairing cap");
    for (const Factor& f : m)
        if (!in_box(spec.box, f.row) || !in_box(spec.box, f.col))
            throw std::invalid_argument("factor index outside the box");
    if (L % 2 != 0) return {};
    if (L == 0) return GenPoly::constant(1);

    const long long matchings = count_matchings(m, 0, 0);
    if (matchings == 0) return {};
    GenPoly weight = GenPoly::constant(matchings);
    const GenPoly single = propagator_weight(spec);
    for (int i = 0; i < L / 2; ++i) weight = weight * single;
    return weight;
}

GenPoly hmm_trace_moment(int k, bool raw) {
    if (k <= 0 || k % 2 != 0 || k > 16)
        throw std::invalid_argument("trace order must be even, in [2, 16]");
    GenPoly out;
    std::vector<std::pair<int, int>> pairs;
    trace_pairings(k, pairs, 0, 0, raw, out);
    return out;
}

GenPoly correlator_wick(const LatticePolygon& poly, int k,
                        const GaussianSpec& spec) {
    if (spec.variant != GaussianVariant::deformed_2d)
        throw std::invalid_argument("boundary correlators need the deformed model");
    if (k < 0) throw std::invalid_argument("negative interaction order");

    std::vector<Pt> pool;
    if (spec.strict_box) {
        for (Pt p : poly.boundary())
            if (!spec.box.contains(p))
                throw std::invalid_argument("index box does not cover the polygon");
        pool = spec.box.points();
    } else {
        pool = lattice_points(poly);
    }

    EdgeTable table;
    std::vector<CellEntry> universe = triangle_universe(pool, table);
    const std::vector<int> word = boundary_word(poly.boundary(), table);
    MultisetEngine engine(std::move(universe),
                          static_cast<int>(table.rev.size()));
    return engine.run(word, table.rev, k, /*exact_depth=*/true, poly.n());
}

GenPoly cell_expectation(const std::vector<Pt>& cycle,
                         const std::vector<Pt>& region, int max_cells) {
    const int m = static_cast<int>(cycle.size());
    if (m < 2) throw std::invalid_argument("cycle too short");
    if (max_cells < 0) throw std::invalid_argument("negative cell cap");

    EdgeTable table;
    std::vector<CellEntry> universe = convex_cell_universe(region, table);
    const std::vector<int> word = boundary_word(cycle, table);
    MultisetEngine engine(std::move(universe),
                          static_cast<int>(table.rev.size()));
    return engine.run(word, table.rev, max_cells, /*exact_depth=*/false, m);
}

} // namespace polycorr
