#include "polycorr/ward.hpp"

#include "polycorr/genfun.hpp"
#include "polycorr/wick.hpp"

#include <cstdlib>
#include <functional>
#include <utility>

namespace polycorr {

namespace {

void set_exp(std::map<int, int>& m, int k, int v) {
    if (v != 0)
        m[k] = v;
    else
        m.erase(k);
}

Coeff falling(int n, int k) {
    Coeff r = 1;
    for (int i = 0; i < k; ++i) r *= n - i;
    return r;
}

Coeff binom(int n, int k) {
    Coeff r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

} // namespace

DiffOp DiffOp::identity() {
    DiffOp r;
    r.add_term(OpKey{}, 1);
    return r;
}

DiffOp DiffOp::t_mult(int k) {
    if (k < 0) throw std::invalid_argument("variable index must be nonnegative");
    OpKey key;
    key.t[k] = 1;
    DiffOp r;
    r.add_term(key, 1);
    return r;
}

DiffOp DiffOp::deriv(int k) {
    if (k < 0) throw std::invalid_argument("variable index must be nonnegative");
    OpKey key;
    key.d[k] = 1;
    DiffOp r;
    r.add_term(key, 1);
    return r;
}

void DiffOp::add_term(const OpKey& key, Coeff c) {
    if (c == 0) return;
    auto [it, fresh] = terms_.try_emplace(key, c);
    if (fresh) return;
    it->second += c;
    if (it->second == 0) terms_.erase(it);
}

DiffOp& DiffOp::operator+=(const DiffOp& o) {
    for (const auto& [key, c] : o.terms_) add_term(key, c);
    return *this;
}

DiffOp& DiffOp::operator-=(const DiffOp& o) {
    for (const auto& [key, c] : o.terms_) add_term(key, -c);
    return *this;
}

DiffOp DiffOp::operator+(const DiffOp& o) const {
    DiffOp r = *this;
    r += o;
    return r;
}

DiffOp DiffOp::operator-(const DiffOp& o) const {
    DiffOp r = *this;
    r -= o;
    return r;
}

DiffOp DiffOp::operator*(Coeff c) const {
    DiffOp r;
    for (const auto& [key, v] : terms_) r.add_term(key, v * c);
    return r;
}

DiffOp compose(const DiffOp& a, const DiffOp& b) {
    DiffOp out;
    for (const auto& [ka, ca] : a.terms()) {
        for (const auto& [kb, cb] : b.terms()) {
            // Push the left factor's derivatives through the right factor's
            // multiplications, one shared variable at a time.
            std::vector<std::pair<int, std::pair<int, int>>> shared;
            for (const auto& [v, ord] : ka.d) {
                auto it = kb.t.find(v);
                if (it != kb.t.end()) shared.push_back({v, {ord, it->second}});
            }
            std::function<void(std::size_t, OpKey, Coeff)> walk =
                [&](std::size_t pos, OpKey key, Coeff c) {
                    if (pos == shared.size()) {
                        for (const auto& [v, pw] : ka.t) key.t[v] += pw;
                        for (const auto& [v, ord] : kb.d) key.d[v] += ord;
                        key.mu = ka.mu + kb.mu;
                        key.npow = ka.npow + kb.npow;
                        out.add_term(key, c);
                        return;
                    }
                    const auto [v, orders] = shared[pos];
                    const auto [ord, pw] = orders;
                    const int top = ord < pw ? ord : pw;
                    for (int j = 0; j <= top; ++j) {
                        OpKey next = key;
                        set_exp(next.t, v, pw - j);
                        set_exp(next.d, v, ord - j);
                        walk(pos + 1, std::move(next),
                             c * binom(ord, j) * falling(pw, j));
                    }
                };
            OpKey seed;
            seed.t = kb.t;
            seed.d = ka.d;
            walk(0, std::move(seed), ca * cb);
        }
    }
    return out;
}

GenPoly apply(const DiffOp& op, const GenPoly& p) {
    GenPoly out;
    for (const auto& [e, c] : p.terms()) {
        if (!e.x.empty() || !e.ttree.empty())
            throw std::invalid_argument(
                "operator action is defined on t-polynomials only");
        for (const auto& [key, oc] : op.terms()) {
            Coeff factor = oc * c;
            std::map<int, int> texp = e.t;
            bool dead = false;
            for (const auto& [v, ord] : key.d) {
                auto it = texp.find(v);
                const int have = it == texp.end() ? 0 : it->second;
                if (have < ord) {
                    dead = true;
                    break;
                }
                factor *= falling(have, ord);
                set_exp(texp, v, have - ord);
            }
            if (dead) continue;
            for (const auto& [v, pw] : key.t) texp[v] += pw;
            Exponent ne;
            ne.beta = e.beta;
            ne.mu = e.mu + key.mu;
            ne.npow = e.npow + key.npow;
            ne.t = std::move(texp);
            out.add_term(ne, factor);
        }
    }
    return out;
}

namespace {

// Derivative slot with the N-shift folded into index zero; empty below that.
DiffOp shifted_deriv(int j) {
    if (j < 0) return DiffOp{};
    DiffOp r = DiffOp::deriv(j);
    if (j == 0) {
        OpKey key;
        key.npow = 1;
        r.add_term(key, 1);
    }
    return r;
}

} // namespace

DiffOp hmm_virasoro(int n, int K) {
    if (n < -1)
        throw std::invalid_argument("generator index must be at least -1");
    if (K < n + 2)
        throw std::invalid_argument("window must cover the shifted derivative");
    DiffOp L;
    {
        OpKey key;
        key.d[n + 2] = 1;
        key.mu = 1;
        L.add_term(key, -1);
    }
    for (int k = 1; k <= K; ++k)
        L += compose(DiffOp::t_mult(k), shifted_deriv(k + n)) * Coeff(k);
    for (int k = 0; k <= n; ++k)
        L += compose(shifted_deriv(k), shifted_deriv(n - k));
    return L;
}

namespace {

// True when the windowed commutator defect kills every t-monomial with
// indices and total degree bounded by D.
bool commutator_clean(int n, int m, int K, int D) {
    DiffOp c = compose(hmm_virasoro(n, K), hmm_virasoro(m, K));
    c -= compose(hmm_virasoro(m, K), hmm_virasoro(n, K));
    if (n != m) c -= hmm_virasoro(n + m, K) * Coeff(n - m);
    if (c.is_zero()) return true;

    std::map<int, int> mono;
    std::function<bool(int, int)> scan = [&](int var, int budget) -> bool {
        if (var > D) {
            Exponent e;
            e.t = mono;
            return apply(c, GenPoly::monomial(e)).is_zero();
        }
        if (!scan(var + 1, budget)) return false;
        for (int pw = 1; pw <= budget; ++pw) {
            mono[var] = pw;
            const bool ok = scan(var + 1, budget - pw);
            mono.erase(var);
            if (!ok) return false;
        }
        return true;
    };
    return scan(0, D);
}

} // namespace

bool check_virasoro(int n, int m, int K, int D) {
    if (D < 0) throw std::invalid_argument("degree bound must be nonnegative");
    if (commutator_clean(n, m, K, D)) return true;
    const int wider = K + std::abs(n) + std::abs(m) + 2;
    if (commutator_clean(n, m, wider, D))
        throw window_error("commutator defect vanishes in a wider window; "
                           "raise K");
    return false;
}

CorrelatorSum insert_ihat(const std::vector<Pt>& boundary, int n,
                          const std::vector<Pt>& region) {
    if (n < 1) throw std::invalid_argument("insertion length must be positive");
    const int m = static_cast<int>(boundary.size());
    if (m < 2)
        throw std::invalid_argument("cycle needs at least two points");

    CorrelatorSum out;
    std::vector<Pt> tuple(static_cast<std::size_t>(n));
    for (int l = 0; l < m; ++l) {
        const Pt a = boundary[static_cast<std::size_t>(l)];
        const Pt b = boundary[static_cast<std::size_t>((l + 1) % m)];
        std::function<void(int)> place = [&](int pos) {
            if (pos == n) {
                std::vector<Pt> cell;
                cell.reserve(static_cast<std::size_t>(n) + 2);
                cell.push_back(a);
                cell.push_back(b);
                for (int i = n - 1; i >= 0; --i)
                    cell.push_back(tuple[static_cast<std::size_t>(i)]);
                if (!is_strict_convex_cw_cell(cell)) return;
                std::vector<Pt> cycle;
                cycle.reserve(static_cast<std::size_t>(m + n));
                cycle.insert(cycle.end(), boundary.begin(),
                             boundary.begin() + l + 1);
                cycle.insert(cycle.end(), tuple.begin(), tuple.end());
                cycle.insert(cycle.end(), boundary.begin() + l + 1,
                             boundary.end());
                auto [it, fresh] =
                    out.terms.try_emplace(std::move(cycle), GenPoly::constant(1));
                if (!fresh) it->second += GenPoly::constant(1);
                return;
            }
            for (const Pt& p : region) {
                tuple[static_cast<std::size_t>(pos)] = p;
                place(pos + 1);
            }
        };
        place(0);
    }
    return out;
}

GenPoly ward_residual(const LatticePolygon& poly, int n, int t_order) {
    if (n < 1)
        throw std::invalid_argument("constraint index must be positive");
    if (t_order < 0)
        throw std::invalid_argument("t-order cap must be nonnegative");

    const GenPoly base = subdivision_genfun(poly).set_x_zero();
    GenPoly res;
    for (const auto& [e, c] : base.terms()) {
        auto hit = e.t.find(n);
        if (hit != e.t.end()) {
            Exponent ne = e;
            ne.mu += 1;
            set_exp(ne.t, n, hit->second - 1);
            res.add_term(ne, -c * hit->second);
        }
        for (const auto& [q, a] : e.t) {
            const int k = q - n;
            if (k < 1) continue;
            Exponent ne = e;
            set_exp(ne.t, q, a - 1);
            ne.t[k] += 1;
            res.add_term(ne, c * Coeff(k + 2) * a);
        }
    }

    const std::vector<Pt> region = lattice_points(poly);
    const CorrelatorSum ins = insert_ihat(poly.boundary(), n, region);
    for (const auto& [cycle, w] : ins.terms)
        res += w * cell_expectation(cycle, region, t_order).set_x_zero();

    GenPoly out;
    for (const auto& [e, c] : res.terms()) {
        int deg = 0;
        for (const auto& [q, a] : e.t) deg += a;
        if (deg <= t_order) out.add_term(e, c);
    }
    return out;
}

} // namespace polycorr
