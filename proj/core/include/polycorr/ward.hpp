#pragma once

#include "polycorr/genpoly.hpp"
#include "polycorr/geometry.hpp"

#include <map>
#include <stdexcept>
#include <vector>

namespace polycorr {

// Raised when a truncated operator window is provably too small for the
// identity under test, as opposed to the identity being false.
struct window_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One normal-ordered operator monomial: multiplications on the left,
// derivatives on the right, with formal mu and N powers. Zero exponents are
// never stored.
struct OpKey {
    std::map<int, int> t;
    std::map<int, int> d;
    int mu = 0;
    int npow = 0;

    friend auto operator<=>(const OpKey&, const OpKey&) = default;
};

// Exact integer-coefficient differential operator in the t-variables. All
// arithmetic is exact; composition never drops terms.
class DiffOp {
  public:
    DiffOp() = default;

    static DiffOp identity();
    static DiffOp t_mult(int k);
    static DiffOp deriv(int k);

    bool is_zero() const { return terms_.empty(); }
    const std::map<OpKey, Coeff>& terms() const { return terms_; }

    void add_term(const OpKey& key, Coeff c);

    DiffOp& operator+=(const DiffOp& o);
    DiffOp& operator-=(const DiffOp& o);
    DiffOp operator+(const DiffOp& o) const;
    DiffOp operator-(const DiffOp& o) const;
    DiffOp operator*(Coeff c) const;
    bool operator==(const DiffOp&) const = default;

  private:
    std::map<OpKey, Coeff> terms_;
};

inline DiffOp operator*(Coeff c, const DiffOp& a) { return a * c; }

// Normal-ordered operator product via the Leibniz rule; exact.
DiffOp compose(const DiffOp& a, const DiffOp& b);

// Action of an operator on a polynomial in the t-variables (terms may carry
// mu and N powers; x-variables must be absent).
GenPoly apply(const DiffOp& op, const GenPoly& p);

// Constraint generator of the reference one-matrix model, truncated at
// index K in its t-sum: the shifted derivative, the dilatation-like t-sum and
// the quadratic derivative block, with the N-shift absorbed into the zeroth
// derivative slot. Requires n >= -1 and K >= n + 2.
DiffOp hmm_virasoro(int n, int K);

// Window-restricted commutator identity [L_n, L_m] = (n - m) L_{n+m},
// checked by acting on every t-monomial with indices and total degree at
// most D. Returns false only when the defect persists in a strictly larger
// window; throws window_error when K alone is to blame.
bool check_virasoro(int n, int m, int K, int D);

// Formal sum of closed index cycles with polynomial weights. Cycles need not
// be simple polygon boundaries.
struct CorrelatorSum {
    std::map<std::vector<Pt>, GenPoly> terms;

    bool operator==(const CorrelatorSum&) const = default;
};

// All single-edge insertions of an n-point convex fan into the listed cycle:
// for every boundary step and every n-tuple from the region whose insertion
// cell is a strictly convex clockwise (n+2)-gon, the spliced cycle enters
// with weight 1. Requires n >= 1.
CorrelatorSum insert_ihat(const std::vector<Pt>& boundary, int n,
                          const std::vector<Pt>& region);

// Constraint residual on the polygon's cell-model correlator at x = 0: the
// mu-weighted derivative, the dilatation-like t-sum and the insertion sum,
// truncated to total t-degree at most t_order. The model identity makes this
// vanish identically.
GenPoly ward_residual(const LatticePolygon& poly, int n, int t_order);

} // namespace polycorr
