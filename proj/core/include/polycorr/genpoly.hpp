#pragma once

#include "polycorr/geometry.hpp"

#include <map>
#include <string>

namespace polycorr {

using Coeff = long long;

// Exponent record of one monomial: formal variables beta, mu (Laurent), N,
// the cell-size family t_q, the per-point deformation family x_a and the
// tree-indexed family used by the higher-dimensional model. Zero exponents
// are never stored in the maps.
struct Exponent {
    int beta = 0;
    int mu = 0;
    int npow = 0;
    std::map<int, int> t;
    std::map<Pt, int> x;
    std::map<std::string, int> ttree;

    bool operator==(const Exponent&) const = default;
    bool operator<(const Exponent& o) const;
    Exponent operator+(const Exponent& o) const;
};

// Sparse multivariate Laurent polynomial with exact integer coefficients and
// canonically ordered terms. Immutable-style value semantics; all arithmetic
// is exact, zero coefficients are dropped eagerly.
class GenPoly {
  public:
    GenPoly() = default;

    static GenPoly constant(Coeff c);
    static GenPoly monomial(const Exponent& e, Coeff c = 1);

    bool is_zero() const { return terms_.empty(); }
    const std::map<Exponent, Coeff>& terms() const { return terms_; }
    Coeff coeff(const Exponent& e) const;

    void add_term(const Exponent& e, Coeff c);

    GenPoly& operator+=(const GenPoly& o);
    GenPoly& operator-=(const GenPoly& o);
    GenPoly operator+(const GenPoly& o) const;
    GenPoly operator-(const GenPoly& o) const;
    GenPoly operator*(const GenPoly& o) const;
    GenPoly operator*(Coeff c) const;
    GenPoly operator-() const;
    bool operator==(const GenPoly&) const = default;

    // Every coefficient must be divisible by c; throws otherwise.
    GenPoly divide_exact(Coeff c) const;

    // Evaluation of the formal x-exponentials at x = 0: strips every x
    // exponent and merges the resulting terms.
    GenPoly set_x_zero() const;

    // Largest beta exponent; throws on the zero polynomial.
    int beta_degree() const;

    // Canonical human-readable form; "0" for the zero polynomial.
    std::string str() const;

  private:
    std::map<Exponent, Coeff> terms_;
};

inline GenPoly operator*(Coeff c, const GenPoly& p) { return p * c; }

// Single-variable monomial helpers.
GenPoly beta_pow(int k);
GenPoly mu_pow(int k);
GenPoly n_pow(int k);
GenPoly t_var(int q, int k = 1);
GenPoly x_var(Pt a, int k = 1);
GenPoly ttree_var(const std::string& code, int k = 1);

} // namespace polycorr
