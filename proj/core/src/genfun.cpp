#include "polycorr/genfun.hpp"

namespace polycorr {

GenPoly correlator_direct(const LatticePolygon& poly) {
    GenPoly sum;
    for (const auto& tau : enumerate_triangulations(poly)) {
        Exponent e;
        e.beta = static_cast<int>(tau.triangles.size());
        for (const auto& [v, c] : char_function(tau))
            e.x[v] = static_cast<int>(c);
        sum.add_term(e, 1);
    }
    return sum;
}

GenPoly subdivision_genfun(const LatticePolygon& poly) {
    const long long m = static_cast<long long>(poly.n());
    GenPoly sum;
    for (const auto& s : enumerate_subdivisions(poly)) {
        Exponent e;
        Coeff rotations = 1;
        long long corner_total = 0;
        for (const auto& cell : s.cells) {
            const int corners = static_cast<int>(cell.size());
            rotations *= corners;
            corner_total += corners;
            e.t[corners - 2] += 1;
            const Int vol = cell_twice_area(cell);
            for (const Pt& v : cell) e.x[v] += static_cast<int>(vol);
        }
        e.mu = static_cast<int>(-(corner_total + m) / 2);
        sum.add_term(e, rotations);
    }
    return sum;
}

} // namespace polycorr
