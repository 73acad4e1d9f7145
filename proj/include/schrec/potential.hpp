//==============================================================================
//  potential.hpp
//
//  Potential: a spatial Field with declared integrability exponent q, the
//  derived exponent table, and cached norms.  Construction enforces the
//  support rule: samples outside the central half-box [-L/4, L/4)^n must be
//  numerically negligible (<= 1e-12 relative to max|V|) so periodization
//  artifacts stay below quadrature error.
//==============================================================================
#pragma once

#include "schrec/grid.hpp"
#include "schrec/norms.hpp"

namespace schrec {

struct Potential {
    Field field;  // spatial, real or complex values
    Rational q;
    ExponentTable table;
    // Cached norms (match recomputation to 1e-12 by construction).
    double norm_l1 = 0.0;       // ||V||_1
    double norm_lq = 0.0;       // ||V||_q
    double norm_lp_dual = 0.0;  // ||V||_{p'} with p from the table
    double norm_ln2 = 0.0;      // ||V||_{n/2}
    double norm_lnp12 = 0.0;    // ||V||_{(n+1)/2}

    const Grid& grid() const { return field.grid; }
};

Potential make_potential(const Field& v, Rational q);

// Pointwise conjugate with the same exponent metadata.
Potential conj_potential(const Potential& v);

// Level-set split functional: with E = {|V| > lambda ||V||_{n/2}},
//   ||V 1_E||_{n/2} + lambda^{-2/(n+1)} ||V 1_{E^c}||_{(n+1)/2}.
// Requires n >= 3.  Zero potential returns 0 by convention.
double v_lambda_norm(const Potential& v, double lambda);

}  // namespace schrec
