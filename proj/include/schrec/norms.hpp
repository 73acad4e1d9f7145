//==============================================================================
//  norms.hpp
//
//  Exponent arithmetic and norm functionals:
//    * ExponentTable: q_n (dual extension exponent), p_n (Sobolev endpoint),
//      the Hölder partner p of a potential exponent q (1/q + 2/p = 1), and
//      the Strichartz partner r of p (2/r + n/p = n/2) -- all exact rationals.
//    * L^p norms with h^n quadrature weights, mixed time-space norms
//      (trapezoid in t), intersection norms.
//    * The lambda-weighted dual-intersection norm (xstar_norm), a thresholding
//      upper bound for the sum-space norm (x_norm_upper), and the level-set
//      split functional v_lambda_norm.
//==============================================================================
#pragma once

#include "schrec/grid.hpp"
#include "schrec/rational.hpp"
#include "schrec/trajectory.hpp"

namespace schrec {

struct ExponentTable {
    int n = 0;
    Rational q_n;  // 1/q_n = 1/2 - 1/(n+1)
    Rational p_n;  // 1/p_n = 1/2 - 1/n  (infinite when n = 2)
    Rational q;    // potential integrability, after the upper clamp
    Rational p;    // 1/q + 2/p = 1
    Rational r;    // 2/r + n/p = n/2

    // Decay rate of the corrector in L^p: delta = n(2/n - 1/q) = 2 - n/q.
    Rational decay_nonendpoint() const { return Rational(2) - Rational(n) / q; }
    // Decay rate in the dual-intersection norm: 1/(n+1).
    Rational decay_endpoint() const { return Rational(1, n + 1); }
};

// Builds the table for dimension n and potential exponent q.  q above
// (n+1)/2 is clamped down to (n+1)/2; q at or below the admissibility floor
// (q <= 1 for n = 2, q < n/2 for n >= 3) is rejected.
ExponentTable exponents(int n, Rational q);

// (h^n sum |f|^p)^{1/p}; max norm for p = infinity.  Spatial fields only.
double lp_norm(const Field& f, double p);
double lp_norm(const Field& f, const Rational& p);

// l2 norm of a spectral field with (2pi/L)^n quadrature weights (the dual
// weight under which Parseval holds against the spatial h^n norm).
double spectral_l2_norm(const Field& F);

// Trapezoid-in-time of lp_norm(frame, p)^r over the trajectory's stored
// times, then the r-th root; sup over frames when r = infinity.
double mixed_norm(const Trajectory& u, double r, double p);

// max(lp_norm(f, p1), lp_norm(f, p2)).
double intersection_norm(const Field& f, double p1, double p2);

// max(lambda^{1/(n+1)} lp_norm(f, q_n), lp_norm(f, p_n)).
double xstar_norm(const Field& f, double lambda, int n);

// Upper bound on inf{lambda^{-1/(n+1)} ||g||_{q_n'} + ||h||_{p_n'} : f = g+h}
// over amplitude-threshold splittings g = f 1_{|f|>tau}, h = f 1_{|f|<=tau}.
// Thresholds are the nested dyadic levels tau_j = max|f| 2^{-j}, j = 1..levels,
// plus the extreme splittings g = f and h = f, so the bound is monotone
// non-increasing in `levels`.
double x_norm_upper(const Field& f, double lambda, int n, int levels);

}  // namespace schrec
