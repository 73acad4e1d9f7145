//==============================================================================
//  resolvent.hpp
//
//  The Helmholtz solution operator as a regularized Fourier multiplier
//
//      (P_lambda f)^(xi_k) = fhat(xi_k) / (lambda^2 - |xi_k|^2 + i eps lambda)
//
//  (outgoing limiting-absorption surrogate for the principal-value operator;
//  the lattice makes the p.v. ill-defined whenever lambda^2 hits a lattice
//  shell, which the stationary construction forces).  eps defaults to one
//  frequency spacing, eps = lambda * (2pi/L), and is a controlled model
//  parameter: downstream residual identities include the i eps lambda term
//  explicitly, and the eps-refinement study measures the linear bias.
//
//  The Nyquist shell is zeroed here and in the spectral Laplacian (a complex
//  multiplier would hand the unpaired row a phase it cannot represent), so
//  the exact identity (Delta + lambda^2 + i eps lambda) o P = Id holds on the
//  Nyquist-free subspace, which contains every P output.  The smooth bump
//  projections are real, radial and even, hence Nyquist-safe: they keep the
//  shell so that S_below + S_above = Id exactly.
//==============================================================================
#pragma once

#include "schrec/grid.hpp"

namespace schrec {

struct ResolventConfig {
    double lambda = 0.0;   // energy, > 0
    double epsilon = 0.0;  // absorption, > 0, units of lambda^2 / lambda
    Grid grid;
};

// epsilon < 0 selects the default lambda * (2pi/L).
ResolventConfig make_resolvent_config(const Grid& g, double lambda, double epsilon = -1.0);

// Spectral multiplication by 1 / (lambda^2 - |xi_k|^2 + i eps lambda) with the
// Nyquist shell zeroed.  Accepts spatial or spectral input, returns the same
// representation.
Field apply_resolvent(const Field& f, const ResolventConfig& cfg);

// Smooth bump profile: phi = 1 on r <= 2, 0 on r >= 4, glued with the
// standard C-infinity transition rho(t) = e^{-1/t}:
//   phi(r) = 1 - s((r-2)/2),  s(t) = rho(t) / (rho(t) + rho(1-t)).
// Fixed once (not configurable) so decompositions reproduce bit-for-bit.
double lp_bump(double r);

enum class BandSide { below, above };

// Frequency projection: multiplier phi(|xi|/lambda) (below) or
// 1 - phi(|xi|/lambda) (above).
Field lp_project(const Field& f, double lambda, BandSide which);

// Dyadic block: multiplier phi(|xi|/2^{k+1}) - phi(|xi|/2^k); blocks
// telescope to S_{<2^{kmax+1}} - S_{<2^{kmin}}.
Field dyadic_block(const Field& f, int k);

// lambda^{2n(1/p - 1/p_n)} ||P f||_p / ||f||_{p'}; requires q_n <= p <= p_n
// (p finite when n = 2) and f != 0.
double krs_ratio(const Field& f, const ResolventConfig& cfg, double p);

// lambda^{1/(n+1)} ||P f||_{p_n} / ||f||_{q_n'}; n >= 3 only, f != 0.
double refined_ratio(const Field& f, const ResolventConfig& cfg);

}  // namespace schrec
