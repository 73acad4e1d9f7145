//==============================================================================
//  stationary.hpp
//
//  Stationary scattering states w = w0 + wcor with w0 = e^{-i lambda omega.x}
//  and wcor = (Id - P_lambda o V)^{-1} [P_lambda(V w0)], inverted by Neumann
//  series.  Convergence is detected empirically from the series (the critical
//  energy below which the composed operator stops contracting is an existence
//  constant, not a formula); failure is a first-class reported outcome.
//
//  The working norm is the L^p norm with p from the potential's exponent
//  table (non-endpoint mode) or the lambda-weighted dual-intersection norm
//  (endpoint mode, n >= 3 with q = n/2 exactly).
//
//  Because the resolvent carries the i eps lambda absorption, a converged
//  state satisfies the adjusted identity
//      (Delta + lambda^2 + i eps lambda - V) (w0 + wcor) = i eps lambda w0
//  up to the Neumann tail; helmholtz_residual measures exactly this.
//==============================================================================
#pragma once

#include <array>
#include <functional>
#include <vector>

#include "schrec/potential.hpp"
#include "schrec/resolvent.hpp"

namespace schrec {

enum class StateMode { nonendpoint, endpoint };
enum class NormKind { Lp, Xstar };

// The norm driving the Neumann stopping rule.
struct IterationNorm {
    NormKind kind = NormKind::Lp;
    double p = 2.0;        // used when kind == Lp
    double lambda = 1.0;   // used when kind == Xstar

    double operator()(const Field& f) const;
};

struct NeumannReport {
    int iterations = 0;              // number of P o V applications performed
    double contraction_estimate = 0; // max term ratio over the last <= 5 steps
    double final_increment = 0;      // last term norm relative to ||rhs||
    bool converged = false;          // final_increment < tol AND contraction < 1
    NormKind norm_used = NormKind::Lp;
};

// w = sum_{k=0}^{K} (P o V)^k rhs, stopping at the first term below
// tol * ||rhs|| in the given norm.  Guarantees
// ||w - (rhs + P(V w))|| <= tol * ||rhs|| when converged.  rhs = 0 returns
// zero immediately; non-convergence within max_iter returns the partial sum
// with converged = false (no throw).
std::pair<Field, NeumannReport> neumann_invert(const Potential& V,
                                               const ResolventConfig& cfg,
                                               const Field& rhs,
                                               const IterationNorm& norm,
                                               double tol = 1e-10,
                                               int max_iter = 200);

struct StationaryState {
    double lambda = 0.0;
    std::array<double, 3> omega{};  // unit vector, lambda*omega on the lattice
    std::array<int, 3> kappa{};     // lattice integers of lambda*omega
    Field w0;                       // plane wave e^{-i lambda omega.x}
    Field wcor;
    NeumannReport neumann;
    double residual = 0.0;          // recorded, never assumed
};

// kappa: integer lattice vector of lambda*omega; must be nonzero and stay
// off the Nyquist row (|component| < N/2), since the resolvent zeroes that
// shell.  Endpoint mode requires n >= 3 and q = n/2 exactly.
StationaryState build_stationary_state(const Potential& V,
                                       const std::array<int, 3>& kappa,
                                       StateMode mode,
                                       double tol = 1e-10,
                                       int max_iter = 200);

// (lambda, omega) form; lambda*omega must land on the lattice within 1e-9
// relative, else rejected.
StationaryState build_stationary_state(const Potential& V,
                                       double lambda,
                                       const std::array<double, 3>& omega,
                                       StateMode mode,
                                       double tol = 1e-10,
                                       int max_iter = 200);

// || (Delta + lambda^2 + i eps lambda - V) (w0+wcor) - i eps lambda w0 ||_2
// divided by ||V w0||_2 (absolute when V = 0).  Delta applied spectrally.
double helmholtz_residual(const StationaryState& s, const Potential& V,
                          const ResolventConfig& cfg);

struct DecayRow {
    double lambda = 0.0;
    double corrector_norm = 0.0;  // mode's norm of wcor
    double contraction = 0.0;
    int iterations = 0;
    double residual = 0.0;
    bool converged = false;
};

struct DecayReport {
    std::vector<DecayRow> rows;
    double slope = 0.0;        // log-log fit of corrector_norm vs lambda
    bool slope_defined = false;
    bool all_converged = false;
};

// One state per ladder rung (each an integer lattice vector, typically
// m * kappa0 for geometric m).  A non-convergent rung aborts the ladder,
// returning the partial report.
DecayReport decay_study(const Potential& V, StateMode mode,
                        const std::vector<std::array<int, 3>>& ladder,
                        double tol = 1e-10);

}  // namespace schrec
