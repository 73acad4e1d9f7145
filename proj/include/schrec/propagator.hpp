//==============================================================================
//  propagator.hpp -- Split-step (Strang) time evolution for the Schrodinger
//  equation i du/dt = -Lap(u) + V u on the periodic box, plus the
//  final-value solver and analytic stationary trajectories.
//
//  One Strang step of size tau:
//
//      u_{j+1} = exp(-i V tau/2) * F^{-1} exp(-i |xi|^2 tau) F * exp(-i V tau/2) u_j
//
//  The kinetic factor is an exact spectral phase (the free propagator is
//  exactly diagonal), so the scheme is exact for V = 0 and second-order
//  accurate otherwise.  Every factor is unimodular when V is real, hence the
//  discrete evolution is exactly unitary up to rounding.  The kinetic phase
//  is applied on ALL bins including the Nyquist rows: unitarity takes
//  precedence over the sign ambiguity of the unpaired Nyquist frequency
//  (the affected modes carry no energy in any shipped experiment).
//
//  The final-value problem  i dv/dt = -Lap(v) + conj(V) v,  v(T) = g  is
//  solved by the conjugation reduction: if u solves the initial-value
//  problem with potential V and data conj(g), then v(t) = conj(u(T-t)).
//==============================================================================
#pragma once

#include "schrec/grid.hpp"
#include "schrec/potential.hpp"
#include "schrec/stationary.hpp"
#include "schrec/trajectory.hpp"

namespace schrec {

// One Strang splitting step of fixed size tau, reusable across many states.
// step() advances in place; a negative tau steps backward and is the exact
// algebraic inverse of the corresponding forward step (symmetric splitting).
class StrangStepper {
 public:
  StrangStepper(const Potential& V, double tau);
  void step(Field& u) const;
  double tau() const { return tau_; }

 private:
  Grid grid_;
  double tau_;
  std::vector<Complex> vhalf_;  // exp(-i V tau/2), spatial table
  std::vector<Complex> kin_;    // exp(-i |xi|^2 tau) / N^n, spectral table
};

// Smallest step count satisfying the accuracy heuristics
//   tau * max|V| <= 0.1   and   tau * |xi_max|^2 <= pi/4
// over the interval [0, T].  evolve() warns on stderr when called with fewer
// steps (overridable via its warn flag); it still proceeds.
int recommended_steps(const Potential& V, double T);

// March f from t = 0 to t = T in `steps` Strang steps.  The trajectory
// retains frame 0, every keep-th intermediate frame (when keep >= 1), and
// the final frame; keep <= 0 keeps endpoints only.
Trajectory evolve(const Potential& V, const Field& f, double T, int steps,
                  int keep = 0, bool warn = true);

// Final frame of evolve(); T = 0 returns f unchanged.
Field initial_to_final(const Potential& V, const Field& f, double T, int steps);

// Solve the final-value problem i dv/dt = -Lap(v) + conj(V) v with v(T) = g
// via the conjugation reduction above.  Returned times ascend from 0 to T
// and mirror the kept set of the underlying initial-value march; the frame
// at time T equals g exactly.
Trajectory final_value_solve(const Potential& V, const Field& g, double T,
                             int steps, int keep = 0, bool warn = true);

// Analytic trajectory of a stationary state: frame at time t is
// exp(-i lambda^2 t) * (w0 + wcor).  No time stepping is involved.
// `samples` >= 2 frames at uniform times 0 = t_0 < ... < t_{samples-1} = T.
Trajectory stationary_trajectory(const StationaryState& s, double T, int samples);

}  // namespace schrec
