//==============================================================================
//  reconstruct.hpp -- Potential recovery from stationary-state pairings.
//
//  For a target frequency xi on the even sublattice, pick a unit vector nu
//  orthogonal to xi and an energy lambda >= |xi|/2, and form
//
//      omega1 = xi/(2 lambda) + (1 - |xi|^2/(4 lambda^2))^{1/2} nu,
//      omega2 = -xi/(2 lambda) + (1 - |xi|^2/(4 lambda^2))^{1/2} nu,
//
//  so |omega1| = |omega2| = 1 and omega1 - omega2 = xi/lambda.  The pairing
//  of the two stationary states
//
//      Int (V1 - V2) w1 conj(w2) = Int F e^{-i xi.x}  +  (corrector terms)
//
//  estimates (2 pi)^{n/2} Fhat(xi) with an error O(lambda^{-delta}), so a
//  ladder in lambda recovers the spectrum of F = V1 - V2 frequency by
//  frequency, and an inverse transform rebuilds F itself.
//
//  Lattice exactness.  xi is restricted to the even sublattice so xi/2 is a
//  lattice frequency, and mu nu is realized as an exact lattice vector
//  m * eta0, where eta0 is the shortest primitive integer vector orthogonal
//  to xi (for xi with a zero component this is the coordinate direction of
//  smallest index, e.g. xi = (2,0) -> eta0 = (0,1)).  Then
//
//      lambda omega1 = xi/2 + m eta0,   lambda omega2 = -xi/2 + m eta0
//
//  are exact lattice frequencies for every integer m >= 1, plane waves are
//  exactly periodic, and the pairing algebra holds on the grid to rounding.
//  Consequence: the recovered field lives at half resolution, on the grid
//  make_grid(n, N/2, L/2) whose spectrum is exactly the even sublattice and
//  whose sample points are the central half-box samples of the parent grid.
//
//  Fhat(0) is outside the scheme (xi = 0 admits no configuration); it is
//  filled from the ground truth when available and otherwise reported as a
//  hole.  For real potentials Fhat(-xi) = conj(Fhat(xi)) fills the mirrored
//  half of the spectrum.
//==============================================================================
#pragma once

#include <array>
#include <functional>
#include <vector>

#include "schrec/grid.hpp"
#include "schrec/potential.hpp"
#include "schrec/stationary.hpp"

namespace schrec {

struct ScatteringConfig {
    std::array<int, 3> xi_idx{0, 0, 0};   // xi in lattice units (even integers)
    std::array<int, 3> eta_idx{0, 0, 0};  // m * eta0: the lattice vector mu*nu
    int m = 0;                            // ladder index
    double lambda = 0.0;
    std::array<double, 3> xi{0, 0, 0};    // physical vectors
    std::array<double, 3> nu{0, 0, 0};
    std::array<double, 3> omega1{0, 0, 0};
    std::array<double, 3> omega2{0, 0, 0};
    std::array<int, 3> k1{0, 0, 0};       // lambda*omega1 in lattice units
    std::array<int, 3> k2{0, 0, 0};       // lambda*omega2 in lattice units
};

// Build the configuration for one (xi, m).  Errors: xi = 0, odd components,
// no orthogonal lattice direction within the search bound (cannot happen for
// n >= 2), or frequencies touching the Nyquist rows of `grid`.
//
// The last condition depends on the direction of xi: the orthogonal step is
// an integer lattice vector, so a target off the axes and diagonals burns
// through the resolved band in fewer rungs.  scattering_admissible answers
// whether a given (xi, m) fits; it throws on requests that are invalid for
// every m (zero or odd xi) and returns false only for band overflow.
bool scattering_admissible(const std::array<int, 3>& xi_idx, int m, const Grid& grid);

ScatteringConfig scattering_vectors(const std::array<int, 3>& xi_idx, int m,
                                    const Grid& grid);

struct FhatEstimate {
    ScatteringConfig cfg;
    Complex fhat{0.0, 0.0};     // (2 pi)^{-n/2} * Int (V1-V2) w1 conj(w2)
    Complex leading{0.0, 0.0};  // plane-wave part: equals the direct quadrature
    Complex rem1{0.0, 0.0};     // w1_0 x conj(w2_cor) term, same scaling
    Complex rem2{0.0, 0.0};     // w1_cor x conj(w2_0)
    Complex rem3{0.0, 0.0};     // w1_cor x conj(w2_cor)
    bool converged = false;
    int iterations1 = 0;
    int iterations2 = 0;
    double residual1 = 0.0;
    double residual2 = 0.0;
};

// Per-lambda estimates of Fhat(xi) for one xi.  States are built for V1 and
// conj(V2); a non-convergent rung is reported with converged = false and NaN
// values and skipped by downstream fits.
std::vector<FhatEstimate> fhat_direct(const Potential& V1, const Potential& V2,
                                      const std::vector<ScatteringConfig>& cfgs,
                                      StateMode mode, double tol = 1e-10);

using FieldMap = std::function<Field(const Field&)>;

// The exact free initial-to-final map (one spectral phase, no stepping).
FieldMap free_final_state_map(const Grid& grid, double T);

// Born-type data-side estimate from a black-box initial-to-final map U of an
// unknown potential:
//
//   Fhat_data(xi) = i/(T (2 pi)^{n/2}) * Int (U f - Ufree f) conj(g),
//   f = plane_wave(lambda omega1),  g = e^{-i lambda^2 T} plane_wave(lambda omega2).
//
// The constant is fixed by the physical-solution pairing identity with
// V2 = 0: to leading (Born) order in the unknown V the value is Fhat(xi),
// which the known-potential agreement test pins down.
Complex fhat_from_data(const FieldMap& U, const FieldMap& Ufree,
                       const ScatteringConfig& cfg, const Grid& grid, double T);

struct RecoveryOptions {
    std::vector<int> ladder;            // ascending m values, all >= 1
    StateMode mode = StateMode::nonendpoint;
    bool extrapolate = true;            // 2-point Richardson with the known rate
    double tol = 1e-10;                 // Neumann tolerance
    bool assume_real = false;           // data mode: fill Fhat(-xi) = conj(Fhat(xi))
};

struct XiRecord {
    std::array<int, 3> xi_idx{0, 0, 0};
    std::vector<FhatEstimate> rungs;    // empty when filled by symmetry
    Complex fhat_final{0.0, 0.0};       // extrapolated or top converged rung
    double remainder_slope = 0.0;       // log-log slope of |rem1+rem2+rem3| vs lambda
    bool slope_defined = false;
    bool by_symmetry = false;
};

struct ReconstructionReport {
    Grid half_grid{0, 0, 0.0};
    std::vector<XiRecord> records;
    Field v_rec;                        // spatial field on half_grid
    Complex fhat_zero{0.0, 0.0};
    bool fhat_zero_filled = false;      // false = reported hole (bin left 0)
    bool has_truth = false;
    double rel_l2_error = 0.0;          // vs truth restricted to the half-box
};

// Direct mode: both potentials known; ground truth F = V1 - V2 fills
// Fhat(0) and provides the error report.  Richardson extrapolation uses the
// decay rate of V1's exponent table (non-endpoint: n(2/n - 1/q); endpoint:
// 1/(n+1)) on the top two converged rungs.
//
// Both modes clamp the ladder per xi to its admissible rungs (see
// scattering_admissible): off-axis targets cannot reach the same top m as
// axis-aligned ones, and each xi simply uses the longest ladder the grid
// resolves.  A xi left with fewer than two rungs (one, if only one was
// requested) is an error: widen the grid or trim the frequency set.
ReconstructionReport recover_potential(const Potential& V1, const Potential& V2,
                                       const std::vector<std::array<int, 3>>& xi_set,
                                       const RecoveryOptions& opt);

// Data mode: only the map U (plus T) is known.  Estimates are Born-type per
// rung, the top rung is used per xi (no extrapolation: the Born error is not
// a clean lambda power), Fhat(0) is a hole, and no error report is possible.
ReconstructionReport recover_potential(const FieldMap& U, const Grid& grid,
                                       double T,
                                       const std::vector<std::array<int, 3>>& xi_set,
                                       const RecoveryOptions& opt);

}  // namespace schrec
