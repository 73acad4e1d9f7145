//==============================================================================
//  test_stationary.cpp -- Fixed-point construction of stationary scattering
//  states.
//
//  The corrector solves w = P(V(w0 + w)) by Neumann iteration, so three
//  exact statements are testable without any oracle potential:
//    * the converged iterate satisfies its own fixed-point equation to the
//      stopping tolerance,
//    * w = w0 + wcor satisfies (Lap + lambda^2 + i eps lambda - V) w =
//      i eps lambda w0 up to the Nyquist content of V w and the Neumann tail
//      (helmholtz_residual measures the defect),
//    * V = 0 collapses everything: one term, zero corrector, zero residual.
//  The decay study's slope needs no external value either: the first Born
//  term P(V w0) already scales like a negative power of lambda, and the
//  ladder fit must come out negative for a smooth compact potential.
//==============================================================================
#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "schrec/grid.hpp"
#include "schrec/potential.hpp"
#include "schrec/resolvent.hpp"
#include "schrec/rng.hpp"
#include "schrec/stationary.hpp"

using namespace schrec;

namespace {

double l2(const Field& f) { return lp_norm(f, 2.0); }

double rel_l2_diff(const Field& a, const Field& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        num += std::norm(a.values[i] - b.values[i]);
        den += std::norm(b.values[i]);
    }
    return std::sqrt(num / den);
}

Potential demo_potential(const Grid& g, double amp) {
    return make_potential(gaussian_field(g, amp, 1.0), Rational(3, 2));
}

}  // namespace

TEST_CASE("iteration norm dispatches between L^p and the dual-intersection norm") {
    const Grid g = make_grid(3, 16, 16.0);
    CounterRng rng(201, 0);
    Field f;
    f.grid = g;
    f.rep = Rep::spatial;
    f.values.resize(g.size());
    for (auto& v : f.values) v = rng.next_complex_gaussian();
    IterationNorm lp;
    lp.kind = NormKind::Lp;
    lp.p = 6.0;
    CHECK(lp(f) == doctest::Approx(lp_norm(f, 6.0)).epsilon(1e-13));
    IterationNorm xs;
    xs.kind = NormKind::Xstar;
    xs.lambda = 2.0;
    CHECK(xs(f) == doctest::Approx(xstar_norm(f, 2.0, 3)).epsilon(1e-13));
}

TEST_CASE("neumann_invert with zero potential returns rhs in one term") {
    const Grid g = make_grid(2, 64, 32.0);
    const Potential V0 = demo_potential(g, 0.0);
    const ResolventConfig cfg = make_resolvent_config(g, 2.0);
    const Field rhs = drop_nyquist(plane_wave(g, {3, 1, 0}));
    IterationNorm norm;
    auto [w, rep] = neumann_invert(V0, cfg, rhs, norm);
    CHECK(rep.converged);
    CHECK(rel_l2_diff(w, rhs) <= 1e-12);
    CHECK(rep.contraction_estimate == 0.0);
}

TEST_CASE("neumann_invert with zero rhs returns zero immediately") {
    const Grid g = make_grid(2, 64, 32.0);
    const Potential V = demo_potential(g, 0.3);
    const ResolventConfig cfg = make_resolvent_config(g, 2.0);
    Field zero;
    zero.grid = g;
    zero.rep = Rep::spatial;
    zero.values.assign(g.size(), Complex(0.0, 0.0));
    IterationNorm norm;
    auto [w, rep] = neumann_invert(V, cfg, zero, norm);
    CHECK(rep.converged);
    CHECK(rep.iterations == 0);
    CHECK(l2(w) == 0.0);
}

TEST_CASE("converged Neumann sum satisfies its fixed-point equation") {
    const Grid g = make_grid(2, 64, 32.0);
    const Potential V = demo_potential(g, 0.4);
    const ResolventConfig cfg = make_resolvent_config(g, 2.5);
    const Field rhs = apply_resolvent(pointwise_mul(V.field, plane_wave(g, {4, 0, 0})), cfg);
    IterationNorm norm;
    const double tol = 1e-10;
    auto [w, rep] = neumann_invert(V, cfg, rhs, norm, tol);
    REQUIRE(rep.converged);
    CHECK(rep.contraction_estimate < 1.0);
    CHECK(rep.final_increment < tol);
    // Documented guarantee: ||w - (rhs + P(V w))||_2 <= tol ||rhs||_2.
    const Field fp = add(rhs, apply_resolvent(pointwise_mul(V.field, w), cfg));
    double defect = 0.0;
    for (std::size_t i = 0; i < w.values.size(); ++i)
        defect += std::norm(w.values[i] - fp.values[i]);
    defect = std::sqrt(defect * std::pow(g.h(), g.n));
    CHECK(defect <= tol * l2(rhs));
}

TEST_CASE("non-convergent inversion reports instead of throwing") {
    // A potential strong enough to push the contraction toward 1 plus a
    // starved iteration cap must surface as converged = false.
    const Grid g = make_grid(2, 64, 32.0);
    const Potential V = demo_potential(g, 4.0);
    const ResolventConfig cfg = make_resolvent_config(g, 0.5, 0.01);
    const Field rhs = drop_nyquist(plane_wave(g, {1, 0, 0}));
    IterationNorm norm;
    auto [w, rep] = neumann_invert(V, cfg, rhs, norm, 1e-12, 3);
    CHECK_FALSE(rep.converged);
    CHECK(rep.iterations <= 3);
    (void)w;
}

TEST_CASE("stationary state for the zero potential is the bare plane wave") {
    const Grid g = make_grid(2, 64, 32.0);
    const Potential V0 = demo_potential(g, 0.0);
    const StationaryState s = build_stationary_state(V0, {4, 3, 0}, StateMode::nonendpoint);
    CHECK(l2(s.wcor) == 0.0);
    CHECK(s.residual <= 1e-12);
    CHECK(s.neumann.converged);
    // lambda = |kappa| * (2pi/L) = 5 * fs and omega = kappa / |kappa|.
    CHECK(s.lambda == doctest::Approx(5.0 * g.freq_step()).epsilon(1e-13));
    CHECK(s.omega[0] == doctest::Approx(0.8).epsilon(1e-13));
    CHECK(s.omega[1] == doctest::Approx(0.6).epsilon(1e-13));
    CHECK(rel_l2_diff(s.w0, plane_wave(g, {4, 3, 0})) <= 1e-13);
}

TEST_CASE("stationary state rejects zero and Nyquist-touching directions") {
    const Grid g = make_grid(2, 32, 32.0);
    const Potential V = demo_potential(g, 0.2);
    CHECK_THROWS(build_stationary_state(V, {0, 0, 0}, StateMode::nonendpoint));
    CHECK_THROWS(build_stationary_state(V, {16, 0, 0}, StateMode::nonendpoint));
    CHECK_THROWS(build_stationary_state(V, {3, -16, 0}, StateMode::nonendpoint));
    CHECK_NOTHROW(build_stationary_state(V, {15, 0, 0}, StateMode::nonendpoint));
}

TEST_CASE("the (lambda, omega) overload agrees with the lattice form") {
    const Grid g = make_grid(2, 64, 32.0);
    const Potential V = demo_potential(g, 0.3);
    const StationaryState a = build_stationary_state(V, {6, 8, 0}, StateMode::nonendpoint);
    const double lambda = 10.0 * g.freq_step();
    const StationaryState b =
        build_stationary_state(V, lambda, {0.6, 0.8, 0.0}, StateMode::nonendpoint);
    CHECK(a.kappa == b.kappa);
    CHECK(rel_l2_diff(b.wcor, a.wcor) <= 1e-12);
    // Off-lattice directions are rejected, not silently rounded.
    CHECK_THROWS(
        build_stationary_state(V, lambda * 1.03, {0.6, 0.8, 0.0}, StateMode::nonendpoint));
}

TEST_CASE("helmholtz residual is small on an adequately resolved grid") {
    // N = 128, L = 32: the Nyquist distance of exp(-|x|^2/2) * w modes keeps
    // aliasing near 1e-10 for moderate kappa, so the measured residual is the
    // Neumann tail.
    const Grid g = make_grid(2, 128, 32.0);
    const Potential V = demo_potential(g, 0.5);
    const StationaryState s = build_stationary_state(V, {8, 0, 0}, StateMode::nonendpoint);
    REQUIRE(s.neumann.converged);
    CHECK(s.residual <= 1e-8);
    const ResolventConfig cfg = make_resolvent_config(g, s.lambda);
    CHECK(helmholtz_residual(s, V, cfg) == doctest::Approx(s.residual).epsilon(1e-12));
}

TEST_CASE("starved iteration cap leaves a visibly larger residual") {
    const Grid g = make_grid(2, 128, 32.0);
    const Potential V = demo_potential(g, 0.5);
    const StationaryState full = build_stationary_state(V, {4, 0, 0}, StateMode::nonendpoint);
    const StationaryState cut =
        build_stationary_state(V, {4, 0, 0}, StateMode::nonendpoint, 1e-10, 2);
    REQUIRE(full.neumann.converged);
    CHECK(cut.residual > 10.0 * full.residual);
}

TEST_CASE("endpoint mode guards its domain and uses the dual norm") {
    const Grid g3 = make_grid(3, 16, 32.0);
    const Grid g2 = make_grid(2, 32, 32.0);
    const Potential V3 = make_potential(gaussian_field(g3, 0.2, 1.0), Rational(3, 2));
    const Potential V2 = make_potential(gaussian_field(g2, 0.2, 1.0), Rational(3, 2));
    const Potential V3q2 = make_potential(gaussian_field(g3, 0.2, 1.0), Rational(2));
    // Endpoint needs n >= 3 and q = n/2 exactly.
    CHECK_THROWS(build_stationary_state(V2, {2, 0, 0}, StateMode::endpoint));
    CHECK_THROWS(build_stationary_state(V3q2, {2, 0, 0}, StateMode::endpoint));
    const StationaryState s = build_stationary_state(V3, {2, 0, 0}, StateMode::endpoint);
    CHECK(s.neumann.norm_used == NormKind::Xstar);
    CHECK(s.neumann.converged);
    const StationaryState sn = build_stationary_state(V3, {2, 0, 0}, StateMode::nonendpoint);
    CHECK(sn.neumann.norm_used == NormKind::Lp);
}

TEST_CASE("decay study: ladder rows, negative slope, convergence flags") {
    const Grid g = make_grid(2, 64, 32.0);
    const Potential V = demo_potential(g, 0.5);
    std::vector<std::array<int, 3>> ladder;
    for (int m : {2, 4, 8, 16}) ladder.push_back({m, 0, 0});
    const DecayReport rep = decay_study(V, StateMode::nonendpoint, ladder);
    REQUIRE(rep.rows.size() == 4);
    CHECK(rep.all_converged);
    REQUIRE(rep.slope_defined);
    for (std::size_t j = 0; j < rep.rows.size(); ++j) {
        CHECK(rep.rows[j].converged);
        CHECK(rep.rows[j].lambda ==
              doctest::Approx(g.freq_step() * (2 << j)).epsilon(1e-12));
    }
    // The corrector is Born-dominated for this small potential, so its norm
    // must fall along the ladder and the log-log fit must be negative.
    CHECK(rep.rows.back().corrector_norm < rep.rows.front().corrector_norm);
    CHECK(rep.slope < 0.0);
}

TEST_CASE("decay study aborts the ladder at a non-convergent rung") {
    // First rung sits at a tiny lambda where the contraction exceeds one for
    // a strong potential; the report must stop there and say so.
    const Grid g = make_grid(2, 64, 32.0);
    const Potential V = demo_potential(g, 4.0);
    std::vector<std::array<int, 3>> ladder;
    for (int m : {1, 2, 4}) ladder.push_back({m, 0, 0});
    const DecayReport rep = decay_study(V, StateMode::nonendpoint, ladder, 1e-10);
    CHECK_FALSE(rep.all_converged);
    CHECK(rep.rows.size() < 3);
}
