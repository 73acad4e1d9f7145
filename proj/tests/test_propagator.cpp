//==============================================================================
//  test_propagator.cpp -- Strang-split Schrödinger evolution.
//
//  Oracles used here are closed-form solutions of i d/dt u = -Lap u + V u:
//    * V = 0, lattice mode exp(-i kappa.x): u(T) = exp(-i |kappa|^2 T) u(0)
//      (the kinetic half of the splitting is exact per mode, so this holds
//      to roundoff at ANY step count),
//    * V = 0, Gaussian u(0) = exp(-|x|^2/(2 sigma^2)):
//      u(T) = sigma^n (sigma^2 + 2iT)^{-n/2} exp(-|x|^2 / (2(sigma^2+2iT))),
//      by closing the free propagator on the Fourier side,
//    * real V: the flow is a composition of unitaries, so the L^2 mass is
//      conserved to roundoff regardless of the time step,
//    * global error of Strang splitting is O(tau^2): quadrupling the step
//      count cuts a reference gap by ~16.
//==============================================================================
#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "schrec/grid.hpp"
#include "schrec/potential.hpp"
#include "schrec/propagator.hpp"
#include "schrec/rng.hpp"
#include "schrec/stationary.hpp"
#include "schrec/trajectory.hpp"

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

Field random_field(const Grid& g, std::uint64_t seed) {
    CounterRng rng(seed, 0);
    Field f;
    f.grid = g;
    f.rep = Rep::spatial;
    f.values.resize(g.size());
    for (auto& v : f.values) v = rng.next_complex_gaussian();
    return f;
}

Potential zero_potential(const Grid& g) {
    return make_potential(gaussian_field(g, 0.0, 1.0), Rational(3, 2));
}

}  // namespace

TEST_CASE("free evolution of a lattice mode is an exact phase at any step count") {
    const Grid g = make_grid(2, 32, 16.0);
    const Potential V0 = zero_potential(g);
    const std::array<int, 3> k = {3, -2, 0};
    const double kappa2 = g.freq_step() * g.freq_step() * (3 * 3 + 2 * 2);
    const double T = 0.37;
    const Field u0 = plane_wave(g, k);
    for (int steps : {1, 7}) {
        const Field uT = initial_to_final(V0, u0, T, steps);
        // phase convention: i u_t = -Lap u, so u(T) = exp(-i kappa^2 T) u(0).
        const Field expect = scale(u0, std::polar(1.0, -kappa2 * T));
        CHECK(rel_l2_diff(uT, expect) <= 1e-12);
    }
}

TEST_CASE("free Gaussian spreading matches the closed form") {
    const Grid g = make_grid(2, 128, 16.0);
    const Potential V0 = zero_potential(g);
    const double sigma = 1.0, T = 0.25;
    const Field u0 = gaussian_field(g, 1.0, sigma);
    const Field uT = initial_to_final(V0, u0, T, 64);
    const Complex s2(sigma * sigma, 2.0 * T);
    const Complex pref = std::pow(sigma, 2.0) / s2;  // sigma^n (sigma^2+2iT)^{-n/2}, n = 2
    const Field expect = sample_spatial(g, [&](double x, double y, double) {
        return pref * std::exp(-(x * x + y * y) / (2.0 * s2));
    });
    CHECK(rel_l2_diff(uT, expect) <= 1e-8);
}

TEST_CASE("real potentials evolve unitarily") {
    const Grid g = make_grid(2, 64, 32.0);
    const Potential V = make_potential(gaussian_field(g, 0.8, 1.0), Rational(3, 2));
    CounterRng rng(301, 0);
    for (int trial = 0; trial < 3; ++trial) {
        const Field u0 = random_field(g, 310 + trial);
        const double mass0 = l2(u0);
        const Field uT = initial_to_final(V, u0, 0.5, 100);
        CHECK(std::abs(l2(uT) - mass0) <= 1e-12 * mass0);
    }
}

TEST_CASE("T = 0 is the identity and negative inputs are rejected") {
    const Grid g = make_grid(2, 32, 32.0);
    const Potential V = make_potential(gaussian_field(g, 0.5, 1.0), Rational(3, 2));
    const Field u0 = random_field(g, 320);
    CHECK(rel_l2_diff(initial_to_final(V, u0, 0.0, 1), u0) == 0.0);
    CHECK_THROWS(initial_to_final(V, u0, -0.5, 16));
    CHECK_THROWS(initial_to_final(V, u0, 0.5, 0));
}

TEST_CASE("evolve records frame times and honors the keep stride") {
    const Grid g = make_grid(2, 32, 32.0);
    const Potential V = make_potential(gaussian_field(g, 0.5, 1.0), Rational(3, 2));
    const Field u0 = gaussian_field(g, 1.0, 1.0);
    const Trajectory tr = evolve(V, u0, 0.5, 8, 2, false);
    // Kept: t=0, every 2nd step, and the endpoint: j = 0,2,4,6,8.
    REQUIRE(tr.times.size() == 5);
    REQUIRE(tr.frames.size() == 5);
    for (std::size_t i = 0; i < tr.times.size(); ++i)
        CHECK(tr.times[i] == doctest::Approx(0.5 * (2.0 * i) / 8.0).epsilon(1e-13));
    CHECK(rel_l2_diff(tr.frames.front(), u0) == 0.0);
    const Trajectory ends = evolve(V, u0, 0.5, 8, 0, false);
    CHECK(ends.frames.size() == 2);
    CHECK(rel_l2_diff(ends.frames.back(), tr.frames.back()) == 0.0);
}

TEST_CASE("final_value_solve inverts the forward flow") {
    // Marching u0 forward and then solving the final-value problem from the
    // endpoint with the same step count must reproduce u0: the inverse Strang
    // step is the exact algebraic inverse of the forward one.
    const Grid g = make_grid(2, 64, 32.0);
    const Potential V = make_potential(gaussian_field(g, 0.6, 1.0), Rational(3, 2));
    const Field u0 = random_field(g, 330);
    const int steps = 32;
    const double T = 0.4;
    const Field uT = initial_to_final(V, u0, T, steps);
    const Trajectory back = final_value_solve(V, uT, T, steps, 1, false);
    REQUIRE(back.frames.size() == static_cast<std::size_t>(steps) + 1);
    // Trajectory is stored forward in time: frame 0 at t=0, last at t=T.
    CHECK(back.times.front() == doctest::Approx(0.0));
    CHECK(back.times.back() == doctest::Approx(T));
    CHECK(rel_l2_diff(back.frames.back(), uT) <= 1e-13);
    CHECK(rel_l2_diff(back.frames.front(), u0) <= 1e-12);
}

TEST_CASE("splitting error shrinks at second order") {
    const Grid g = make_grid(2, 64, 32.0);
    const Potential V = make_potential(gaussian_field(g, 0.8, 1.0), Rational(3, 2));
    const Field u0 = gaussian_field(g, 1.0, 1.2);
    const double T = 0.5;
    const Field ref = initial_to_final(V, u0, T, 4096);
    const double e1 = rel_l2_diff(initial_to_final(V, u0, T, 64), ref);
    const double e2 = rel_l2_diff(initial_to_final(V, u0, T, 256), ref);
    const double ratio = e1 / e2;
    // Global order 2: x4 steps => error / 16, modulo the reference floor.
    CHECK(ratio >= 12.0);
    CHECK(ratio <= 20.0);
}

TEST_CASE("recommended_steps scales with the stiffness bound") {
    const Grid g = make_grid(2, 64, 32.0);
    const Potential V = make_potential(gaussian_field(g, 0.5, 1.0), Rational(3, 2));
    const int base = recommended_steps(V, 0.5);
    CHECK(base >= 1);
    CHECK(recommended_steps(V, 1.0) >= base);
    // Kinetic bound dominates here: steps ~ T ximax^2 / (pi/4).
    const double ximax2 = 2.0 * g.nyquist() * g.nyquist();
    CHECK(base >= static_cast<int>(0.5 * ximax2 / (3.14159265358979323846 / 4.0)) - 1);
}

TEST_CASE("stationary trajectory carries the pure phase exp(-i lambda^2 t)") {
    const Grid g = make_grid(2, 64, 32.0);
    const Potential V = make_potential(gaussian_field(g, 0.4, 1.0), Rational(3, 2));
    const StationaryState s = build_stationary_state(V, {4, 0, 0}, StateMode::nonendpoint);
    const double T = 0.5;
    const Trajectory tr = stationary_trajectory(s, T, 5);
    REQUIRE(tr.frames.size() == 5);
    const Field w = add(s.w0, s.wcor);
    for (std::size_t j = 0; j < tr.frames.size(); ++j) {
        const Field expect = scale(w, std::polar(1.0, -s.lambda * s.lambda * tr.times[j]));
        CHECK(rel_l2_diff(tr.frames[j], expect) <= 1e-12);
    }
    CHECK(tr.times.front() == doctest::Approx(0.0));
    CHECK(tr.times.back() == doctest::Approx(T));
}
