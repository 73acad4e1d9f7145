//==============================================================================
//  test_norms.cpp -- Exponent arithmetic and norm functionals.
//
//  Exponent relations checked in exact rational arithmetic:
//      1/q_n = 1/2 - 1/(n+1)        (q_2 = 6, q_3 = 4)
//      1/p_n = 1/2 - 1/n            (p_2 = inf, p_3 = 6)
//      1/q + 2/p = 1                (Hölder partner of the potential)
//      2/r + n/p = n/2              (Strichartz partner)
//      delta_nonendpoint = 2 - n/q, delta_endpoint = 1/(n+1).
//  Norm oracles are closed-form: constants and indicator fields have exact
//  L^p norms under the h^n quadrature, and trapezoid-in-time mixed norms of
//  time-constant trajectories factor as T^{1/r} ||f||_p.
//==============================================================================
#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "schrec/grid.hpp"
#include "schrec/norms.hpp"
#include "schrec/potential.hpp"
#include "schrec/rational.hpp"
#include "schrec/rng.hpp"
#include "schrec/trajectory.hpp"

using namespace schrec;

namespace {

Field random_field(const Grid& g, std::uint64_t seed) {
    CounterRng rng(seed, 0);
    Field f;
    f.grid = g;
    f.rep = Rep::spatial;
    f.values.resize(g.size());
    for (auto& v : f.values) v = rng.next_complex_gaussian();
    return f;
}

Field constant_field(const Grid& g, Complex c) {
    Field f;
    f.grid = g;
    f.rep = Rep::spatial;
    f.values.assign(g.size(), c);
    return f;
}

}  // namespace

TEST_CASE("rational arithmetic: normalization, conjugates, parsing") {
    CHECK(Rational(4, 6) == Rational(2, 3));
    CHECK(Rational(-3, -6) == Rational(1, 2));
    CHECK((Rational(1, 2) + Rational(1, 3)) == Rational(5, 6));
    CHECK((Rational(3, 2) * Rational(4, 3)) == Rational(2));
    CHECK(Rational::infinity().is_infinite());
    CHECK(conjugate_exponent(Rational(3, 2)) == Rational(3));
    CHECK(conjugate_exponent(Rational(1)).is_infinite());
    CHECK(conjugate_exponent(Rational::infinity()) == Rational(1));
    CHECK(conjugate_exponent(Rational(2)) == Rational(2));
    CHECK(parse_rational("3/2") == Rational(3, 2));
    CHECK(parse_rational("1.5") == Rational(3, 2));
    CHECK(parse_rational("6") == Rational(6));
    CHECK(parse_rational("inf").is_infinite());
    CHECK_THROWS(parse_rational(""));
    CHECK_THROWS(parse_rational("x/y"));
}

TEST_CASE("exponent table: n = 3, q = 3/2 worked example") {
    const ExponentTable t = exponents(3, Rational(3, 2));
    CHECK(t.q_n == Rational(4));
    CHECK(t.p_n == Rational(6));
    CHECK(t.q == Rational(3, 2));
    CHECK(t.p == Rational(6));   // 2/3 + 2/6 = 1
    CHECK(t.r == Rational(2));   // 2/2 + 3/6 = 3/2
    // q = n/2 sits exactly at the endpoint: zero nonendpoint decay.
    CHECK(t.decay_nonendpoint() == Rational(0));
    CHECK(t.decay_endpoint() == Rational(1, 4));
}

TEST_CASE("exponent table: n = 2 with the upper clamp") {
    // q = 2 exceeds (n+1)/2 = 3/2 and clamps down; then p = 6 and r = 3.
    const ExponentTable t = exponents(2, Rational(2));
    CHECK(t.q_n == Rational(6));
    CHECK(t.p_n.is_infinite());
    CHECK(t.q == Rational(3, 2));
    CHECK(t.p == Rational(6));
    CHECK(t.r == Rational(3));
    CHECK(t.decay_nonendpoint() == Rational(2, 3));  // 2 - 2/(3/2)
    CHECK(t.decay_endpoint() == Rational(1, 3));
}

TEST_CASE("exponent table rejects inadmissible q") {
    CHECK_THROWS(exponents(2, Rational(1)));      // q <= 1 in two dimensions
    CHECK_THROWS(exponents(2, Rational(9, 10)));
    CHECK_THROWS(exponents(3, Rational(7, 5)));   // below n/2 = 3/2
    CHECK_NOTHROW(exponents(3, Rational(3, 2)));  // the endpoint itself is legal
    CHECK_THROWS(exponents(4, Rational(2)));      // dimension out of range
}

TEST_CASE("lp_norm closed forms: constants, indicators, plane waves") {
    const Grid g = make_grid(2, 32, 8.0);
    const Field c = constant_field(g, Complex(0.0, -1.5));
    // ||c||_p = |c| L^{n/p} and ||c||_inf = |c|.
    CHECK(lp_norm(c, 2.0) == doctest::Approx(1.5 * 8.0).epsilon(1e-12));
    CHECK(lp_norm(c, 4.0) == doctest::Approx(1.5 * std::pow(8.0, 0.5)).epsilon(1e-12));
    CHECK(lp_norm(c, std::numeric_limits<double>::infinity()) == doctest::Approx(1.5));
    CHECK(lp_norm(c, Rational::infinity()) == doctest::Approx(1.5));
    CHECK(lp_norm(c, Rational(3, 2)) == doctest::Approx(lp_norm(c, 1.5)).epsilon(1e-13));

    Field ind = constant_field(g, Complex(0.0, 0.0));
    ind.values[5] = Complex(2.0, 0.0);
    ind.values[77] = Complex(0.0, 2.0);
    ind.values[901] = Complex(2.0, 0.0);
    // Three sites of modulus 2: ||f||_p = 2 (3 h^n)^{1/p}.
    const double h2 = g.h() * g.h();
    for (double p : {1.0, 1.5, 2.0, 6.0})
        CHECK(lp_norm(ind, p) == doctest::Approx(2.0 * std::pow(3.0 * h2, 1.0 / p)).epsilon(1e-12));

    const Field pw = plane_wave(g, {3, -1, 0});
    CHECK(lp_norm(pw, 6.0) == doctest::Approx(std::pow(8.0, 2.0 / 6.0)).epsilon(1e-12));
}

TEST_CASE("lp_norm interpolation and Hölder inequalities on random data") {
    const Grid g = make_grid(2, 32, 8.0);
    const Field f = random_field(g, 31);
    const Field gg = random_field(g, 32);
    // Hölder: h^n sum |f g| <= ||f||_3 ||g||_{3/2}.
    double l1fg = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i)
        l1fg += std::abs(f.values[i] * gg.values[i]);
    l1fg *= g.h() * g.h();
    CHECK(l1fg <= lp_norm(f, 3.0) * lp_norm(gg, 1.5) * (1.0 + 1e-12));
    // Triangle inequality.
    CHECK(lp_norm(add(f, gg), 2.5) <= (lp_norm(f, 2.5) + lp_norm(gg, 2.5)) * (1.0 + 1e-12));
    // On a probability-normalized box, p -> ||f||_p is non-decreasing after
    // dividing by L^{n/p}; equivalently ||f||_p L^{-n/p} is monotone.
    const double n2 = lp_norm(f, 2.0) * std::pow(8.0, -2.0 / 2.0);
    const double n4 = lp_norm(f, 4.0) * std::pow(8.0, -2.0 / 4.0);
    const double ninf = lp_norm(f, std::numeric_limits<double>::infinity());
    CHECK(n2 <= n4 * (1.0 + 1e-12));
    CHECK(n4 <= ninf * (1.0 + 1e-12));
}

TEST_CASE("spectral_l2_norm is the Parseval partner of lp_norm(., 2)") {
    const Grid g = make_grid(3, 16, 9.0);
    const Field f = random_field(g, 41);
    CHECK(spectral_l2_norm(fourier(f)) == doctest::Approx(lp_norm(f, 2.0)).epsilon(1e-10));
}

TEST_CASE("mixed_norm of a time-constant trajectory factors exactly") {
    const Grid g = make_grid(2, 16, 4.0);
    const Field f = random_field(g, 51);
    Trajectory u;
    u.grid = g;
    const int M = 8;
    const double T = 0.75;
    for (int j = 0; j <= M; ++j) {
        u.times.push_back(T * j / M);
        u.frames.push_back(f);
    }
    // Trapezoid of a constant integrand is exact: T^{1/r} ||f||_p.
    for (double r : {1.0, 2.0, 3.0})
        for (double p : {2.0, 6.0})
            CHECK(mixed_norm(u, r, p) ==
                  doctest::Approx(std::pow(T, 1.0 / r) * lp_norm(f, p)).epsilon(1e-12));
    CHECK(mixed_norm(u, std::numeric_limits<double>::infinity(), 2.0) ==
          doctest::Approx(lp_norm(f, 2.0)).epsilon(1e-12));
}

TEST_CASE("mixed_norm trapezoid weights match a hand-computed ramp") {
    const Grid g = make_grid(2, 16, 4.0);
    const Field f = constant_field(g, Complex(1.0, 0.0));  // ||f||_2 = L = 4
    Trajectory u;
    u.grid = g;
    u.times = {0.0, 1.0, 2.0};
    u.frames = {scale(f, Complex(0.0, 0.0)), scale(f, Complex(1.0, 0.0)),
                scale(f, Complex(2.0, 0.0))};
    // integrand a(t)^2 with a = {0, 4, 8}: trapezoid = (0+16)/2 + (16+64)/2 = 48.
    CHECK(mixed_norm(u, 2.0, 2.0) == doctest::Approx(std::sqrt(48.0)).epsilon(1e-12));
    // Degenerate single-frame trajectory has zero time measure.
    Trajectory one;
    one.grid = g;
    one.times = {0.0};
    one.frames = {f};
    CHECK(mixed_norm(one, 2.0, 2.0) == 0.0);
}

TEST_CASE("intersection_norm is the max of the two component norms") {
    const Grid g = make_grid(2, 32, 8.0);
    const Field f = gaussian_field(g, 1.0, 0.8);
    CHECK(intersection_norm(f, 2.0, 6.0) ==
          doctest::Approx(std::max(lp_norm(f, 2.0), lp_norm(f, 6.0))).epsilon(1e-13));
}

TEST_CASE("xstar_norm: definition and monotonicity in lambda") {
    const Grid g = make_grid(3, 16, 8.0);
    const Field f = random_field(g, 61);
    const double l4 = lp_norm(f, 4.0);  // q_3 = 4
    const double l6 = lp_norm(f, 6.0);  // p_3 = 6
    for (double lam : {0.5, 1.0, 4.0}) {
        const double expect = std::max(std::pow(lam, 0.25) * l4, l6);
        CHECK(xstar_norm(f, lam, 3) == doctest::Approx(expect).epsilon(1e-12));
    }
    CHECK(xstar_norm(f, 1.0, 3) <= xstar_norm(f, 2.0, 3));
    CHECK(xstar_norm(f, 2.0, 3) <= xstar_norm(f, 8.0, 3));
}

TEST_CASE("x_norm_upper: extremes, monotonicity in levels, duality sandwich") {
    const Grid g = make_grid(3, 16, 8.0);
    const Field f = random_field(g, 71);
    const double lam = 2.0;
    // The candidate set contains the two extreme splittings, so the bound
    // never exceeds either pure-space norm (q_3' = 4/3, p_3' = 6/5).
    const double pure_g = std::pow(lam, -0.25) * lp_norm(f, 4.0 / 3.0);
    const double pure_h = lp_norm(f, 6.0 / 5.0);
    const double b4 = x_norm_upper(f, lam, 3, 4);
    CHECK(b4 <= std::min(pure_g, pure_h) * (1.0 + 1e-12));
    // More thresholds never hurt: the bound is monotone non-increasing.
    CHECK(x_norm_upper(f, lam, 3, 8) <= b4 * (1.0 + 1e-12));
    CHECK(x_norm_upper(f, lam, 3, 16) <= x_norm_upper(f, lam, 3, 8) * (1.0 + 1e-12));
    // Duality: |<f, phi>| <= ||f||_X ||phi||_{X*} and x_norm_upper >= ||f||_X,
    // so the computable pair must still dominate the pairing.
    const Field phi = random_field(g, 72);
    const Complex pairing = inner(f, phi);
    CHECK(std::abs(pairing) <=
          x_norm_upper(f, lam, 3, 12) * xstar_norm(phi, lam, 3) * (1.0 + 1e-10));
}

TEST_CASE("make_potential enforces the half-box support rule") {
    const Grid g = make_grid(2, 64, 32.0);
    // sigma = 1: relative size at the quarter-box boundary is exp(-32) ~ 1e-14.
    CHECK_NOTHROW(make_potential(gaussian_field(g, 0.5, 1.0), Rational(3, 2)));
    // sigma = 4: exp(-2) ~ 0.14 of the peak leaks outside; must be rejected.
    CHECK_THROWS(make_potential(gaussian_field(g, 0.5, 4.0), Rational(3, 2)));
    // The zero potential is legal (tolerance scales with max|V| = 0).
    CHECK_NOTHROW(make_potential(gaussian_field(g, 0.0, 1.0), Rational(3, 2)));
}

TEST_CASE("make_potential caches the advertised norms") {
    // L = 32 sigma keeps the quarter-box leak at exp(-32); h = 1 keeps the
    // lattice quadrature of the analytic integral below 1e-8 relative.
    const Grid g = make_grid(3, 32, 32.0);
    const Potential V = make_potential(gaussian_field(g, 0.4, 1.0), Rational(3, 2));
    CHECK(V.norm_l1 == doctest::Approx(lp_norm(V.field, 1.0)).epsilon(1e-12));
    CHECK(V.norm_lq == doctest::Approx(lp_norm(V.field, 1.5)).epsilon(1e-12));
    CHECK(V.norm_ln2 == doctest::Approx(lp_norm(V.field, 1.5)).epsilon(1e-12));
    CHECK(V.norm_lnp12 == doctest::Approx(lp_norm(V.field, 2.0)).epsilon(1e-12));
    // p' with p = 6 is 6/5.
    CHECK(V.norm_lp_dual == doctest::Approx(lp_norm(V.field, 1.2)).epsilon(1e-12));
    // Analytic cross-check of the L^1 norm of the Gaussian:
    // 0.4 (2 pi)^{3/2} on this box, up to exp(-32)-scale truncation.
    CHECK(V.norm_l1 == doctest::Approx(0.4 * std::pow(2.0 * 3.14159265358979323846, 1.5))
                           .epsilon(1e-7));
    const Potential Vc = conj_potential(V);
    CHECK(Vc.norm_l1 == doctest::Approx(V.norm_l1).epsilon(1e-14));
}

TEST_CASE("v_lambda_norm: domain guards and the two pure regimes") {
    const Grid g2 = make_grid(2, 16, 32.0);
    const Grid g3 = make_grid(3, 16, 32.0);
    const Potential V2 = make_potential(gaussian_field(g2, 0.3, 1.0), Rational(3, 2));
    const Potential V3 = make_potential(gaussian_field(g3, 0.3, 1.0), Rational(3, 2));
    CHECK_THROWS(v_lambda_norm(V2, 1.0));  // defined for n >= 3 only
    CHECK_THROWS(v_lambda_norm(V3, 0.0));
    CHECK(v_lambda_norm(make_potential(gaussian_field(g3, 0.0, 1.0), Rational(3, 2)), 1.0) == 0.0);

    // Pure tail regime: every sample of a small Gaussian sits below the cut
    // lambda ||V||_{3/2} once lambda >= max|V| / ||V||_{3/2}, and the value
    // collapses to lambda^{-1/2} ||V||_2.
    const double lam_hi = 2.0 * 0.3 / V3.norm_ln2;
    CHECK(v_lambda_norm(V3, lam_hi) ==
          doctest::Approx(std::pow(lam_hi, -0.5) * lp_norm(V3.field, 2.0)).epsilon(1e-12));

    // Pure head regime: an indicator potential is all-or-nothing, so below
    // the threshold the value is exactly ||V||_{3/2}.
    Field ind = gaussian_field(g3, 0.0, 1.0);
    const int N = g3.N;
    for (int j0 = N / 2 - 1; j0 <= N / 2; ++j0)
        for (int j1 = N / 2 - 1; j1 <= N / 2; ++j1)
            for (int j2 = N / 2 - 1; j2 <= N / 2; ++j2)
                ind.values[(static_cast<std::size_t>(j0) * N + j1) * N + j2] = Complex(1.0, 0.0);
    const Potential Vi = make_potential(ind, Rational(3, 2));
    const double lam_lo = 0.5 / Vi.norm_ln2;  // cut = 0.5 < 1 = sample value
    CHECK(v_lambda_norm(Vi, lam_lo) == doctest::Approx(Vi.norm_ln2).epsilon(1e-12));
}

TEST_CASE("v_lambda_norm decays along dyadic ladders at the predicted floor") {
    // For a bounded potential the head term dies at finite lambda and the
    // tail term scales exactly as lambda^{-2/(n+1)} = lambda^{-1/2} in three
    // dimensions.  A x64 ladder can therefore shrink the value only to
    // 64^{-1/2} = 0.125 of the start; reaching below 0.05 demands a x512
    // ladder (512^{-1/2} = 0.0442).
    const Grid g = make_grid(3, 16, 64.0);
    const Potential V = make_potential(gaussian_field(g, 1.0, 2.0), Rational(3, 2));
    const double lam0 = 1.0;

    std::vector<double> ladder64;
    for (int j = 0; j <= 6; ++j) ladder64.push_back(v_lambda_norm(V, lam0 * std::pow(2.0, j)));
    for (std::size_t j = 1; j < ladder64.size(); ++j) CHECK(ladder64[j] < ladder64[j - 1]);
    CHECK(ladder64.back() < ladder64.front());

    const double top = v_lambda_norm(V, lam0 * 512.0);
    CHECK(top < 0.05 * ladder64.front());
    CHECK(top == doctest::Approx(std::pow(512.0, -0.5) * ladder64.front()).epsilon(1e-6));
}
