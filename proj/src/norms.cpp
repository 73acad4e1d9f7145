//==============================================================================
//  norms.cpp -- exponent tables, Lebesgue / mixed / endpoint norms.
//==============================================================================
#include "schrec/norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "schrec/potential.hpp"

namespace schrec {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

ExponentTable exponents(int n, Rational q) {
    if (n != 2 && n != 3)
        throw std::invalid_argument("exponents: dimension must be 2 or 3");
    // Admissibility floor: q > 1 if n = 2 and q >= n/2 if n >= 3.
    if (n == 2 && q <= Rational(1))
        throw std::invalid_argument(
            "exponents: inadmissible q (require q > 1 if n = 2 and q >= n/2 if n >= 3)");
    if (n >= 3 && q < Rational(n, 2))
        throw std::invalid_argument(
            "exponents: inadmissible q (require q > 1 if n = 2 and q >= n/2 if n >= 3)");

    const Rational upper(n + 1, 2);
    if (q > upper) q = upper;  // larger q only strengthens the hypothesis

    ExponentTable t;
    t.n = n;
    t.q = q;
    t.q_n = Rational(2 * (n + 1), n - 1);
    t.p_n = n >= 3 ? Rational(2 * n, n - 2) : Rational::infinity();
    t.p = Rational(2) * q / (q - Rational(1));
    // 2/r = n/2 - n/p
    const Rational two_over_r = Rational(n, 2) - Rational(n) / t.p;
    if (two_over_r.num == 0)
        throw std::invalid_argument("exponents: r would be infinite");
    t.r = Rational(2) / two_over_r;

    if (t.p < Rational(2) || t.r < Rational(2))
        throw std::invalid_argument("exponents: derived pair leaves [2, inf]");
    if (n == 2 && t.r == Rational(2) && t.p.is_infinite())
        throw std::invalid_argument("exponents: excluded pair (n, r, p) = (2, 2, inf)");
    return t;
}

double lp_norm(const Field& f, double p) {
    if (f.rep != Rep::spatial)
        throw std::invalid_argument("lp_norm: field must be spatial");
    if (!(p >= 1.0))
        throw std::invalid_argument("lp_norm: p must be >= 1");
    if (p == kInf) {
        double m = 0.0;
        for (const auto& v : f.values) m = std::max(m, std::abs(v));
        return m;
    }
    const double w = std::pow(f.grid.h(), f.grid.n);
    double s = 0.0;
    if (p == 2.0) {
        for (const auto& v : f.values) s += std::norm(v);
    } else if (p == 1.0) {
        for (const auto& v : f.values) s += std::abs(v);
    } else {
        for (const auto& v : f.values) s += std::pow(std::abs(v), p);
    }
    return std::pow(w * s, 1.0 / p);
}

double lp_norm(const Field& f, const Rational& p) {
    return lp_norm(f, p.value());
}

double spectral_l2_norm(const Field& F) {
    if (F.rep != Rep::spectral)
        throw std::invalid_argument("spectral_l2_norm: field must be spectral");
    double s = 0.0;
    for (const auto& v : F.values) s += std::norm(v);
    const double w = std::pow(2.0 * kPi / F.grid.L, F.grid.n);
    return std::sqrt(w * s);
}

double mixed_norm(const Trajectory& u, double r, double p) {
    if (u.frames.empty())
        throw std::invalid_argument("mixed_norm: empty trajectory");
    if (!(r >= 1.0))
        throw std::invalid_argument("mixed_norm: r must be >= 1");
    if (r == kInf) {
        double m = 0.0;
        for (const auto& fr : u.frames) m = std::max(m, lp_norm(fr, p));
        return m;
    }
    if (u.frames.size() == 1) return 0.0;  // degenerate interval, zero measure
    std::vector<double> a(u.frames.size());
    for (std::size_t i = 0; i < u.frames.size(); ++i)
        a[i] = std::pow(lp_norm(u.frames[i], p), r);
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < a.size(); ++i)
        s += 0.5 * (u.times[i + 1] - u.times[i]) * (a[i] + a[i + 1]);
    return std::pow(s, 1.0 / r);
}

double intersection_norm(const Field& f, double p1, double p2) {
    return std::max(lp_norm(f, p1), lp_norm(f, p2));
}

double xstar_norm(const Field& f, double lambda, int n) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("xstar_norm: lambda must be positive");
    const ExponentTable t = exponents(n, Rational(n + 1, 2));
    const double a = std::pow(lambda, 1.0 / (n + 1)) * lp_norm(f, t.q_n);
    const double b = lp_norm(f, t.p_n);
    return std::max(a, b);
}

double x_norm_upper(const Field& f, double lambda, int n, int levels) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("x_norm_upper: lambda must be positive");
    if (levels < 1)
        throw std::invalid_argument("x_norm_upper: levels must be >= 1");
    const ExponentTable t = exponents(n, Rational(n + 1, 2));
    const double qd = conjugate_exponent(t.q_n).value();  // q_n'
    const double pd = conjugate_exponent(t.p_n).value();  // p_n'
    const double lam_w = std::pow(lambda, -1.0 / (n + 1));

    double amax = 0.0;
    for (const auto& v : f.values) amax = std::max(amax, std::abs(v));
    if (amax == 0.0) return 0.0;

    const double w = std::pow(f.grid.h(), f.grid.n);
    auto objective = [&](double tau) {
        // g = f 1_{|f| > tau}, h = f 1_{|f| <= tau}
        double sg = 0.0, sh = 0.0;
        for (const auto& v : f.values) {
            const double a = std::abs(v);
            if (a > tau)
                sg += std::pow(a, qd);
            else if (a > 0.0)
                sh += std::pow(a, pd);
        }
        return lam_w * std::pow(w * sg, 1.0 / qd) + std::pow(w * sh, 1.0 / pd);
    };

    // Extremes: g = f (tau just below the smallest magnitude -> tau = 0
    // captures everything nonzero into g) and h = f (tau = amax).
    double best = std::min(lam_w * lp_norm(f, qd), lp_norm(f, pd));
    double tau = amax;
    for (int j = 1; j <= levels; ++j) {
        tau *= 0.5;
        best = std::min(best, objective(tau));
    }
    return best;
}

//---------------------------------------------------------------------------
//  Potential
//---------------------------------------------------------------------------
Potential make_potential(const Field& v, Rational q) {
    if (v.rep != Rep::spatial)
        throw std::invalid_argument("make_potential: field must be spatial");
    const Grid& g = v.grid;

    // Support rule: outside the central half-box, samples must be negligible.
    double amax = 0.0;
    for (const auto& val : v.values) amax = std::max(amax, std::abs(val));
    const int lo = g.N / 4, hi = 3 * g.N / 4;  // x in [-L/4, L/4) per axis
    const double tol = 1e-12 * amax;
    const int N = g.N;
    auto inside = [&](int j) { return j >= lo && j < hi; };
    std::size_t idx = 0;
    if (g.n == 2) {
        for (int j0 = 0; j0 < N; ++j0)
            for (int j1 = 0; j1 < N; ++j1, ++idx)
                if (!inside(j0) || !inside(j1))
                    if (std::abs(v.values[idx]) > tol)
                        throw std::invalid_argument(
                            "make_potential: support leaks outside the central half-box");
    } else {
        for (int j0 = 0; j0 < N; ++j0)
            for (int j1 = 0; j1 < N; ++j1)
                for (int j2 = 0; j2 < N; ++j2, ++idx)
                    if (!inside(j0) || !inside(j1) || !inside(j2))
                        if (std::abs(v.values[idx]) > tol)
                            throw std::invalid_argument(
                                "make_potential: support leaks outside the central half-box");
    }

    Potential out;
    out.field = v;
    out.q = q;
    out.table = exponents(g.n, q);
    out.norm_l1 = lp_norm(v, 1.0);
    out.norm_lq = lp_norm(v, out.table.q);
    out.norm_lp_dual = lp_norm(v, conjugate_exponent(out.table.p));
    out.norm_ln2 = lp_norm(v, 0.5 * g.n);
    out.norm_lnp12 = lp_norm(v, 0.5 * (g.n + 1));
    return out;
}

Potential conj_potential(const Potential& v) {
    Potential out = v;
    out.field = conj_field(v.field);
    return out;
}

double v_lambda_norm(const Potential& v, double lambda) {
    const Grid& g = v.grid();
    if (g.n < 3)
        throw std::invalid_argument("v_lambda_norm: requires n >= 3");
    if (!(lambda > 0.0))
        throw std::invalid_argument("v_lambda_norm: lambda must be positive");
    if (v.norm_ln2 == 0.0) return 0.0;  // zero potential, by convention

    const double cut = lambda * v.norm_ln2;
    const double pe = 0.5 * g.n;        // n/2
    const double pc = 0.5 * (g.n + 1);  // (n+1)/2
    double se = 0.0, sc = 0.0;
    for (const auto& val : v.field.values) {
        const double a = std::abs(val);
        if (a > cut)
            se += std::pow(a, pe);
        else if (a > 0.0)
            sc += std::pow(a, pc);
    }
    const double w = std::pow(g.h(), g.n);
    return std::pow(w * se, 1.0 / pe) +
           std::pow(lambda, -2.0 / (g.n + 1)) * std::pow(w * sc, 1.0 / pc);
}

}  // namespace schrec
