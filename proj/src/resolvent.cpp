//==============================================================================
//  resolvent.cpp -- limiting-absorption multiplier, bump projections, ratios.
//==============================================================================
#include "schrec/resolvent.hpp"

#include <cmath>
#include <stdexcept>

#include "schrec/norms.hpp"

namespace schrec {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

ResolventConfig make_resolvent_config(const Grid& g, double lambda, double epsilon) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("resolvent: lambda must be positive");
    if (epsilon < 0.0) epsilon = lambda * (2.0 * kPi / g.L);
    if (!(epsilon > 0.0))
        throw std::invalid_argument("resolvent: epsilon must be positive");
    return ResolventConfig{lambda, epsilon, g};
}

Field apply_resolvent(const Field& f, const ResolventConfig& cfg) {
    if (!(f.grid == cfg.grid))
        throw std::invalid_argument("apply_resolvent: grid mismatch");
    if (!(cfg.lambda > 0.0) || !(cfg.epsilon > 0.0))
        throw std::invalid_argument("apply_resolvent: invalid config");
    const auto& xi2 = xi2_table(f.grid);
    const auto& mask = nyquist_mask(f.grid);
    const double l2 = cfg.lambda * cfg.lambda;
    const Complex iel(0.0, cfg.epsilon * cfg.lambda);
    std::vector<Complex> m(xi2.size());
    for (std::size_t i = 0; i < m.size(); ++i)
        m[i] = mask[i] / (l2 - xi2[i] + iel);
    return apply_spectral_multiplier(f, m);
}

double lp_bump(double r) {
    r = std::abs(r);
    if (r <= 2.0) return 1.0;
    if (r >= 4.0) return 0.0;
    const double t = 0.5 * (r - 2.0);  // in (0, 1)
    const double a = std::exp(-1.0 / t);
    const double b = std::exp(-1.0 / (1.0 - t));
    return 1.0 - a / (a + b);
}

namespace {

Field bump_multiplier(const Field& f, double scale_lo, double scale_hi, bool difference) {
    // difference: phi(|xi| * scale_hi) - phi(|xi| * scale_lo)  (dyadic block)
    // otherwise:  phi(|xi| * scale_lo)                          (low pass)
    const auto& xi2 = xi2_table(f.grid);
    std::vector<Complex> m(xi2.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        const double r = std::sqrt(xi2[i]);
        m[i] = difference ? lp_bump(r * scale_hi) - lp_bump(r * scale_lo)
                          : lp_bump(r * scale_lo);
    }
    return apply_spectral_multiplier(f, m);
}

}  // namespace

Field lp_project(const Field& f, double lambda, BandSide which) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("lp_project: lambda must be positive");
    Field low = bump_multiplier(f, 1.0 / lambda, 0.0, false);
    if (which == BandSide::below) return low;
    return sub(f, low);  // 1 - phi, exact complement
}

Field dyadic_block(const Field& f, int k) {
    const double lo = std::ldexp(1.0, k);       // 2^k
    const double hi = std::ldexp(1.0, k + 1);   // 2^{k+1}
    return bump_multiplier(f, 1.0 / lo, 1.0 / hi, true);
}

double krs_ratio(const Field& f, const ResolventConfig& cfg, double p) {
    const int n = f.grid.n;
    const ExponentTable t = exponents(n, Rational(n + 1, 2));
    const double qn = t.q_n.value();
    const double pn = t.p_n.value();  // inf when n = 2
    if (p < qn - 1e-12 || p > pn)
        throw std::invalid_argument("krs_ratio: p outside [q_n, p_n]");
    if (n == 2 && !(p < std::numeric_limits<double>::infinity()))
        throw std::invalid_argument("krs_ratio: p must be finite when n = 2");
    const double denom = lp_norm(f, p / (p - 1.0));
    if (denom == 0.0)
        throw std::invalid_argument("krs_ratio: zero input field");
    const double inv_pn = t.p_n.is_infinite() ? 0.0 : 1.0 / pn;
    const double weight = std::pow(cfg.lambda, 2.0 * n * (1.0 / p - inv_pn));
    return weight * lp_norm(apply_resolvent(f, cfg), p) / denom;
}

double refined_ratio(const Field& f, const ResolventConfig& cfg) {
    const int n = f.grid.n;
    if (n < 3)
        throw std::invalid_argument("refined_ratio: requires n >= 3");
    const ExponentTable t = exponents(n, Rational(n + 1, 2));
    const double qnd = conjugate_exponent(t.q_n).value();
    const double denom = lp_norm(f, qnd);
    if (denom == 0.0)
        throw std::invalid_argument("refined_ratio: zero input field");
    return std::pow(cfg.lambda, 1.0 / (n + 1)) *
           lp_norm(apply_resolvent(f, cfg), t.p_n.value()) / denom;
}

}  // namespace schrec
