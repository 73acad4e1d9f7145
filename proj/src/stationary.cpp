//==============================================================================
//  stationary.cpp -- Neumann inversion and stationary-state assembly.
//==============================================================================
#include "schrec/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "schrec/fit.hpp"
#include "schrec/norms.hpp"

namespace schrec {

double IterationNorm::operator()(const Field& f) const {
    if (kind == NormKind::Lp) return lp_norm(f, p);
    return xstar_norm(f, lambda, f.grid.n);
}

std::pair<Field, NeumannReport> neumann_invert(const Potential& V,
                                               const ResolventConfig& cfg,
                                               const Field& rhs,
                                               const IterationNorm& norm,
                                               double tol, int max_iter) {
    if (!(tol > 0.0)) throw std::invalid_argument("neumann_invert: tol must be positive");
    if (max_iter < 1) throw std::invalid_argument("neumann_invert: max_iter must be >= 1");
    if (!(rhs.grid == V.grid()))
        throw std::invalid_argument("neumann_invert: grid mismatch");

    NeumannReport rep;
    rep.norm_used = norm.kind;

    const double nrhs = norm(rhs);
    if (nrhs == 0.0) {
        Field zero = rhs;
        for (auto& v : zero.values) v = 0.0;
        rep.converged = true;
        return {zero, rep};
    }

    // The resolvent multiplier is fixed across iterations; build it once.
    const auto& xi2 = xi2_table(rhs.grid);
    const auto& mask = nyquist_mask(rhs.grid);
    const double l2 = cfg.lambda * cfg.lambda;
    const Complex iel(0.0, cfg.epsilon * cfg.lambda);
    std::vector<Complex> mult(xi2.size());
    for (std::size_t i = 0; i < mult.size(); ++i)
        mult[i] = mask[i] / (l2 - xi2[i] + iel);

    Field w = rhs;
    Field term = rhs;
    double prev = nrhs;
    std::vector<double> ratios;
    bool below_tol = false;

    for (int k = 1; k <= max_iter; ++k) {
        term = apply_spectral_multiplier(pointwise_mul(V.field, term), mult);
        const double tn = norm(term);
        if (prev > 0.0) ratios.push_back(tn / prev);
        prev = tn;
        w = add(w, term);
        rep.iterations = k;
        rep.final_increment = tn / nrhs;
        if (tn < tol * nrhs) {
            below_tol = true;
            break;
        }
    }

    const std::size_t tail = std::min<std::size_t>(5, ratios.size());
    double cmax = 0.0;
    for (std::size_t i = ratios.size() - tail; i < ratios.size(); ++i)
        cmax = std::max(cmax, ratios[i]);
    rep.contraction_estimate = cmax;
    rep.converged = below_tol && cmax < 1.0;
    return {w, rep};
}

namespace {

IterationNorm mode_norm(const Potential& V, StateMode mode, double lambda) {
    if (mode == StateMode::endpoint) {
        if (V.grid().n < 3)
            throw std::invalid_argument("stationary: endpoint mode requires n >= 3");
        if (!(V.q == Rational(V.grid().n, 2)))
            throw std::invalid_argument("stationary: endpoint mode requires q = n/2");
        return IterationNorm{NormKind::Xstar, 0.0, lambda};
    }
    return IterationNorm{NormKind::Lp, V.table.p.value(), 0.0};
}

}  // namespace

StationaryState build_stationary_state(const Potential& V,
                                       const std::array<int, 3>& kappa,
                                       StateMode mode, double tol, int max_iter) {
    const Grid& g = V.grid();
    bool zero = true;
    for (int d = 0; d < g.n; ++d) {
        if (kappa[d] != 0) zero = false;
        if (std::abs(kappa[d]) >= g.N / 2)
            throw std::invalid_argument(
                "build_stationary_state: lattice vector touches the Nyquist row");
    }
    if (zero)
        throw std::invalid_argument("build_stationary_state: lambda*omega must be nonzero");

    StationaryState s;
    s.kappa = kappa;
    double norm2 = 0.0;
    for (int d = 0; d < g.n; ++d) {
        const double c = g.freq_step() * kappa[d];
        norm2 += c * c;
    }
    s.lambda = std::sqrt(norm2);
    for (int d = 0; d < g.n; ++d) s.omega[d] = g.freq_step() * kappa[d] / s.lambda;

    const ResolventConfig cfg = make_resolvent_config(g, s.lambda);
    s.w0 = plane_wave(g, kappa);
    const Field rhs = apply_resolvent(pointwise_mul(V.field, s.w0), cfg);
    auto [wcor, rep] = neumann_invert(V, cfg, rhs, mode_norm(V, mode, s.lambda), tol, max_iter);
    s.wcor = std::move(wcor);
    s.neumann = rep;
    s.residual = helmholtz_residual(s, V, cfg);
    return s;
}

StationaryState build_stationary_state(const Potential& V, double lambda,
                                       const std::array<double, 3>& omega,
                                       StateMode mode, double tol, int max_iter) {
    const Grid& g = V.grid();
    if (!(lambda > 0.0))
        throw std::invalid_argument("build_stationary_state: lambda must be positive");
    std::array<int, 3> kappa{0, 0, 0};
    for (int d = 0; d < g.n; ++d) {
        const double target = lambda * omega[d] / g.freq_step();
        const double snapped = std::round(target);
        if (std::abs(target - snapped) > 1e-9 * std::max(1.0, std::abs(target)))
            throw std::invalid_argument(
                "build_stationary_state: lambda*omega is off the dual lattice");
        kappa[d] = static_cast<int>(snapped);
    }
    return build_stationary_state(V, kappa, mode, tol, max_iter);
}

double helmholtz_residual(const StationaryState& s, const Potential& V,
                          const ResolventConfig& cfg) {
    const Field w = add(s.w0, s.wcor);
    const Complex shift(cfg.lambda * cfg.lambda, cfg.epsilon * cfg.lambda);
    Field lhs = laplacian(w);
    const Field vw = pointwise_mul(V.field, w);
    const Complex iel(0.0, cfg.epsilon * cfg.lambda);
    for (std::size_t i = 0; i < lhs.values.size(); ++i)
        lhs.values[i] += shift * w.values[i] - vw.values[i] - iel * s.w0.values[i];
    const double num = lp_norm(lhs, 2.0);
    const double den = lp_norm(pointwise_mul(V.field, s.w0), 2.0);
    return den > 0.0 ? num / den : num;
}

DecayReport decay_study(const Potential& V, StateMode mode,
                        const std::vector<std::array<int, 3>>& ladder, double tol) {
    DecayReport rep;
    rep.all_converged = true;
    std::vector<double> xs, ys;
    for (const auto& kappa : ladder) {
        StationaryState s = build_stationary_state(V, kappa, mode, tol);
        DecayRow row;
        row.lambda = s.lambda;
        row.corrector_norm = mode == StateMode::endpoint
                                 ? xstar_norm(s.wcor, s.lambda, V.grid().n)
                                 : lp_norm(s.wcor, V.table.p);
        row.contraction = s.neumann.contraction_estimate;
        row.iterations = s.neumann.iterations;
        row.residual = s.residual;
        row.converged = s.neumann.converged;
        rep.rows.push_back(row);
        if (!row.converged) {
            rep.all_converged = false;
            break;  // abort the ladder, keep the partial report
        }
        if (row.corrector_norm > 0.0) {
            xs.push_back(row.lambda);
            ys.push_back(row.corrector_norm);
        }
    }
    if (xs.size() >= 2) {
        rep.slope = loglog_slope(xs, ys);
        rep.slope_defined = true;
    } else {
        rep.slope = std::numeric_limits<double>::quiet_NaN();
        rep.slope_defined = false;
    }
    return rep;
}

}  // namespace schrec
