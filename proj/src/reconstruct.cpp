//==============================================================================
//  reconstruct.cpp -- Scattering-vector selection, spectrum estimation, and
//  inverse-transform recovery of the potential difference.
//==============================================================================
#include "schrec/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include "schrec/fit.hpp"
#include "schrec/norms.hpp"
#include "schrec/orthogonality.hpp"

namespace schrec {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int dot3(const std::array<int, 3>& a, const std::array<int, 3>& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

// Shortest primitive integer vector orthogonal to a (lexicographically
// largest among equals, which selects the coordinate direction of smallest
// index whenever one is orthogonal to a).  Exhaustive search over the cube
// |eta_d| <= R; a rotated pair (-a2, a1, 0)-type solution always lies inside,
// so the search cannot come back empty for n >= 2.
std::array<int, 3> shortest_orthogonal(const std::array<int, 3>& a, int n) {
    const int R = std::max({1, std::abs(a[0]), std::abs(a[1]), std::abs(a[2])});
    std::array<int, 3> best{0, 0, 0};
    long long best_norm = -1;
    std::array<int, 3> eta{0, 0, 0};
    const int zlo = n == 3 ? -R : 0, zhi = n == 3 ? R : 0;
    for (int x = -R; x <= R; ++x) {
        for (int y = -R; y <= R; ++y) {
            for (int z = zlo; z <= zhi; ++z) {
                eta = {x, y, z};
                if (x == 0 && y == 0 && z == 0) continue;
                if (dot3(eta, a) != 0) continue;
                const long long norm = dot3(eta, eta);
                if (best_norm < 0 || norm < best_norm ||
                    (norm == best_norm && eta > best)) {
                    best = eta;
                    best_norm = norm;
                }
            }
        }
    }
    if (best_norm < 0)
        throw std::logic_error("scattering_vectors: no orthogonal lattice direction");
    return best;
}

bool field_is_real(const Field& f) {
    double vmax = 0.0, imax = 0.0;
    for (const auto& v : f.values) {
        vmax = std::max(vmax, std::abs(v));
        imax = std::max(imax, std::abs(v.imag()));
    }
    return imax <= 1e-14 * std::max(vmax, 1e-300);
}

double two_pi_pow(int n) { return std::pow(2.0 * M_PI, 0.5 * n); }

// Shared tail of both recovery modes: conjugate-symmetry fill, spectrum
// assembly on the half grid, inverse transform, and the truth comparison.
void assemble_report(ReconstructionReport& rep, const Grid& grid,
                     bool fill_symmetry, const Field* truth) {
    const int n = grid.n;
    rep.half_grid = make_grid(n, grid.N / 2, grid.L / 2);

    if (fill_symmetry) {
        std::vector<XiRecord> mirrored;
        for (const auto& rec : rep.records) {
            std::array<int, 3> neg{-rec.xi_idx[0], -rec.xi_idx[1], -rec.xi_idx[2]};
            const bool present = std::any_of(
                rep.records.begin(), rep.records.end(),
                [&](const XiRecord& r) { return r.xi_idx == neg; });
            if (!present) {
                XiRecord m;
                m.xi_idx = neg;
                m.fhat_final = std::conj(rec.fhat_final);
                m.by_symmetry = true;
                mirrored.push_back(std::move(m));
            }
        }
        for (auto& m : mirrored) rep.records.push_back(std::move(m));
    }

    Field spec;
    spec.grid = rep.half_grid;
    spec.rep = Rep::spectral;
    spec.values.assign(rep.half_grid.size(), Complex(0.0, 0.0));
    for (const auto& rec : rep.records) {
        std::array<int, 3> j{rec.xi_idx[0] / 2, rec.xi_idx[1] / 2, rec.xi_idx[2] / 2};
        spec.values[spectral_bin(rep.half_grid, j)] = rec.fhat_final;
    }
    spec.values[spectral_bin(rep.half_grid, {0, 0, 0})] = rep.fhat_zero;
    rep.v_rec = inverse_fourier(spec);

    if (truth != nullptr) {
        rep.has_truth = true;
        Field tr;
        tr.grid = rep.half_grid;
        tr.rep = Rep::spatial;
        tr.values.assign(rep.half_grid.size(), Complex(0.0, 0.0));
        const int Nh = rep.half_grid.N, N = grid.N, off = grid.N / 4;
        if (n == 2) {
            for (int i0 = 0; i0 < Nh; ++i0)
                for (int i1 = 0; i1 < Nh; ++i1)
                    tr.values[static_cast<std::size_t>(i0) * Nh + i1] =
                        truth->values[static_cast<std::size_t>(i0 + off) * N + (i1 + off)];
        } else {
            for (int i0 = 0; i0 < Nh; ++i0)
                for (int i1 = 0; i1 < Nh; ++i1)
                    for (int i2 = 0; i2 < Nh; ++i2)
                        tr.values[(static_cast<std::size_t>(i0) * Nh + i1) * Nh + i2] =
                            truth->values[(static_cast<std::size_t>(i0 + off) * N +
                                           (i1 + off)) * N + (i2 + off)];
        }
        const double dn = lp_norm(tr, 2.0);
        rep.rel_l2_error = lp_norm(sub(rep.v_rec, tr), 2.0) / (dn > 0.0 ? dn : 1.0);
    } else {
        rep.rel_l2_error = kNaN;
    }
}

void check_xi_set(const std::vector<std::array<int, 3>>& xi_set) {
    if (xi_set.empty())
        throw std::invalid_argument("recover_potential: empty frequency set");
}

// After clamping to the admissible rungs, a xi must still carry a usable
// ladder: two rungs normally, one if only one was requested.
void check_clamped_rungs(std::size_t kept, std::size_t requested,
                         const std::array<int, 3>& xi) {
    const std::size_t need = requested < 2 ? requested : 2;
    if (kept >= need) return;
    throw std::invalid_argument(
        "recover_potential: fewer than " + std::to_string(need) +
        " ladder rungs fit the resolved band at xi index (" + std::to_string(xi[0]) + ", " +
        std::to_string(xi[1]) + ", " + std::to_string(xi[2]) +
        "); widen the grid or trim the frequency set");
}

// Rung ordering is load-bearing: the top converged rung and the Richardson
// pair are taken from the back of the list.
void check_ladder(const std::vector<int>& ladder) {
    if (ladder.empty())
        throw std::invalid_argument("recover_potential: empty ladder");
    for (std::size_t j = 0; j < ladder.size(); ++j) {
        if (ladder[j] < 1)
            throw std::invalid_argument("recover_potential: ladder entries must be >= 1");
        if (j > 0 && ladder[j] <= ladder[j - 1])
            throw std::invalid_argument("recover_potential: ladder must be strictly ascending");
    }
}

}  // namespace

namespace {

// Rejections shared by scattering_vectors and scattering_admissible: these
// requests are invalid at every m, so they throw rather than return false.
void check_xi_target(const std::array<int, 3>& xi_idx, int m, int n) {
    if (m < 1) throw std::invalid_argument("scattering_vectors: m must be >= 1");
    bool zero = true;
    for (int d = 0; d < 3; ++d) {
        if (d >= n) {
            if (xi_idx[d] != 0)
                throw std::invalid_argument("scattering_vectors: trailing components must be 0");
            continue;
        }
        if (xi_idx[d] != 0) zero = false;
        if (xi_idx[d] % 2 != 0)
            throw std::invalid_argument(
                "scattering_vectors: target frequency must lie on the even sublattice");
    }
    if (zero)
        throw std::invalid_argument(
            "scattering_vectors: xi = 0 is outside the scheme (handled separately)");
}

}  // namespace

bool scattering_admissible(const std::array<int, 3>& xi_idx, int m, const Grid& grid) {
    check_xi_target(xi_idx, m, grid.n);
    const std::array<int, 3> eta0 = shortest_orthogonal(xi_idx, grid.n);
    for (int d = 0; d < grid.n; ++d) {
        const int k1 = xi_idx[d] / 2 + m * eta0[d];
        const int k2 = -xi_idx[d] / 2 + m * eta0[d];
        if (std::abs(k1) >= grid.N / 2 || std::abs(k2) >= grid.N / 2) return false;
    }
    return true;
}

ScatteringConfig scattering_vectors(const std::array<int, 3>& xi_idx, int m,
                                    const Grid& grid) {
    const int n = grid.n;
    check_xi_target(xi_idx, m, n);

    ScatteringConfig cfg;
    cfg.xi_idx = xi_idx;
    cfg.m = m;
    const std::array<int, 3> eta0 = shortest_orthogonal(xi_idx, n);
    long long k1n = 0;
    for (int d = 0; d < 3; ++d) {
        cfg.eta_idx[d] = m * eta0[d];
        cfg.k1[d] = xi_idx[d] / 2 + cfg.eta_idx[d];
        cfg.k2[d] = -xi_idx[d] / 2 + cfg.eta_idx[d];
        if (d < n && (std::abs(cfg.k1[d]) >= grid.N / 2 || std::abs(cfg.k2[d]) >= grid.N / 2))
            throw std::invalid_argument(
                "scattering_vectors: lambda*omega exceeds the grid's frequency range");
        k1n += static_cast<long long>(cfg.k1[d]) * cfg.k1[d];
    }
    const double step = grid.freq_step();
    cfg.lambda = step * std::sqrt(static_cast<double>(k1n));
    const double eta_norm = std::sqrt(static_cast<double>(dot3(eta0, eta0)));
    for (int d = 0; d < n; ++d) {
        cfg.xi[d] = step * xi_idx[d];
        cfg.nu[d] = eta0[d] / eta_norm;
        cfg.omega1[d] = step * cfg.k1[d] / cfg.lambda;
        cfg.omega2[d] = step * cfg.k2[d] / cfg.lambda;
    }
    return cfg;
}

std::vector<FhatEstimate> fhat_direct(const Potential& V1, const Potential& V2,
                                      const std::vector<ScatteringConfig>& cfgs,
                                      StateMode mode, double tol) {
    if (!(V1.grid() == V2.grid()))
        throw std::invalid_argument("fhat_direct: potential grids differ");
    const Potential V2bar = conj_potential(V2);
    const double scale = 1.0 / two_pi_pow(V1.grid().n);

    std::vector<FhatEstimate> out;
    out.reserve(cfgs.size());
    for (const auto& cfg : cfgs) {
        FhatEstimate est;
        est.cfg = cfg;
        StationaryState s1 = build_stationary_state(V1, cfg.k1, mode, tol);
        StationaryState s2 = build_stationary_state(V2bar, cfg.k2, mode, tol);
        est.iterations1 = s1.neumann.iterations;
        est.iterations2 = s2.neumann.iterations;
        est.residual1 = s1.residual;
        est.residual2 = s2.residual;
        est.converged = s1.neumann.converged && s2.neumann.converged;
        if (est.converged) {
            const CancellationTerms t = cancellation_decomposition(V1, V2, s1, s2, 1.0);
            est.fhat = scale * t.sum();
            est.leading = scale * t.leading;
            est.rem1 = scale * t.rem1;
            est.rem2 = scale * t.rem2;
            est.rem3 = scale * t.rem3;
        } else {
            est.fhat = est.leading = est.rem1 = est.rem2 = est.rem3 =
                Complex(kNaN, kNaN);
        }
        out.push_back(std::move(est));
    }
    return out;
}

FieldMap free_final_state_map(const Grid& grid, double T) {
    const auto& xi2 = xi2_table(grid);
    auto mult = std::make_shared<std::vector<Complex>>(xi2.size());
    for (std::size_t i = 0; i < xi2.size(); ++i)
        (*mult)[i] = std::polar(1.0, -xi2[i] * T);
    return [grid, mult](const Field& f) {
        if (!(f.grid == grid))
            throw std::invalid_argument("free map: grid mismatch");
        return apply_spectral_multiplier(f, *mult);
    };
}

Complex fhat_from_data(const FieldMap& U, const FieldMap& Ufree,
                       const ScatteringConfig& cfg, const Grid& grid, double T) {
    if (!(T > 0.0)) throw std::invalid_argument("fhat_from_data: T must be positive");
    const Field f = plane_wave(grid, cfg.k1);
    const Field diff = sub(U(f), Ufree(f));
    const double l2 = cfg.lambda * cfg.lambda;
    const Field g = scale(plane_wave(grid, cfg.k2), std::polar(1.0, -l2 * T));
    return Complex(0.0, 1.0) * inner(diff, g) / (T * two_pi_pow(grid.n));
}

namespace {

// Final estimate for one xi from its converged rungs: top rung, or 2-point
// Richardson on the top two with the known decay rate delta
// (Fhat_lambda = Fhat + C lambda^{-delta}  =>  eliminate C).
void finalize_record(XiRecord& rec, bool extrapolate, double delta) {
    std::vector<const FhatEstimate*> ok;
    for (const auto& r : rec.rungs)
        if (r.converged) ok.push_back(&r);
    if (ok.empty()) {
        rec.fhat_final = Complex(kNaN, kNaN);
        return;
    }
    const FhatEstimate* top = ok.back();
    rec.fhat_final = top->fhat;
    if (extrapolate && ok.size() >= 2) {
        const FhatEstimate* prev = ok[ok.size() - 2];
        const double r = std::pow(prev->cfg.lambda / top->cfg.lambda, delta);
        rec.fhat_final = (top->fhat - r * prev->fhat) / (1.0 - r);
    }
    std::vector<double> xs, ys;
    for (const auto* e : ok) {
        const double mag = std::abs(e->rem1) + std::abs(e->rem2) + std::abs(e->rem3);
        if (mag > 0.0) {
            xs.push_back(e->cfg.lambda);
            ys.push_back(mag);
        }
    }
    if (xs.size() >= 2) {
        rec.remainder_slope = loglog_slope(xs, ys);
        rec.slope_defined = true;
    } else {
        rec.remainder_slope = kNaN;
    }
}

}  // namespace

ReconstructionReport recover_potential(const Potential& V1, const Potential& V2,
                                       const std::vector<std::array<int, 3>>& xi_set,
                                       const RecoveryOptions& opt) {
    check_xi_set(xi_set);
    check_ladder(opt.ladder);
    const Grid& grid = V1.grid();
    const int n = grid.n;
    const double delta = opt.mode == StateMode::endpoint
                             ? 1.0 / (n + 1)
                             : V1.table.decay_nonendpoint().value();

    ReconstructionReport rep;
    for (const auto& xi : xi_set) {
        std::vector<ScatteringConfig> cfgs;
        cfgs.reserve(opt.ladder.size());
        for (int m : opt.ladder)
            if (scattering_admissible(xi, m, grid))
                cfgs.push_back(scattering_vectors(xi, m, grid));
        check_clamped_rungs(cfgs.size(), opt.ladder.size(), xi);
        XiRecord rec;
        rec.xi_idx = xi;
        rec.rungs = fhat_direct(V1, V2, cfgs, opt.mode, opt.tol);
        finalize_record(rec, opt.extrapolate, delta);
        rep.records.push_back(std::move(rec));
    }

    const Field F = sub(V1.field, V2.field);
    Complex mass(0.0, 0.0);
    for (const auto& v : F.values) mass += v;
    const double hn = std::pow(grid.h(), n);
    rep.fhat_zero = mass * hn / two_pi_pow(n);
    rep.fhat_zero_filled = true;

    const bool real_inputs = field_is_real(V1.field) && field_is_real(V2.field);
    assemble_report(rep, grid, real_inputs, &F);
    return rep;
}

ReconstructionReport recover_potential(const FieldMap& U, const Grid& grid,
                                       double T,
                                       const std::vector<std::array<int, 3>>& xi_set,
                                       const RecoveryOptions& opt) {
    check_xi_set(xi_set);
    check_ladder(opt.ladder);
    const FieldMap Ufree = free_final_state_map(grid, T);

    ReconstructionReport rep;
    for (const auto& xi : xi_set) {
        XiRecord rec;
        rec.xi_idx = xi;
        for (int m : opt.ladder) {
            if (!scattering_admissible(xi, m, grid)) continue;
            FhatEstimate est;
            est.cfg = scattering_vectors(xi, m, grid);
            est.fhat = fhat_from_data(U, Ufree, est.cfg, grid, T);
            est.leading = est.fhat;
            est.converged = true;
            rec.rungs.push_back(std::move(est));
        }
        check_clamped_rungs(rec.rungs.size(), opt.ladder.size(), xi);
        rec.fhat_final = rec.rungs.back().fhat;  // Born error: no clean power law
        rec.remainder_slope = kNaN;
        rep.records.push_back(std::move(rec));
    }

    rep.fhat_zero = Complex(0.0, 0.0);
    rep.fhat_zero_filled = false;  // reported hole
    assemble_report(rep, grid, opt.assume_real, nullptr);
    return rep;
}

}  // namespace schrec
