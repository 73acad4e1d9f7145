//==============================================================================
//  propagator.cpp -- Strang split-step integrator and derived solvers.
//==============================================================================
#include "schrec/propagator.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <stdexcept>

namespace schrec {

StrangStepper::StrangStepper(const Potential& V, double tau)
    : grid_(V.grid()), tau_(tau) {
    if (tau == 0.0) throw std::invalid_argument("StrangStepper: tau must be nonzero");
    const Field& vf = V.field;
    vhalf_.resize(vf.values.size());
    const Complex half(0.0, -0.5 * tau);
    for (std::size_t i = 0; i < vhalf_.size(); ++i)
        vhalf_[i] = std::exp(half * vf.values[i]);

    const auto& xi2 = xi2_table(grid_);
    const double inv_nn = 1.0 / static_cast<double>(grid_.size());
    kin_.resize(xi2.size());
    for (std::size_t i = 0; i < kin_.size(); ++i)
        kin_[i] = std::polar(inv_nn, -xi2[i] * tau);
}

void StrangStepper::step(Field& u) const {
    if (!(u.grid == grid_) || u.rep != Rep::spatial)
        throw std::invalid_argument("StrangStepper: state grid/representation mismatch");
    Complex* p = u.values.data();
    for (std::size_t i = 0; i < u.values.size(); ++i) p[i] *= vhalf_[i];
    detail::dft_inplace(u.grid, p, -1);
    for (std::size_t i = 0; i < u.values.size(); ++i) p[i] *= kin_[i];
    detail::dft_inplace(u.grid, p, +1);
    for (std::size_t i = 0; i < u.values.size(); ++i) p[i] *= vhalf_[i];
}

int recommended_steps(const Potential& V, double T) {
    const Grid& g = V.grid();
    double vmax = 0.0;
    for (const auto& v : V.field.values) vmax = std::max(vmax, std::abs(v));
    const double nyq = g.freq_step() * (g.N / 2);
    const double ximax2 = g.n * nyq * nyq;
    const double pot = std::ceil(T * vmax / 0.1);
    const double kin = std::ceil(T * ximax2 / (0.25 * M_PI));
    return static_cast<int>(std::max(1.0, std::max(pot, kin)));
}

Trajectory evolve(const Potential& V, const Field& f, double T, int steps,
                  int keep, bool warn) {
    if (!(f.grid == V.grid()))
        throw std::invalid_argument("evolve: state and potential grids differ");
    if (f.rep != Rep::spatial)
        throw std::invalid_argument("evolve: initial state must be spatial");
    if (!(T > 0.0)) throw std::invalid_argument("evolve: T must be positive");
    if (steps < 1) throw std::invalid_argument("evolve: steps must be >= 1");
    if (warn && steps < recommended_steps(V, T))
        std::fprintf(stderr,
                     "evolve: warning: %d steps is below the recommended %d "
                     "(tau*max|V| <= 0.1, tau*|xi_max|^2 <= pi/4)\n",
                     steps, recommended_steps(V, T));

    const double tau = T / steps;
    StrangStepper stepper(V, tau);
    Trajectory traj;
    traj.grid = f.grid;
    traj.times.push_back(0.0);
    traj.frames.push_back(f);
    Field u = f;
    for (int j = 1; j <= steps; ++j) {
        stepper.step(u);
        const bool kept = keep >= 1 && j % keep == 0;
        if (j == steps || kept) {
            traj.times.push_back(j == steps ? T : tau * j);
            traj.frames.push_back(u);
        }
    }
    return traj;
}

Field initial_to_final(const Potential& V, const Field& f, double T, int steps) {
    if (!(f.grid == V.grid()))
        throw std::invalid_argument("initial_to_final: state and potential grids differ");
    if (T == 0.0) return f;
    return evolve(V, f, T, steps).frames.back();
}

Trajectory final_value_solve(const Potential& V, const Field& g, double T,
                             int steps, int keep, bool warn) {
    Trajectory u = evolve(V, conj_field(g), T, steps, keep, warn);
    Trajectory v;
    v.grid = u.grid;
    const std::size_t m = u.frames.size();
    v.times.reserve(m);
    v.frames.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t j = m - 1 - i;
        v.times.push_back(i == m - 1 ? T : T - u.times[j]);
        v.frames.push_back(conj_field(u.frames[j]));
    }
    return v;
}

Trajectory stationary_trajectory(const StationaryState& s, double T, int samples) {
    if (!(T > 0.0)) throw std::invalid_argument("stationary_trajectory: T must be positive");
    if (samples < 2) throw std::invalid_argument("stationary_trajectory: need >= 2 samples");
    const Field w = add(s.w0, s.wcor);
    Trajectory traj;
    traj.grid = w.grid;
    const double l2 = s.lambda * s.lambda;
    for (int j = 0; j < samples; ++j) {
        const double t = T * j / (samples - 1);
        traj.times.push_back(t);
        traj.frames.push_back(scale(w, std::polar(1.0, -l2 * t)));
    }
    return traj;
}

}  // namespace schrec
