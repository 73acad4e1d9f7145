//==============================================================================
//  grid.hpp
//
//  Periodic-box discretization of R^n (n = 2 or 3):
//    * Grid / Field value types (complex samples, spatial or spectral rep)
//    * Fourier transforms scaled to the integral convention
//          fhat(xi) = (2pi)^{-n/2} \int f(x) e^{-i x.xi} dx
//      discretized on the centered box [-L/2, L/2)^n with the dual lattice
//      xi_k = 2pi k / L, k in {-N/2, ..., N/2 - 1}^n:
//          forward:  F_k  = (2pi)^{-n/2} h^n  sum_j f_j e^{-i x_j . xi_k}
//          inverse:  f_j  = (2pi)^{n/2} L^-n  sum_k F_k e^{+i x_j . xi_k}
//      This is the unique scaling for which Parseval holds between the h^n
//      spatial and (2pi/L)^n spectral quadrature weights; a unit lattice mode
//      e^{i kappa.x} then occupies a single bin of modulus (2pi)^{-n/2} L^n.
//    * plane-wave sampling, diagonal spectral multipliers, CFLD file format
//
//  Spectral storage order is FFT-natural: per-axis index j maps to the
//  frequency integer k = j for j < N/2 and k = j - N otherwise; arrays are
//  row-major (last axis fastest).  The Nyquist row k = -N/2 has no positive
//  partner; multiplier operations zero it (see nyquist_mask).
//==============================================================================
#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace schrec {

using Complex = std::complex<double>;

struct Grid {
    int n = 0;       // dimension, 2 or 3
    int N = 0;       // samples per axis, power of two >= 16
    double L = 0.0;  // box side length

    double h() const { return L / N; }
    std::size_t size() const {
        std::size_t s = 1;
        for (int d = 0; d < n; ++d) s *= static_cast<std::size_t>(N);
        return s;
    }
    // Spatial sample coordinate along one axis: centered box [-L/2, L/2).
    double coord(int i) const { return -0.5 * L + h() * i; }
    // Frequency integer for per-axis storage index j.
    int freq_index(int j) const { return j < N / 2 ? j : j - N; }
    // Physical frequency for per-axis storage index j.
    double freq(int j) const { return freq_step() * freq_index(j); }
    double freq_step() const { return 2.0 * 3.14159265358979323846 / L; }
    // Largest represented |frequency| (the Nyquist row itself).
    double nyquist() const { return freq_step() * (N / 2); }

    friend bool operator==(const Grid& a, const Grid& b) {
        return a.n == b.n && a.N == b.N && a.L == b.L;
    }
};

enum class Rep : std::uint8_t { spatial = 0, spectral = 1 };

struct Field {
    Grid grid;
    Rep rep = Rep::spatial;
    std::vector<Complex> values;  // size N^n, row-major
};

// Rejects n outside {2,3}, N not a power of two, N < 16, L <= 0.
Grid make_grid(int n, int N, double L);

// Weighted-quadrature transforms; see file header for the exact scaling.
// fourier requires spatial input, inverse_fourier spectral input.
Field fourier(const Field& f);
Field inverse_fourier(const Field& F);

// Spatial samples of e^{-i kappa.x} with kappa = (2pi/L) * k, k integer per
// axis (exact periodicity).  k components may be any integers; modes outside
// {-N/2,...,N/2-1} alias onto their representatives.
Field plane_wave(const Grid& g, const std::array<int, 3>& k);

// Storage index of the spectral bin holding frequency integer vector k
// (components reduced mod N into FFT-natural order).
std::size_t spectral_bin(const Grid& g, const std::array<int, 3>& k);

//---------------------------------------------------------------------------
//  Pointwise field algebra (pure, representation-preserving)
//---------------------------------------------------------------------------
Field add(const Field& a, const Field& b);
Field sub(const Field& a, const Field& b);
Field scale(const Field& a, Complex c);
Field pointwise_mul(const Field& a, const Field& b);
Field conj_field(const Field& a);

// h^n-weighted quadrature of a * conj(b) over the box (spatial fields).
Complex inner(const Field& a, const Field& b);
// h^n-weighted quadrature of a * b (bilinear, no conjugation).
Complex bilinear(const Field& a, const Field& b);

// Samples fn(x) on the grid; fn receives the coordinate vector (third
// component 0 when n = 2).  Returns a spatial field.
Field sample_spatial(const Grid& g, const std::function<Complex(double, double, double)>& fn);

// Centered Gaussian a * e^{-|x|^2 / (2 sigma^2)}.
Field gaussian_field(const Grid& g, double amplitude, double sigma);

//---------------------------------------------------------------------------
//  Spectral multiplier machinery
//---------------------------------------------------------------------------
// |xi_k|^2 per storage index (cached per grid behind a mutex; the memo is
// unobservable in outputs).
const std::vector<double>& xi2_table(const Grid& g);
// 1.0 on regular modes, 0.0 where any axis sits on the Nyquist row.
const std::vector<double>& nyquist_mask(const Grid& g);

// Applies the diagonal multiplier m (per spectral storage index) to f.
// Spatial input runs unnormalized FFT -> multiply -> unnormalized inverse FFT
// with the 1/N^n folded in, which equals the normalized-transform sandwich because
// the transform's scalar and centering phases cancel on both sides.  Spectral
// input is multiplied directly.  Output representation matches the input.
Field apply_spectral_multiplier(const Field& f, const std::vector<Complex>& m);

// Spectral Laplacian: multiplier -|xi_k|^2 with the Nyquist shell zeroed.
Field laplacian(const Field& f);

// Zeroes the Nyquist shell of f (spatial or spectral input, same rep out).
Field drop_nyquist(const Field& f);

//---------------------------------------------------------------------------
//  CFLD file format
//
//  magic "CFLD" | u32 version (=1) | u32 n | u32 N | f64 L | u8 rep |
//  N^n complex values as (re, im) f64 pairs, row-major.  All integers and
//  floats little-endian regardless of host byte order.
//---------------------------------------------------------------------------
void write_cfld(const std::string& path, const Field& f);
Field read_cfld(const std::string& path);

namespace detail {
// Unnormalized in-place DFT over the grid's layout (FFTW backend).
// sign = -1 forward, +1 backward; backward(forward(x)) = N^n * x.
void dft_inplace(const Grid& g, Complex* data, int sign);
}  // namespace detail

}  // namespace schrec
