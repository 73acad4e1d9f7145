//==============================================================================
//  grid.cpp -- periodic-box fields, weighted-quadrature transforms, CFLD I/O.
//==============================================================================
#include "schrec/grid.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <mutex>
#include <stdexcept>

namespace schrec {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

bool is_pow2(int v) { return v > 0 && (v & (v - 1)) == 0; }

// Centering phase (-1)^{k_1 + ... + k_n}: converts the index-space DFT to the
// centered-coordinate transform.  Since N is even, (-1)^k = (-1)^j for the
// storage index j, so the phase is the parity of the storage multi-index.
// Applied symmetrically in fourier / inverse_fourier.
void apply_parity_phase(const Grid& g, std::vector<Complex>& v) {
    const int N = g.N;
    if (g.n == 2) {
        std::size_t idx = 0;
        for (int j0 = 0; j0 < N; ++j0)
            for (int j1 = 0; j1 < N; ++j1, ++idx)
                if ((j0 + j1) & 1) v[idx] = -v[idx];
    } else {
        std::size_t idx = 0;
        for (int j0 = 0; j0 < N; ++j0)
            for (int j1 = 0; j1 < N; ++j1)
                for (int j2 = 0; j2 < N; ++j2, ++idx)
                    if ((j0 + j1 + j2) & 1) v[idx] = -v[idx];
    }
}

struct TableCache {
    std::mutex mu;
    // std::map nodes are reference-stable, so returned references outlive
    // later insertions.
    std::map<std::tuple<int, int, double>, std::vector<double>> xi2;
    std::map<std::tuple<int, int, double>, std::vector<double>> nyq;
};

TableCache& tables() {
    static TableCache t;
    return t;
}

}  // namespace

Grid make_grid(int n, int N, double L) {
    require(n == 2 || n == 3, "make_grid: dimension must be 2 or 3");
    require(is_pow2(N), "make_grid: N must be a power of two");
    require(N >= 16, "make_grid: N must be >= 16");
    require(L > 0.0, "make_grid: box length must be positive");
    return Grid{n, N, L};
}

Field fourier(const Field& f) {
    require(f.rep == Rep::spatial, "fourier: input must be spatial");
    Field out;
    out.grid = f.grid;
    out.rep = Rep::spectral;
    out.values = f.values;
    detail::dft_inplace(f.grid, out.values.data(), -1);
    apply_parity_phase(f.grid, out.values);
    const double s =
        std::pow(2.0 * kPi, -0.5 * f.grid.n) * std::pow(f.grid.h(), f.grid.n);
    for (auto& v : out.values) v *= s;
    return out;
}

Field inverse_fourier(const Field& F) {
    require(F.rep == Rep::spectral, "inverse_fourier: input must be spectral");
    Field out;
    out.grid = F.grid;
    out.rep = Rep::spatial;
    out.values = F.values;
    apply_parity_phase(F.grid, out.values);
    detail::dft_inplace(F.grid, out.values.data(), +1);
    const double s =
        std::pow(2.0 * kPi, 0.5 * F.grid.n) * std::pow(F.grid.L, -F.grid.n);
    for (auto& v : out.values) v *= s;
    return out;
}

Field plane_wave(const Grid& g, const std::array<int, 3>& k) {
    const int N = g.N;
    std::array<std::vector<Complex>, 3> axis;
    for (int d = 0; d < g.n; ++d) {
        axis[d].resize(N);
        const double kappa = g.freq_step() * k[d];
        for (int i = 0; i < N; ++i)
            axis[d][i] = std::polar(1.0, -kappa * g.coord(i));
    }
    Field out;
    out.grid = g;
    out.rep = Rep::spatial;
    out.values.resize(g.size());
    if (g.n == 2) {
        std::size_t idx = 0;
        for (int j0 = 0; j0 < N; ++j0)
            for (int j1 = 0; j1 < N; ++j1, ++idx)
                out.values[idx] = axis[0][j0] * axis[1][j1];
    } else {
        std::size_t idx = 0;
        for (int j0 = 0; j0 < N; ++j0)
            for (int j1 = 0; j1 < N; ++j1) {
                const Complex c01 = axis[0][j0] * axis[1][j1];
                for (int j2 = 0; j2 < N; ++j2, ++idx)
                    out.values[idx] = c01 * axis[2][j2];
            }
    }
    return out;
}

std::size_t spectral_bin(const Grid& g, const std::array<int, 3>& k) {
    const int N = g.N;
    std::size_t idx = 0;
    for (int d = 0; d < g.n; ++d) {
        int j = ((k[d] % N) + N) % N;
        idx = idx * static_cast<std::size_t>(N) + static_cast<std::size_t>(j);
    }
    return idx;
}

namespace {
void check_compatible(const Field& a, const Field& b, const char* op) {
    if (!(a.grid == b.grid) || a.rep != b.rep)
        throw std::invalid_argument(std::string(op) + ": grid or representation mismatch");
}
}  // namespace

Field add(const Field& a, const Field& b) {
    check_compatible(a, b, "add");
    Field out = a;
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += b.values[i];
    return out;
}

Field sub(const Field& a, const Field& b) {
    check_compatible(a, b, "sub");
    Field out = a;
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] -= b.values[i];
    return out;
}

Field scale(const Field& a, Complex c) {
    Field out = a;
    for (auto& v : out.values) v *= c;
    return out;
}

Field pointwise_mul(const Field& a, const Field& b) {
    check_compatible(a, b, "pointwise_mul");
    Field out = a;
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] *= b.values[i];
    return out;
}

Field conj_field(const Field& a) {
    Field out = a;
    for (auto& v : out.values) v = std::conj(v);
    return out;
}

Complex inner(const Field& a, const Field& b) {
    check_compatible(a, b, "inner");
    Complex s = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        s += a.values[i] * std::conj(b.values[i]);
    return s * std::pow(a.grid.h(), a.grid.n);
}

Complex bilinear(const Field& a, const Field& b) {
    check_compatible(a, b, "bilinear");
    Complex s = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) s += a.values[i] * b.values[i];
    return s * std::pow(a.grid.h(), a.grid.n);
}

Field sample_spatial(const Grid& g, const std::function<Complex(double, double, double)>& fn) {
    Field out;
    out.grid = g;
    out.rep = Rep::spatial;
    out.values.resize(g.size());
    const int N = g.N;
    if (g.n == 2) {
        std::size_t idx = 0;
        for (int j0 = 0; j0 < N; ++j0) {
            const double x0 = g.coord(j0);
            for (int j1 = 0; j1 < N; ++j1, ++idx)
                out.values[idx] = fn(x0, g.coord(j1), 0.0);
        }
    } else {
        std::size_t idx = 0;
        for (int j0 = 0; j0 < N; ++j0) {
            const double x0 = g.coord(j0);
            for (int j1 = 0; j1 < N; ++j1) {
                const double x1 = g.coord(j1);
                for (int j2 = 0; j2 < N; ++j2, ++idx)
                    out.values[idx] = fn(x0, x1, g.coord(j2));
            }
        }
    }
    return out;
}

Field gaussian_field(const Grid& g, double amplitude, double sigma) {
    const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
    return sample_spatial(g, [=](double x, double y, double z) {
        return Complex(amplitude * std::exp(-(x * x + y * y + z * z) * inv2s2), 0.0);
    });
}

const std::vector<double>& xi2_table(const Grid& g) {
    auto key = std::make_tuple(g.n, g.N, g.L);
    TableCache& tc = tables();
    std::lock_guard<std::mutex> lock(tc.mu);
    auto it = tc.xi2.find(key);
    if (it != tc.xi2.end()) return it->second;

    const int N = g.N;
    std::vector<double> fr2(N);
    for (int j = 0; j < N; ++j) {
        const double f = g.freq(j);
        fr2[j] = f * f;
    }
    std::vector<double> table(g.size());
    if (g.n == 2) {
        std::size_t idx = 0;
        for (int j0 = 0; j0 < N; ++j0)
            for (int j1 = 0; j1 < N; ++j1, ++idx) table[idx] = fr2[j0] + fr2[j1];
    } else {
        std::size_t idx = 0;
        for (int j0 = 0; j0 < N; ++j0)
            for (int j1 = 0; j1 < N; ++j1)
                for (int j2 = 0; j2 < N; ++j2, ++idx)
                    table[idx] = fr2[j0] + fr2[j1] + fr2[j2];
    }
    return tc.xi2.emplace(key, std::move(table)).first->second;
}

const std::vector<double>& nyquist_mask(const Grid& g) {
    auto key = std::make_tuple(g.n, g.N, g.L);
    TableCache& tc = tables();
    std::lock_guard<std::mutex> lock(tc.mu);
    auto it = tc.nyq.find(key);
    if (it != tc.nyq.end()) return it->second;

    const int N = g.N;
    const int ny = N / 2;
    std::vector<double> table(g.size(), 1.0);
    if (g.n == 2) {
        std::size_t idx = 0;
        for (int j0 = 0; j0 < N; ++j0)
            for (int j1 = 0; j1 < N; ++j1, ++idx)
                if (j0 == ny || j1 == ny) table[idx] = 0.0;
    } else {
        std::size_t idx = 0;
        for (int j0 = 0; j0 < N; ++j0)
            for (int j1 = 0; j1 < N; ++j1)
                for (int j2 = 0; j2 < N; ++j2, ++idx)
                    if (j0 == ny || j1 == ny || j2 == ny) table[idx] = 0.0;
    }
    return tc.nyq.emplace(key, std::move(table)).first->second;
}

Field apply_spectral_multiplier(const Field& f, const std::vector<Complex>& m) {
    if (m.size() != f.values.size())
        throw std::invalid_argument("apply_spectral_multiplier: table size mismatch");
    Field out = f;
    if (f.rep == Rep::spectral) {
        for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] *= m[i];
        return out;
    }
    // Spatial path: raw FFT sandwich.  The transform scalar and the
    // centering phases cancel between forward and inverse, leaving 1/N^n.
    detail::dft_inplace(f.grid, out.values.data(), -1);
    const double invNn = 1.0 / static_cast<double>(f.grid.size());
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] *= m[i] * invNn;
    detail::dft_inplace(f.grid, out.values.data(), +1);
    return out;
}

Field laplacian(const Field& f) {
    const auto& xi2 = xi2_table(f.grid);
    const auto& mask = nyquist_mask(f.grid);
    std::vector<Complex> m(xi2.size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = -xi2[i] * mask[i];
    return apply_spectral_multiplier(f, m);
}

Field drop_nyquist(const Field& f) {
    const auto& mask = nyquist_mask(f.grid);
    std::vector<Complex> m(mask.size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = mask[i];
    return apply_spectral_multiplier(f, m);
}

//---------------------------------------------------------------------------
//  CFLD I/O (explicit little-endian encoding)
//---------------------------------------------------------------------------
namespace {

void put_u32(std::string& buf, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}
void put_u64(std::string& buf, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}
void put_f64(std::string& buf, double d) {
    std::uint64_t v;
    std::memcpy(&v, &d, 8);
    put_u64(buf, v);
}

struct ByteReader {
    const unsigned char* p;
    const unsigned char* end;
    void need(std::size_t n) const {
        if (static_cast<std::size_t>(end - p) < n)
            throw std::runtime_error("CFLD: truncated file");
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
        p += 4;
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
        p += 8;
        return v;
    }
    double f64() {
        std::uint64_t v = u64();
        double d;
        std::memcpy(&d, &v, 8);
        return d;
    }
    std::uint8_t u8() {
        need(1);
        return *p++;
    }
};

}  // namespace

void write_cfld(const std::string& path, const Field& f) {
    std::string buf;
    buf.reserve(21 + 16 * f.values.size());
    buf += "CFLD";
    put_u32(buf, 1u);
    put_u32(buf, static_cast<std::uint32_t>(f.grid.n));
    put_u32(buf, static_cast<std::uint32_t>(f.grid.N));
    put_f64(buf, f.grid.L);
    buf.push_back(static_cast<char>(f.rep == Rep::spatial ? 0 : 1));
    for (const auto& v : f.values) {
        put_f64(buf, v.real());
        put_f64(buf, v.imag());
    }
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("CFLD: cannot open for writing: " + path);
    os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!os) throw std::runtime_error("CFLD: write failed: " + path);
}

Field read_cfld(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("CFLD: cannot open: " + path);
    std::string data((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    if (data.size() < 21 || data.compare(0, 4, "CFLD") != 0)
        throw std::runtime_error("CFLD: bad magic: " + path);
    ByteReader r{reinterpret_cast<const unsigned char*>(data.data()) + 4,
                 reinterpret_cast<const unsigned char*>(data.data()) + data.size()};
    const std::uint32_t version = r.u32();
    if (version != 1) throw std::runtime_error("CFLD: unsupported version");
    const int n = static_cast<int>(r.u32());
    const int N = static_cast<int>(r.u32());
    const double L = r.f64();
    const std::uint8_t rep = r.u8();
    if (rep > 1) throw std::runtime_error("CFLD: bad representation flag");
    Field f;
    f.grid = make_grid(n, N, L);
    f.rep = rep == 0 ? Rep::spatial : Rep::spectral;
    f.values.resize(f.grid.size());
    r.need(16 * f.values.size());
    for (auto& v : f.values) {
        const double re = r.f64();
        const double im = r.f64();
        v = Complex(re, im);
    }
    return f;
}

}  // namespace schrec
