//==============================================================================
//  fft.cpp -- FFTW backend for the grid transforms.
//
//  Plans are cached per (n, N, sign) behind a mutex and created with
//  FFTW_ESTIMATE | FFTW_UNALIGNED: ESTIMATE keeps plan selection deterministic
//  (bit-identical outputs across runs), UNALIGNED lets one plan execute on any
//  caller buffer via the new-array interface.  fftw_execute_dft on distinct
//  buffers is thread-safe; only plan creation is serialized.
//==============================================================================
#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include "schrec/grid.hpp"

namespace schrec::detail {

namespace {

struct PlanCache {
    std::mutex mu;
    std::map<std::tuple<int, int, int>, fftw_plan> plans;

    fftw_plan get(const Grid& g, int sign) {
        std::lock_guard<std::mutex> lock(mu);
        auto key = std::make_tuple(g.n, g.N, sign);
        auto it = plans.find(key);
        if (it != plans.end()) return it->second;

        std::vector<Complex> scratch(g.size());
        int dims[3] = {g.N, g.N, g.N};
        fftw_plan p = fftw_plan_dft(
            g.n, dims, reinterpret_cast<fftw_complex*>(scratch.data()),
            reinterpret_cast<fftw_complex*>(scratch.data()),
            sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
            FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (!p) throw std::runtime_error("fftw plan creation failed");
        plans.emplace(key, p);
        return p;
    }
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

}  // namespace

void dft_inplace(const Grid& g, Complex* data, int sign) {
    fftw_plan p = cache().get(g, sign);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(data),
                     reinterpret_cast<fftw_complex*>(data));
}

}  // namespace schrec::detail
