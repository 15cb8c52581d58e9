#include "newtonflow/transforms.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace nwfl {
namespace {

// FFTW RODFT00 plans per N, created once with FFTW_ESTIMATE so planning is
// deterministic and independent of input data. FFTW_UNALIGNED lets the plan
// execute on caller-owned std::vector storage.
class DstPlanCache {
  public:
    static fftw_plan get(int N) {
        static DstPlanCache cache;
        std::lock_guard<std::mutex> lock(cache.mu_);
        auto it = cache.plans_.find(N);
        if (it != cache.plans_.end()) return it->second;
        const std::size_t n = static_cast<std::size_t>(N) * N * N;
        double* buf = fftw_alloc_real(n);
        fftw_plan p = fftw_plan_r2r_3d(N, N, N, buf, buf, FFTW_RODFT00, FFTW_RODFT00,
                                       FFTW_RODFT00, FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(buf);
        cache.plans_.emplace(N, p);
        return p;
    }

  private:
    DstPlanCache() = default;
    ~DstPlanCache() {
        for (auto& [N, p] : plans_) fftw_destroy_plan(p);
    }
    std::mutex mu_;
    std::map<int, fftw_plan> plans_;
};

void dst3(const Grid& g, const double* in, double* out) {
    fftw_execute_r2r(DstPlanCache::get(g.N), const_cast<double*>(in), out);
}

} // namespace

SpectralField to_spectral(const Field& u) {
    if (u.v.size() != u.grid.size())
        throw config_error("to_spectral: value count does not match grid");
    SpectralField c(u.grid);
    dst3(u.grid, u.v.data(), c.c.data());
    const double np1 = u.grid.N + 1.0;
    const double scale = 1.0 / (np1 * np1 * np1);
    for (double& x : c.c) x *= scale;
    return c;
}

Field from_spectral(const SpectralField& c) {
    if (c.c.size() != c.grid.size())
        throw config_error("from_spectral: coefficient count does not match grid");
    Field u(c.grid);
    dst3(c.grid, c.c.data(), u.v.data());
    for (double& x : u.v) x *= 0.125;
    return u;
}

Field truncate_modes(const Field& u, int kmax) {
    if (kmax < 1) throw config_error("truncate_modes: kmax must be >= 1");
    if (kmax >= u.grid.N) return u;
    SpectralField c = to_spectral(u);
    const int N = u.grid.N;
    std::size_t idx = 0;
    for (int k1 = 1; k1 <= N; ++k1)
        for (int k2 = 1; k2 <= N; ++k2)
            for (int k3 = 1; k3 <= N; ++k3, ++idx)
                if (k1 > kmax || k2 > kmax || k3 > kmax) c.c[idx] = 0.0;
    return from_spectral(c);
}

} // namespace nwfl
