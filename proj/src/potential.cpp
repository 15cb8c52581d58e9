#include "newtonflow/potential.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>

#include "newtonflow/norms.hpp"

namespace nwfl {
namespace {

struct FftPlans {
    fftw_plan fwd;  // real M^3 -> complex M^2 (M/2+1)
    fftw_plan bwd;  // inverse, destroys its complex input
};

class PaddedFftCache {
  public:
    static FftPlans get(int M) {
        static PaddedFftCache cache;
        std::lock_guard<std::mutex> lock(cache.mu_);
        auto it = cache.plans_.find(M);
        if (it != cache.plans_.end()) return it->second;
        const std::size_t nr = static_cast<std::size_t>(M) * M * M;
        const std::size_t nc = static_cast<std::size_t>(M) * M * (M / 2 + 1);
        double* rbuf = fftw_alloc_real(nr);
        fftw_complex* cbuf = fftw_alloc_complex(nc);
        FftPlans p;
        p.fwd = fftw_plan_dft_r2c_3d(M, M, M, rbuf, cbuf, FFTW_ESTIMATE | FFTW_UNALIGNED);
        p.bwd = fftw_plan_dft_c2r_3d(M, M, M, cbuf, rbuf, FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(cbuf);
        fftw_free(rbuf);
        cache.plans_.emplace(M, p);
        return p;
    }

  private:
    PaddedFftCache() = default;
    ~PaddedFftCache() {
        for (auto& [M, p] : plans_) {
            fftw_destroy_plan(p.fwd);
            fftw_destroy_plan(p.bwd);
        }
    }
    std::mutex mu_;
    std::map<int, FftPlans> plans_;
};

inline std::size_t cplx_count(int M) {
    return static_cast<std::size_t>(M) * M * (M / 2 + 1);
}

Field square_pointwise(const Field& u) {
    Field rho(u.grid);
    for (std::size_t i = 0; i < u.v.size(); ++i) rho.v[i] = u.v[i] * u.v[i];
    return rho;
}

} // namespace

double singular_cell_constant() {
    return 6.0 * std::log((1.0 + std::sqrt(3.0)) / std::sqrt(2.0)) - M_PI / 2.0;
}

double kernel_sample(const Grid& g, int dx, int dy, int dz) {
    const double r2 = static_cast<double>(dx) * dx + static_cast<double>(dy) * dy +
                      static_cast<double>(dz) * dz;
    if (r2 == 0.0) return singular_cell_constant() / g.h;
    return 1.0 / (g.h * std::sqrt(r2));
}

PaddedKernel::PaddedKernel(const Grid& g)
    : grid_(g), M_(2 * g.N + 2), c0_(singular_cell_constant()) {
    const int M = M_;
    std::vector<double> K(static_cast<std::size_t>(M) * M * M);
    auto offset = [M](int i) { return i <= M / 2 ? i : i - M; };
    std::size_t idx = 0;
    for (int i = 0; i < M; ++i) {
        const int ox = offset(i);
        for (int j = 0; j < M; ++j) {
            const int oy = offset(j);
            for (int k = 0; k < M; ++k, ++idx) K[idx] = kernel_sample(g, ox, oy, offset(k));
        }
    }
    khat_.resize(cplx_count(M));
    FftPlans plans = PaddedFftCache::get(M);
    fftw_execute_dft_r2c(plans.fwd, K.data(), reinterpret_cast<fftw_complex*>(khat_.data()));
    const double scale = g.h * g.h * g.h / (static_cast<double>(M) * M * M);
    for (auto& z : khat_) z *= scale;
}

Field PaddedKernel::convolve_density(const Field& rho) const {
    require_same_grid(rho.grid, grid_, "convolve_density");
    const int N = grid_.N;
    const int M = M_;
    std::vector<double> pad(static_cast<std::size_t>(M) * M * M, 0.0);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            const double* src = &rho.v[(static_cast<std::size_t>(i) * N + j) * N];
            double* dst = &pad[(static_cast<std::size_t>(i) * M + j) * M];
            for (int k = 0; k < N; ++k) dst[k] = src[k];
        }
    std::vector<std::complex<double>> spec(cplx_count(M));
    FftPlans plans = PaddedFftCache::get(M);
    fftw_execute_dft_r2c(plans.fwd, pad.data(), reinterpret_cast<fftw_complex*>(spec.data()));
    for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= khat_[i];
    fftw_execute_dft_c2r(plans.bwd, reinterpret_cast<fftw_complex*>(spec.data()), pad.data());
    Field phi(grid_);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            const double* src = &pad[(static_cast<std::size_t>(i) * M + j) * M];
            double* dst = &phi.v[(static_cast<std::size_t>(i) * N + j) * N];
            for (int k = 0; k < N; ++k) dst[k] = src[k];
        }
    return phi;
}

Field newtonian_potential(const Field& u, const PaddedKernel& kernel) {
    require_same_grid(u.grid, kernel.grid(), "newtonian_potential");
    if (!all_finite(u.v)) throw numerical_failure("newtonian_potential: non-finite input field");
    return kernel.convolve_density(square_pointwise(u));
}

Field newtonian_potential_direct(const Field& u) {
    const int N = u.grid.N;
    if (N > 16)
        throw config_error("newtonian_potential_direct: refused for N > 16 (O(N^6) cost)");
    const Field rho = square_pointwise(u);
    const double h3 = u.grid.h * u.grid.h * u.grid.h;
    Field phi(u.grid);
    for (int ix = 0; ix < N; ++ix)
        for (int iy = 0; iy < N; ++iy)
            for (int iz = 0; iz < N; ++iz) {
                double s = 0.0;
                std::size_t j = 0;
                for (int jx = 0; jx < N; ++jx)
                    for (int jy = 0; jy < N; ++jy)
                        for (int jz = 0; jz < N; ++jz, ++j)
                            s += kernel_sample(u.grid, ix - jx, iy - jy, iz - jz) * rho.v[j];
                phi.at(ix, iy, iz) = h3 * s;
            }
    return phi;
}

double potential_energy_term(const Field& u, const PaddedKernel& kernel) {
    const Field phi = newtonian_potential(u, kernel);
    double s = 0.0;
    for (std::size_t i = 0; i < u.v.size(); ++i) s += phi.v[i] * u.v[i] * u.v[i];
    const double h = u.grid.h;
    return h * h * h * s;
}

} // namespace nwfl
