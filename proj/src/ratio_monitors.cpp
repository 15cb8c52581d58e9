#include "newtonflow/ratio_monitors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <thread>

#include "newtonflow/norms.hpp"
#include "newtonflow/transforms.hpp"

namespace nwfl {

double hls_ratio(const Field& u, const rational& m, const PaddedKernel& kernel) {
    const RationalOrInf r = hls_conjugate(m);
    double denom = 0.0;
    for (double x : u.v) denom = std::max(denom, std::fabs(x));
    if (denom == 0.0) throw domain_error("hls_ratio: u must be nonzero");
    const Field phi = newtonian_potential(u, kernel);
    const double num = r.is_infinity ? lp_norm(phi, lp_infinity)
                                     : lp_norm(phi, rational_double(r.value));
    const double u2m = lp_norm(u, 2.0 * rational_double(m));
    return num / (u2m * u2m);
}

double kappa(const NonlinearitySpec& spec) { return std::max(spec.q, 3.0); }

double poly_bound_ratio(const NonlinearitySpec& spec, const Field& v, double r,
                        const PaddedKernel& kernel) {
    if (!(r > 1.0)) throw domain_error("poly_bound_ratio: r must be > 1");
    const Field f = apply_nonlinearity(spec, v, kernel);
    const double num = lp_norm(f, r);
    if (spec.kind == Kind::F1) {
        const double v3r = lp_norm(v, 3.0 * r);
        if (v3r == 0.0) throw domain_error("poly_bound_ratio: v must be nonzero for F1");
        return num / (v3r * v3r * v3r);
    }
    const double k = kappa(spec);
    const double vkr = lp_norm(v, k * r);
    return num / (1.0 + std::pow(vkr, k));
}

Field random_band_limited(const Grid& g, int kmax, std::uint64_t seed) {
    if (kmax < 1 || kmax > g.N)
        throw config_error("random_band_limited: kmax must lie in 1..N");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    SpectralField c(g);
    for (int k1 = 1; k1 <= kmax; ++k1)
        for (int k2 = 1; k2 <= kmax; ++k2)
            for (int k3 = 1; k3 <= kmax; ++k3) {
                const std::size_t idx =
                    (static_cast<std::size_t>(k1 - 1) * g.N + (k2 - 1)) * g.N + (k3 - 1);
                c.c[idx] = normal(rng);
            }
    return from_spectral(c);
}

namespace {

int worker_count(int samples) {
    unsigned n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* env = std::getenv("NEWTONFLOW_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    }
    return static_cast<int>(std::min<unsigned>(n, static_cast<unsigned>(samples)));
}

template <typename RatioFn>
EnsembleResult run_ensemble(const Grid& g, const EnsembleParams& p, RatioFn&& ratio) {
    if (p.samples < 1) throw config_error("ensemble: samples must be >= 1");
    EnsembleResult res;
    res.values.assign(p.samples, 0.0);
    // Warm the transform plan for this N on this thread: FFTW planning must
    // not race with concurrent executes in the workers.
    (void)random_band_limited(g, 1, p.seed);
    const int workers = worker_count(p.samples);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (int i = w; i < p.samples; i += workers) {
                const Field u = random_band_limited(g, p.kmax, p.seed + static_cast<std::uint64_t>(i));
                res.values[i] = ratio(u);
            }
        });
    for (auto& t : pool) t.join();
    for (int i = 0; i < p.samples; ++i)
        if (res.argmax < 0 || res.values[i] > res.max) {
            res.max = res.values[i];
            res.argmax = i;
        }
    return res;
}

} // namespace

EnsembleResult ensemble_hls_ratio(const Grid& g, const PaddedKernel& kernel, const rational& m,
                                  const EnsembleParams& p) {
    hls_conjugate(m); // validate m up front, not per worker
    return run_ensemble(g, p, [&](const Field& u) { return hls_ratio(u, m, kernel); });
}

EnsembleResult ensemble_poly_ratio(const Grid& g, const PaddedKernel& kernel,
                                   const NonlinearitySpec& spec, double r,
                                   const EnsembleParams& p) {
    if (!(r > 1.0)) throw domain_error("poly_bound_ratio: r must be > 1");
    return run_ensemble(g, p, [&](const Field& u) { return poly_bound_ratio(spec, u, r, kernel); });
}

double apriori_monitor(const Trajectory& traj, double a, double delta) {
    if (!(a >= 1.0)) throw domain_error("apriori_monitor: a must be >= 1");
    if (a != traj.monitor_a)
        throw domain_error("apriori_monitor: trajectory recorded ||u||_a with a = " +
                           std::to_string(traj.monitor_a) + ", not " + std::to_string(a));
    bool seen = false;
    double sup = 0.0;
    for (const DiagnosticsRecord& r : traj.records)
        if (r.t >= delta) {
            sup = std::max(sup, r.l_a);
            seen = true;
        }
    if (!seen) throw domain_error("apriori_monitor: no records with t >= delta");
    return sup;
}

} // namespace nwfl
