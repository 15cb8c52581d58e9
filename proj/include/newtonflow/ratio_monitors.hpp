#pragma once

#include <vector>

#include "newtonflow/integrator.hpp"
#include "newtonflow/potential.hpp"
#include "newtonflow/rational_exponents.hpp"

namespace nwfl {

// ||phi_u||_r / ||u||_{2m}^2 with r = hls_conjugate(m); the empirical side of
// the convolution bound. Invariant under u -> alpha u.
double hls_ratio(const Field& u, const rational& m, const PaddedKernel& kernel);

// kappa = max{q, 3}, the growth exponent of the reaction term.
double kappa(const NonlinearitySpec& spec);

// F1: ||F1(v)||_r / ||v||_{3r}^3 (scale invariant).
// F2/F3: ||F_i(v)||_r / (1 + ||v||_{kappa r}^kappa).
double poly_bound_ratio(const NonlinearitySpec& spec, const Field& v, double r,
                        const PaddedKernel& kernel);

// Band-limited field with independent standard normal coefficients on modes
// {1..kmax}^3. Deterministic for a fixed seed and standard library build.
Field random_band_limited(const Grid& g, int kmax, std::uint64_t seed);

struct EnsembleParams {
    int samples = 100;
    int kmax = 8;
    std::uint64_t seed = 12345;
};

// Per-sample ratios (sample i uses seed + i) and their maximum, the empirical
// constant of the bound. Samples may fan out across workers
// (NEWTONFLOW_THREADS caps the count); the reduction is in index order, so
// results do not depend on the worker count.
struct EnsembleResult {
    std::vector<double> values;
    double max = 0.0;
    int argmax = -1;
};

EnsembleResult ensemble_hls_ratio(const Grid& g, const PaddedKernel& kernel, const rational& m,
                                  const EnsembleParams& p);
EnsembleResult ensemble_poly_ratio(const Grid& g, const PaddedKernel& kernel,
                                   const NonlinearitySpec& spec, double r,
                                   const EnsembleParams& p);

// sup over records with t >= delta of the recorded ||u||_a column. The
// trajectory must have been recorded with monitor_a = a; an empty window is
// rejected.
double apriori_monitor(const Trajectory& traj, double a, double delta);

} // namespace nwfl
