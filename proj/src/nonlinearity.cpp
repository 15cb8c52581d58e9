#include "newtonflow/nonlinearity.hpp"

#include <cmath>
#include <string>

#include "newtonflow/norms.hpp"
#include "newtonflow/transforms.hpp"

namespace nwfl {

const char* kind_name(Kind k) {
    switch (k) {
        case Kind::F1: return "F1";
        case Kind::F2: return "F2";
        case Kind::F3: return "F3";
    }
    return "?";
}

void NonlinearitySpec::validate(bool allow_q_override) const {
    if (!std::isfinite(q)) throw domain_error("NonlinearitySpec: q must be finite");
    if (allow_q_override || kind == Kind::F1) return;
    const double qmax = sobolev_critical - 1.0;
    if (kind == Kind::F2 && !(q > 1.0 && q < qmax))
        throw domain_error("NonlinearitySpec: F2 requires q in (1, " + std::to_string(qmax) +
                           "), got q = " + std::to_string(q));
    if (kind == Kind::F3 && !(q >= 3.0 && q < qmax))
        throw domain_error("NonlinearitySpec: F3 requires q in [3, " + std::to_string(qmax) +
                           "), got q = " + std::to_string(q));
}

namespace {

inline double signed_power(double v, double q) {
    return std::copysign(std::pow(std::fabs(v), q), v);
}

} // namespace

Field apply_nonlinearity(const NonlinearitySpec& spec, const Field& u, const PaddedKernel& kernel) {
    const Field phi = newtonian_potential(u, kernel);
    Field f(u.grid);
    switch (spec.kind) {
        case Kind::F1:
            for (std::size_t i = 0; i < u.v.size(); ++i) f.v[i] = phi.v[i] * u.v[i];
            break;
        case Kind::F2:
            for (std::size_t i = 0; i < u.v.size(); ++i)
                f.v[i] = signed_power(u.v[i], spec.q) + phi.v[i] * u.v[i];
            break;
        case Kind::F3:
            for (std::size_t i = 0; i < u.v.size(); ++i)
                f.v[i] = signed_power(u.v[i], spec.q) - phi.v[i] * u.v[i];
            break;
    }
    if (!all_finite(f.v)) throw numerical_failure("apply_nonlinearity: non-finite result");
    return f;
}

double energy(const NonlinearitySpec& spec, const Field& u, const PaddedKernel& kernel) {
    const double h1 = h1_norm_sq(u);
    const double phi_term = potential_energy_term(u, kernel);
    if (spec.kind == Kind::F1) return 0.5 * h1 - 0.25 * phi_term;
    double p = 0.0;
    for (double x : u.v) p += std::pow(std::fabs(x), spec.q + 1.0);
    const double h = u.grid.h;
    p *= h * h * h;
    const double phi_sign = spec.kind == Kind::F3 ? 0.25 : -0.25;
    return 0.5 * h1 + phi_sign * phi_term - p / (spec.q + 1.0);
}

Field energy_gradient(const NonlinearitySpec& spec, const Field& u, const PaddedKernel& kernel) {
    SpectralField c = to_spectral(u);
    const int N = u.grid.N;
    const double f = M_PI / u.grid.L;
    std::size_t idx = 0;
    for (int k1 = 1; k1 <= N; ++k1)
        for (int k2 = 1; k2 <= N; ++k2)
            for (int k3 = 1; k3 <= N; ++k3, ++idx) {
                const double lam =
                    f * f *
                    (static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2 +
                     static_cast<double>(k3) * k3);
                c.c[idx] *= 1.0 + lam;
            }
    Field g = from_spectral(c);
    const Field fn = apply_nonlinearity(spec, u, kernel);
    for (std::size_t i = 0; i < g.v.size(); ++i) g.v[i] -= fn.v[i];
    return g;
}

double steady_residual(const NonlinearitySpec& spec, const Field& u, const PaddedKernel& kernel) {
    return lp_norm(energy_gradient(spec, u, kernel), 2.0);
}

} // namespace nwfl
