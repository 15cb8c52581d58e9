#include "newtonflow/norms.hpp"

#include <cmath>

#include "newtonflow/transforms.hpp"

namespace nwfl {

double integrate(const Field& u) {
    double s = 0.0;
    for (double x : u.v) s += x;
    const double h = u.grid.h;
    return h * h * h * s;
}

double lp_norm(const Field& u, double r) {
    if (r == lp_infinity) {
        double m = 0.0;
        for (double x : u.v) m = std::max(m, std::fabs(x));
        return m;
    }
    if (!(r >= 1.0)) throw domain_error("lp_norm: r must be >= 1 or infinity");
    double s = 0.0;
    if (r == 2.0) {
        for (double x : u.v) s += x * x;
    } else {
        for (double x : u.v) s += std::pow(std::fabs(x), r);
    }
    const double h = u.grid.h;
    return std::pow(h * h * h * s, 1.0 / r);
}

double h1_norm_sq(const Field& u) {
    const SpectralField c = to_spectral(u);
    const int N = u.grid.N;
    const double f = M_PI / u.grid.L;
    double s = 0.0;
    std::size_t idx = 0;
    for (int k1 = 1; k1 <= N; ++k1)
        for (int k2 = 1; k2 <= N; ++k2)
            for (int k3 = 1; k3 <= N; ++k3, ++idx) {
                const double lam =
                    f * f *
                    (static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2 +
                     static_cast<double>(k3) * k3);
                s += (1.0 + lam) * c.c[idx] * c.c[idx];
            }
    const double half_L = 0.5 * u.grid.L;
    return s * half_L * half_L * half_L;
}

} // namespace nwfl
