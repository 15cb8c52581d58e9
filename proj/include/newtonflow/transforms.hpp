#pragma once

#include <array>

#include "newtonflow/grid.hpp"

namespace nwfl {

// Type-I discrete sine transform pair on the interior nodes.
// Conventions, with S = unnormalized 3D DST-I (FFTW RODFT00, logical size N+1):
//   to_spectral:   c = S(u) / (N+1)^3
//   from_spectral: u = S(c) / 8
// so that u(x_j) = sum_k c_k prod_i sin(pi k_i x_j / L) exactly, and
// integrate(u^2) = sum_k c_k^2 (L/2)^3 (discrete Parseval).
SpectralField to_spectral(const Field& u);
Field from_spectral(const SpectralField& c);

// Spectral projection onto modes with every k_i <= kmax (the 2/3-rule
// dealiasing cut when kmax = 2(N+1)/3). Idempotent.
Field truncate_modes(const Field& u, int kmax);

// Dirichlet Laplacian eigenvalue of mode k: (pi/L)^2 (k1^2 + k2^2 + k3^2).
inline double laplacian_symbol(const std::array<int, 3>& k, const Grid& g) {
    const double f = M_PI / g.L;
    const double s = static_cast<double>(k[0]) * k[0] + static_cast<double>(k[1]) * k[1] +
                     static_cast<double>(k[2]) * k[2];
    return f * f * s;
}

} // namespace nwfl
