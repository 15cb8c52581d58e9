#pragma once

#include <limits>

#include "newtonflow/grid.hpp"

namespace nwfl {

// Quadrature rule h^3 * sum over interior nodes (Dirichlet endpoint terms
// vanish). Exact for products of low sine modes.
double integrate(const Field& u);

// (integrate |u|^r)^(1/r) for finite r >= 1, max|u| for r = infinity.
// r < 1 is rejected.
double lp_norm(const Field& u, double r);

inline constexpr double lp_infinity = std::numeric_limits<double>::infinity();

// ||u||_{1,2}^2 = integral of |grad u|^2 + u^2, computed spectrally as
// sum_k (1 + lambda_k) c_k^2 (L/2)^3.
double h1_norm_sq(const Field& u);

} // namespace nwfl
