#pragma once

#include <complex>
#include <vector>

#include "newtonflow/grid.hpp"

namespace nwfl {

// Exact cell-average of 1/|x| over the unit cube [-1/2,1/2]^3:
// 6 ln((1+sqrt(3))/sqrt(2)) - pi/2. Used for the singular kernel cell so the
// discrete convolution stays second-order accurate.
double singular_cell_constant();

// Raw kernel sample at integer node offset d: 1/(h|d|) for d != 0 (the
// physical Euclidean node distance), c0/h at the origin.
double kernel_sample(const Grid& g, int dx, int dy, int dz);

// 1/|x| kernel sampled on the (2N+2)^3 periodic padded grid and transformed
// once. Padding to twice the node count makes the circular convolution equal
// the linear convolution over the zero-extended density, so the potential is
// the free-space one restricted to the box. Immutable after construction and
// shareable across concurrent simulations.
class PaddedKernel {
  public:
    explicit PaddedKernel(const Grid& g);

    const Grid& grid() const { return grid_; }
    int padded_size() const { return M_; }
    double c0() const { return c0_; }

    // K * rho at the interior nodes, i.e. h^3 sum_j K(x_i - y_j) rho_j.
    // Linear in rho; exposed so bilinearity is testable directly.
    Field convolve_density(const Field& rho) const;

  private:
    Grid grid_;
    int M_;
    double c0_;
    // Spectral kernel with the h^3 quadrature weight and the 1/M^3 inverse
    // FFT normalization folded in.
    std::vector<std::complex<double>> khat_;
};

// phi_u(x) = integral of u^2(y)/|x-y| dy at the grid nodes; nonnegative.
Field newtonian_potential(const Field& u, const PaddedKernel& kernel);

// O(N^6) direct summation oracle with the identical kernel samples.
// Refused for N > 16.
Field newtonian_potential_direct(const Field& u);

// integrate(phi_u * u^2), the energy pairing without its 1/4 coefficient.
double potential_energy_term(const Field& u, const PaddedKernel& kernel);

} // namespace nwfl
