#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "newtonflow/errors.hpp"

namespace nwfl {

// Discretization of the box (0,L)^3 with homogeneous Dirichlet boundary.
// Interior nodes x_j = j*h, j = 1..N per axis, h = L/(N+1); boundary values
// are implicitly zero and never stored.
struct Grid {
    double L = 0.0;
    int N = 0;
    double h = 0.0;

    Grid() = default;
    Grid(double L_, int N_) : L(L_), N(N_), h(L_ / (N_ + 1)) {
        if (N < 2) throw config_error("Grid: N must be >= 2");
        if (!(L > 0.0)) throw config_error("Grid: L must be > 0");
    }

    std::size_t size() const { return static_cast<std::size_t>(N) * N * N; }
    // Physical coordinate of interior node index i in 0..N-1 (node j = i+1).
    double node(int i) const { return (i + 1) * h; }

    friend bool operator==(const Grid& a, const Grid& b) {
        return a.L == b.L && a.N == b.N;
    }
    friend bool operator!=(const Grid& a, const Grid& b) { return !(a == b); }
};

// Real scalar field sampled at the interior nodes.
// Index order ((ix*N)+iy)*N+iz, iz fastest.
struct Field {
    Grid grid;
    std::vector<double> v;

    Field() = default;
    explicit Field(const Grid& g) : grid(g), v(g.size(), 0.0) {}
    Field(const Grid& g, std::vector<double> values) : grid(g), v(std::move(values)) {
        if (v.size() != g.size()) throw config_error("Field: value count does not match grid");
    }

    double& at(int ix, int iy, int iz) {
        return v[(static_cast<std::size_t>(ix) * grid.N + iy) * grid.N + iz];
    }
    double at(int ix, int iy, int iz) const {
        return v[(static_cast<std::size_t>(ix) * grid.N + iy) * grid.N + iz];
    }
};

// Coefficients of the sine eigenbasis prod_i sin(pi k_i x_i / L),
// mode index k = (k1,k2,k3) in {1..N}^3 stored at ((k1-1)*N+(k2-1))*N+(k3-1).
struct SpectralField {
    Grid grid;
    std::vector<double> c;

    SpectralField() = default;
    explicit SpectralField(const Grid& g) : grid(g), c(g.size(), 0.0) {}
};

inline void require_same_grid(const Grid& a, const Grid& b, const char* where) {
    if (a != b) throw config_error(std::string(where) + ": grid mismatch");
}

inline bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

} // namespace nwfl
