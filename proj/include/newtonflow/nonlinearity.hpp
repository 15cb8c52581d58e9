#pragma once

#include <cstdint>

#include "newtonflow/grid.hpp"
#include "newtonflow/potential.hpp"

namespace nwfl {

// Sobolev critical exponent 2* in three dimensions; admissible power
// exponents live below 2* - 1 = 5.
inline constexpr double sobolev_critical = 6.0;

enum class Kind : std::uint8_t { F1 = 1, F2 = 2, F3 = 3 };

const char* kind_name(Kind k);

// Selects the reaction term and its energy:
//   F1(u) = phi_u u
//   F2(u) = |u|^(q-1) u + phi_u u,   q in (1, 2*-1)
//   F3(u) = |u|^(q-1) u - phi_u u,   q in [3, 2*-1)
// q is ignored by F1's reaction term but still used for the |u|^(q+1)
// diagnostics column. All three maps are odd.
struct NonlinearitySpec {
    Kind kind = Kind::F1;
    double q = 3.0;

    // Throws domain_error outside the admissible q range unless
    // allow_q_override is set (exploration escape hatch).
    void validate(bool allow_q_override = false) const;
};

// Pointwise F_i(u) at the nodes; |u|^(q-1)u evaluated as sign(u)|u|^q.
Field apply_nonlinearity(const NonlinearitySpec& spec, const Field& u, const PaddedKernel& kernel);

// E1(u) = 1/2 ||u||_{1,2}^2 - 1/4 int phi_u u^2
// E2(u) = E1(u) - 1/(q+1) int |u|^(q+1)
// E3(u) = 1/2 ||u||_{1,2}^2 + 1/4 int phi_u u^2 - 1/(q+1) int |u|^(q+1)
double energy(const NonlinearitySpec& spec, const Field& u, const PaddedKernel& kernel);

// L^2 gradient g = -Lap u + u - F_i(u); the flow u_t = -g descends E_i.
Field energy_gradient(const NonlinearitySpec& spec, const Field& u, const PaddedKernel& kernel);

// ||energy_gradient||_2, the elliptic steady-state residual.
double steady_residual(const NonlinearitySpec& spec, const Field& u, const PaddedKernel& kernel);

} // namespace nwfl
