#pragma once

#include <array>
#include <string>
#include <vector>

#include "newtonflow/grid.hpp"

namespace nwfl {

struct ModeAmp {
    std::array<int, 3> k{1, 1, 1};
    double amp = 0.0;
};

// Initial-data descriptor: zero, a finite sum of sine modes, or a Gaussian
// bump multiplied by the (1,1,1) sine envelope so the boundary data stays
// Dirichlet. Textual forms accepted by parse_initial:
//   zero
//   mode(k1,k2,k3,amp)
//   modes(k1,k2,k3,amp; k1,k2,k3,amp; ...)
//   gaussian(width,amp)
struct InitialData {
    enum class Shape { Zero, Modes, Gaussian };
    Shape shape = Shape::Zero;
    std::vector<ModeAmp> modes;
    double gauss_width = 20.0;
    double gauss_amp = 0.5;
};

Field build_initial(const InitialData& d, const Grid& g);

// Multiplies every amplitude by s (amplitude sweeps rescale this way).
InitialData scaled(InitialData d, double s);

// Canonical descriptor round-trippable through parse_initial; feeds the
// checkpoint config digest.
std::string describe(const InitialData& d);
InitialData parse_initial(const std::string& text);

} // namespace nwfl
