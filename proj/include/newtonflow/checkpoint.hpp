#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "newtonflow/grid.hpp"
#include "newtonflow/integrator.hpp"
#include "newtonflow/nonlinearity.hpp"

namespace nwfl {

// Bit-exact binary snapshot, little-endian:
//   magic "NWFL" | version u32 | N u32 | L f64 | kind u8 | q f64
//   | t f64 | dt f64 (last accepted)
//   | dt_next f64 | step_count u64 | record_index u64 (controller state)
//   | config_digest u64 (physics keys only; paths and checkpoint cadence
//     excluded) | N^3 f64 field values in node index order.
// load(save(c)) is the identity on every byte.
struct Checkpoint {
    static constexpr std::uint32_t current_version = 1;

    std::uint32_t version = current_version;
    std::uint32_t N = 0;
    double L = 0.0;
    std::uint8_t kind = 1;
    double q = 0.0;
    double t = 0.0;
    double dt = 0.0;
    double dt_next = 0.0;
    std::uint64_t step_count = 0;
    std::uint64_t record_index = 0;
    std::uint64_t config_digest = 0;
    std::vector<double> values;
};

void save_checkpoint(const std::string& path, const Checkpoint& c);
Checkpoint load_checkpoint(const std::string& path);

Checkpoint make_checkpoint(const Grid& g, const NonlinearitySpec& spec, const FlowState& st,
                           double dt_next, std::uint64_t record_index, std::uint64_t digest);

// Rebuilds the resume state; the grid and spec must match the checkpoint.
ResumePoint resume_point(const Checkpoint& c, const Grid& g);

} // namespace nwfl
