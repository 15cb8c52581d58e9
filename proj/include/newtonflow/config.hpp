#pragma once

#include <cstdint>
#include <string>

#include "newtonflow/initial_data.hpp"
#include "newtonflow/integrator.hpp"

namespace nwfl {

// Line-oriented `key = value` configuration with `#` comments. Every module
// range constraint is revalidated at load time; violations name the key and
// its line. Defaults below apply to omitted keys.
struct RunConfig {
    NonlinearitySpec spec;           // nonlinearity = F1|F2|F3, q = real
    bool allow_q_override = false;   // escape hatch for q outside the admissible interval
    double L = M_PI;
    int N = 32;
    InitialData initial;             // initial = zero|mode(...)|modes(...)|gaussian(...)
    double dt0 = 1e-3;
    double t_end = 10.0;
    double rtol = 1e-6;
    double atol = 1e-9;
    double sup_blowup = 1e6;
    double dt_min = 1e-12;
    double record_every = 0.25;
    double checkpoint_every = 0.0;   // 0 disables checkpoint writing
    double monitor_a = 3.5;
    std::uint64_t seed = 12345;
    bool dealias = false;            // 2/3-rule truncation of the reaction term
    std::string csv_path = "run.csv";
    std::string checkpoint_path;     // filename prefix; empty disables
};

RunConfig parse_config(const std::string& text);
RunConfig load_config_file(const std::string& path);

Grid make_grid(const RunConfig& cfg);
RunParams make_run_params(const RunConfig& cfg);

// Canonical serialization of the physics-relevant keys (paths excluded) and
// its FNV-1a 64 digest; a resumed run must match the checkpoint's digest.
std::string config_digest_string(const RunConfig& cfg);
std::uint64_t config_digest(const RunConfig& cfg);

std::uint64_t fnv1a64(const std::string& bytes);

} // namespace nwfl
