#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "newtonflow/nonlinearity.hpp"

namespace nwfl {

struct FlowState {
    double t = 0.0;
    Field u;
    double dt = 0.0; // last accepted step size
    std::uint64_t step_count = 0;
};

// One diagnostics row. diss_residual is the record-to-record check of
// dE/dt = -||u_t||_2^2: |dE/Dt + ||Du/Dt||_2^2| over the interval since the
// previous record (0 at the first record). The properly resolved order study
// of that identity lives in the fixed-dt verification suite.
struct DiagnosticsRecord {
    double t = 0.0;
    double dt = 0.0;
    double E = 0.0;
    double l2 = 0.0;
    double h1 = 0.0; // ||u||_{1,2}
    double sup = 0.0;
    double l_qp1 = 0.0;
    double l_a = 0.0;
    double phi_term = 0.0;
    double diss_residual = 0.0;
};

enum class ExitStatus : std::uint8_t { ReachedFinalTime = 0, BlowUp = 1, NumericalFailure = 2 };

const char* exit_name(ExitStatus e);

struct Trajectory {
    std::vector<DiagnosticsRecord> records;
    ExitStatus exit = ExitStatus::ReachedFinalTime;
    double t_final = 0.0;   // numerical stand-in for the maximal existence time
    double monitor_a = 0.0; // exponent the l_a column was recorded with
};

struct RunParams {
    NonlinearitySpec spec;
    double dt0 = 1e-3;
    double t_end = 10.0;
    double rtol = 1e-6;
    double atol = 1e-9;
    double sup_blowup = 1e6;
    double dt_min = 1e-12;
    double record_every = 0.25;
    double monitor_a = 3.5;
    int dealias_cut = 0; // if > 0, truncate F_i to modes with k_i <= cut
};

// Exponential Euler update with a frozen forcing field F: per mode k with
// a_k = 1 + lambda_k,
//   c_k <- exp(-a_k dt) c_k + (1 - exp(-a_k dt))/a_k * Fhat_k.
// Exact for the linear semigroup when F = 0.
Field etd_apply(const Field& u, const Field& F, double dt);

// One ETD step of u_t = -(-Lap u + u - F_i(u)) with F_i frozen at the
// current state. Throws numerical_failure on non-finite results.
FlowState etd_step(const FlowState& s, const NonlinearitySpec& spec, const PaddedKernel& kernel,
                   double dt);

// Controller state at a record boundary, sufficient to resume the adaptive
// run bitwise identically (the semiflow property).
struct RecordEvent {
    const DiagnosticsRecord& rec;
    const FlowState& state;
    double dt_next;
    std::uint64_t record_index;
};
using RecordSink = std::function<void(const RecordEvent&)>;

struct ResumePoint {
    FlowState state;
    double dt_next = 0.0;
    std::uint64_t record_index = 0;
};

// Step-doubling adaptive ETD driver. One dt step against two dt/2 steps,
// e = ||u_big - u_small||_2 / (atol + rtol ||u_small||_2), accept iff e <= 1,
// dt <- dt * clamp(0.9 e^{-1/2}, 0.2, 5). Steps land exactly on the record
// grid k * record_every and on t_end. Records are emitted at t = 0, at every
// boundary, at t_end, and at the blow-up trigger. Exits: ReachedFinalTime,
// BlowUp (sup > sup_blowup or controller dt < dt_min), NumericalFailure (NaN).
Trajectory adaptive_run(const Field& u0, const RunParams& p, const PaddedKernel& kernel,
                        const RecordSink& sink = {});

// Continuation from a record boundary; emits only records strictly after the
// resume time. Produces the same records as the uninterrupted run, bitwise.
Trajectory adaptive_run_resumed(const ResumePoint& rp, const RunParams& p,
                                const PaddedKernel& kernel, const RecordSink& sink = {});

} // namespace nwfl
