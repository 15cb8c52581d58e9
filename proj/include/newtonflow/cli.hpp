#pragma once

#include <iosfwd>
#include <string>

#include "newtonflow/config.hpp"
#include "newtonflow/rational_exponents.hpp"

namespace nwfl {

// Process exit codes shared by every subcommand. Each termination path maps
// to exactly one of these.
inline constexpr int exit_ok = 0;
inline constexpr int exit_check_failed = 1; // verify suite had failing checks
inline constexpr int exit_blowup = 2;
inline constexpr int exit_config = 3;
inline constexpr int exit_numerical = 4;
inline constexpr int exit_io = 5;

int exit_code_for(ExitStatus e);

// CSV contract: this exact header, rows in %.17g.
std::string csv_header();
std::string csv_row(const DiagnosticsRecord& r);

// Integrates per the config, streaming records to csv_path and checkpoints to
// checkpoint_path (one file per checkpoint_every time units). With a resume
// checkpoint the run continues from its state after verifying the config
// digest, emitting only records strictly after the resume time.
int cmd_run(const RunConfig& cfg, const std::string& resume_path = "", std::ostream* log = nullptr);

// Oracle suites: potential, gradient, dissipation, semiflow, lab. Prints one
// line per check; returns exit_ok or exit_check_failed.
int cmd_verify(const std::string& suite, std::ostream& out);

// Fixed-dt study of the dissipation identity dE/dt = -||u_t||_2^2. For each
// dt the residual is the maximum over the common sample times (every
// sample_stride time units) of |dE/dt + ||u_t||_2^2| with both derivatives
// central; the two observed orders are log2 ratios of successive residuals.
struct DissipationStudy {
    double residual[3] = {0, 0, 0}; // at dts[0] > dts[1] > dts[2]
    double order_coarse = 0.0;      // log2(residual[0] / residual[1])
    double order_fine = 0.0;        // log2(residual[1] / residual[2])
};
DissipationStudy dissipation_orders(const NonlinearitySpec& spec, const PaddedKernel& kernel,
                                    const Field& u0, double T, const double (&dts)[3],
                                    double sample_stride);

struct SweepResult {
    double amp_lo = 0.0, amp_hi = 0.0;   // final bracket
    ExitStatus exit_lo = ExitStatus::ReachedFinalTime;
    ExitStatus exit_hi = ExitStatus::ReachedFinalTime;
    double energy_lo = 0.0, energy_hi = 0.0; // E_i(u0) at the bracket endpoints
    double t_final_hi = 0.0;                 // termination time of the blow-up side
    int runs = 0;
};

// Bisects the amplitude scale applied to the configured initial data between
// a global-looking run (exit 0) and a blow-up-classified one (exit 2).
// Endpoints classifying identically is a config_error; a NumericalFailure
// run aborts with numerical_failure.
SweepResult cmd_sweep(const RunConfig& cfg, double amp_lo, double amp_hi, double tol,
                      std::ostream& out);

// Inputs for the inequality report: ensemble sizes, the HLS exponent m, the
// Lebesgue exponent r of the reaction-term bound, and the exact-rational
// bootstrap inputs. Parsed from the same key = value format.
struct LabConfig {
    int N = 32;
    double L = M_PI;
    int samples = 100;
    int kmax = 8;
    std::uint64_t seed = 12345;
    std::string m = "6/5";
    double r = 2.0;
    NonlinearitySpec spec{Kind::F1, 3.0};
    std::string q_rat = "3";
    std::string beta = "2";
    std::string h = "1";
    std::string a; // empty: midpoint of (2, a_of_beta)
    std::string csv_path = "lab_ratios.csv";
};

LabConfig parse_lab_config(const std::string& text);
LabConfig load_lab_config_file(const std::string& path);

// Plain-text report of the exponent calculus plus Monte-Carlo ratio maxima;
// writes the per-sample ratio CSV.
int cmd_lab(const LabConfig& cfg, std::ostream& out);

} // namespace nwfl
