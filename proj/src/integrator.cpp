#include "newtonflow/integrator.hpp"

#include <algorithm>
#include <cmath>

#include "newtonflow/norms.hpp"
#include "newtonflow/transforms.hpp"

namespace nwfl {

const char* exit_name(ExitStatus e) {
    switch (e) {
        case ExitStatus::ReachedFinalTime: return "ReachedFinalTime";
        case ExitStatus::BlowUp: return "BlowUp";
        case ExitStatus::NumericalFailure: return "NumericalFailure";
    }
    return "?";
}

Field etd_apply(const Field& u, const Field& F, double dt) {
    require_same_grid(u.grid, F.grid, "etd_apply");
    SpectralField cu = to_spectral(u);
    const SpectralField cf = to_spectral(F);
    const int N = u.grid.N;
    const double f = M_PI / u.grid.L;
    std::size_t idx = 0;
    for (int k1 = 1; k1 <= N; ++k1)
        for (int k2 = 1; k2 <= N; ++k2)
            for (int k3 = 1; k3 <= N; ++k3, ++idx) {
                const double a =
                    1.0 + f * f *
                              (static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2 +
                               static_cast<double>(k3) * k3);
                const double decay = std::exp(-a * dt);
                cu.c[idx] = decay * cu.c[idx] + (-std::expm1(-a * dt)) / a * cf.c[idx];
            }
    return from_spectral(cu);
}

FlowState etd_step(const FlowState& s, const NonlinearitySpec& spec, const PaddedKernel& kernel,
                   double dt) {
    if (!(dt > 0.0)) throw domain_error("etd_step: dt must be > 0");
    const Field F = apply_nonlinearity(spec, s.u, kernel);
    Field next = etd_apply(s.u, F, dt);
    if (!all_finite(next.v)) throw numerical_failure("etd_step: non-finite state");
    return FlowState{s.t + dt, std::move(next), dt, s.step_count + 1};
}

namespace {

double l2_diff(const Field& a, const Field& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.v.size(); ++i) {
        const double d = a.v[i] - b.v[i];
        s += d * d;
    }
    const double h = a.grid.h;
    return std::sqrt(h * h * h * s);
}

class Driver {
  public:
    Driver(const RunParams& p, const PaddedKernel& kernel, const RecordSink& sink)
        : p_(p), kern_(kernel), sink_(sink) {
        p_.spec.validate(true);
        if (!(p_.record_every > 0.0)) throw config_error("adaptive_run: record_every must be > 0");
        if (!(p_.t_end > 0.0)) throw config_error("adaptive_run: t_end must be > 0");
        traj_.monitor_a = p_.monitor_a;
    }

    Trajectory run(FlowState st, double dt_next, std::uint64_t record_index, bool fresh) {
        if (!all_finite(st.u.v)) return leave(ExitStatus::NumericalFailure, st.t);
        if (fresh) {
            if (!emit(st, dt_next, record_index, /*have_prev=*/false))
                return leave(ExitStatus::NumericalFailure, st.t);
        } else {
            prev_t_ = st.t;
            prev_E_ = energy(p_.spec, st.u, kern_);
            prev_u_ = st.u;
            have_prev_ = true;
        }

        while (st.t < p_.t_end) {
            const double boundary = p_.record_every * static_cast<double>(record_index + 1);
            const double stop = std::min(p_.t_end, boundary);
            double dt_try = dt_next;
            bool clipped = false;
            // Land exactly on the stop; absorb float-sized leftovers into this
            // step so the controller never sees a degenerate gap.
            if (st.t + dt_try >= stop || stop - st.t <= dt_try * (1.0 + 1e-8)) {
                dt_try = stop - st.t;
                clipped = true;
            }

            // A non-finite trial (overflow within the attempted step) is a
            // rejection at maximal shrink, not a failure: blow-ups then end
            // via the dt_min criterion instead of a spurious NaN exit.
            bool trial_ok = true;
            Field big, small;
            try {
                const Field F0 = forcing(st.u);
                big = etd_apply(st.u, F0, dt_try);
                const Field half = etd_apply(st.u, F0, 0.5 * dt_try);
                const Field Fh = forcing(half);
                small = etd_apply(half, Fh, 0.5 * dt_try);
                trial_ok = all_finite(small.v) && all_finite(big.v);
            } catch (const numerical_failure&) {
                trial_ok = false;
            }

            bool accept = false;
            double factor = 0.2;
            if (trial_ok) {
                const double err = l2_diff(big, small);
                const double scale = p_.atol + p_.rtol * lp_norm(small, 2.0);
                const double e = scale > 0.0 ? err / scale : 0.0;
                accept = e <= 1.0;
                factor = e > 0.0 ? std::clamp(0.9 / std::sqrt(e), 0.2, 5.0) : 5.0;
            }

            if (accept) {
                st.u = std::move(small);
                st.t = clipped ? stop : st.t + dt_try;
                st.dt = dt_try;
                ++st.step_count;
            }
            dt_next = dt_try * factor;

            if (accept) {
                const double sup = lp_norm(st.u, lp_infinity);
                if (sup > p_.sup_blowup) {
                    const bool ok = emit(st, dt_next, record_index, have_prev_);
                    return leave(ok ? ExitStatus::BlowUp : ExitStatus::NumericalFailure, st.t);
                }
                if (clipped) {
                    if (st.t >= boundary) ++record_index;
                    if (!emit(st, dt_next, record_index, have_prev_))
                        return leave(ExitStatus::NumericalFailure, st.t);
                }
            }
            if (dt_next < p_.dt_min) {
                bool ok = true;
                if (st.t > prev_t_) ok = emit(st, dt_next, record_index, have_prev_);
                return leave(ok ? ExitStatus::BlowUp : ExitStatus::NumericalFailure, st.t);
            }
        }
        return leave(ExitStatus::ReachedFinalTime, st.t);
    }

  private:
    Field forcing(const Field& u) const {
        Field f = apply_nonlinearity(p_.spec, u, kern_);
        if (p_.dealias_cut > 0) f = truncate_modes(f, p_.dealias_cut);
        return f;
    }

    Trajectory leave(ExitStatus exit, double t_final) {
        traj_.exit = exit;
        traj_.t_final = t_final;
        return std::move(traj_);
    }

    // Returns false when the diagnostics are non-finite (the record is still
    // kept and streamed; the caller then exits with NumericalFailure).
    bool emit(const FlowState& st, double dt_next, std::uint64_t record_index, bool have_prev) {
        DiagnosticsRecord r;
        r.t = st.t;
        r.dt = have_prev ? st.dt : p_.dt0;
        r.E = energy(p_.spec, st.u, kern_);
        r.l2 = lp_norm(st.u, 2.0);
        r.h1 = std::sqrt(h1_norm_sq(st.u));
        r.sup = lp_norm(st.u, lp_infinity);
        r.l_qp1 = lp_norm(st.u, p_.spec.q + 1.0);
        r.l_a = lp_norm(st.u, p_.monitor_a);
        r.phi_term = potential_energy_term(st.u, kern_);
        if (have_prev) {
            const double Dt = st.t - prev_t_;
            const double ut2 = l2_diff(st.u, prev_u_) / Dt;
            r.diss_residual = std::fabs((r.E - prev_E_) / Dt + ut2 * ut2);
        }
        traj_.records.push_back(r);
        prev_t_ = st.t;
        prev_E_ = r.E;
        prev_u_ = st.u;
        have_prev_ = true;
        if (sink_) sink_(RecordEvent{traj_.records.back(), st, dt_next, record_index});
        return std::isfinite(r.E) && std::isfinite(r.l2) && std::isfinite(r.h1) &&
               std::isfinite(r.sup) && std::isfinite(r.l_qp1) && std::isfinite(r.l_a) &&
               std::isfinite(r.phi_term) && std::isfinite(r.diss_residual);
    }

    RunParams p_;
    const PaddedKernel& kern_;
    const RecordSink& sink_;
    Trajectory traj_;
    bool have_prev_ = false;
    double prev_t_ = -1.0;
    double prev_E_ = 0.0;
    Field prev_u_;
};

} // namespace

Trajectory adaptive_run(const Field& u0, const RunParams& p, const PaddedKernel& kernel,
                        const RecordSink& sink) {
    require_same_grid(u0.grid, kernel.grid(), "adaptive_run");
    Driver d(p, kernel, sink);
    FlowState st{0.0, u0, p.dt0, 0};
    return d.run(std::move(st), p.dt0, 0, /*fresh=*/true);
}

Trajectory adaptive_run_resumed(const ResumePoint& rp, const RunParams& p,
                                const PaddedKernel& kernel, const RecordSink& sink) {
    require_same_grid(rp.state.u.grid, kernel.grid(), "adaptive_run_resumed");
    Driver d(p, kernel, sink);
    return d.run(rp.state, rp.dt_next, rp.record_index, /*fresh=*/false);
}

} // namespace nwfl
