#include "newtonflow/cli.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <utility>

#include "newtonflow/checkpoint.hpp"
#include "newtonflow/ratio_monitors.hpp"

namespace nwfl {

int exit_code_for(ExitStatus e) {
    switch (e) {
        case ExitStatus::ReachedFinalTime: return exit_ok;
        case ExitStatus::BlowUp: return exit_blowup;
        case ExitStatus::NumericalFailure: return exit_numerical;
    }
    return exit_numerical;
}

std::string csv_header() { return "t,dt,E,l2,h1,sup,l_qp1,l_a,phi_term,diss_residual"; }

std::string csv_row(const DiagnosticsRecord& r) {
    const double cols[10] = {r.t,   r.dt,    r.E,   r.l2,       r.h1,
                             r.sup, r.l_qp1, r.l_a, r.phi_term, r.diss_residual};
    char buf[32];
    std::string row;
    for (int i = 0; i < 10; ++i) {
        if (i) row += ',';
        std::snprintf(buf, sizeof(buf), "%.17g", cols[i]);
        row += buf;
    }
    return row;
}

namespace {

std::string checkpoint_file(const std::string& prefix, int seq) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "_%06d.nwfl", seq);
    return prefix + buf;
}

} // namespace

int cmd_run(const RunConfig& cfg, const std::string& resume_path, std::ostream* log) {
    const Grid g = make_grid(cfg);
    const PaddedKernel kernel(g);
    const RunParams params = make_run_params(cfg);
    const std::uint64_t digest = config_digest(cfg);

    ResumePoint rp;
    bool resuming = false;
    if (!resume_path.empty()) {
        const Checkpoint c = load_checkpoint(resume_path);
        if (c.config_digest != digest)
            throw config_error("resume: checkpoint config digest mismatch (checkpoint " +
                               std::to_string(c.config_digest) + ", config " +
                               std::to_string(digest) + ")");
        if (c.kind != static_cast<std::uint8_t>(cfg.spec.kind) || c.q != cfg.spec.q)
            throw config_error("resume: checkpoint nonlinearity does not match the config");
        rp = resume_point(c, g);
        resuming = true;
    }

    std::ofstream csv(cfg.csv_path, std::ios::binary | std::ios::trunc);
    if (!csv) throw io_error("cannot open CSV output '" + cfg.csv_path + "'");
    csv << csv_header() << '\n';

    const bool want_ckpt = !cfg.checkpoint_path.empty() && cfg.checkpoint_every > 0.0;
    double next_ckpt = 0.0;
    int ckpt_seq = 0;
    if (want_ckpt) {
        const double base = resuming ? rp.state.t : 0.0;
        next_ckpt = cfg.checkpoint_every;
        while (next_ckpt <= base) next_ckpt += cfg.checkpoint_every;
    }

    RecordSink sink = [&](const RecordEvent& ev) {
        csv << csv_row(ev.rec) << '\n';
        if (!csv) throw io_error("write failure on CSV output '" + cfg.csv_path + "'");
        if (want_ckpt && ev.rec.t >= next_ckpt * (1.0 - 1e-12)) {
            const Checkpoint c =
                make_checkpoint(g, cfg.spec, ev.state, ev.dt_next, ev.record_index, digest);
            save_checkpoint(checkpoint_file(cfg.checkpoint_path, ++ckpt_seq), c);
            while (next_ckpt <= ev.rec.t) next_ckpt += cfg.checkpoint_every;
        }
    };

    Trajectory traj;
    if (resuming) {
        traj = adaptive_run_resumed(rp, params, kernel, sink);
    } else {
        const Field u0 = build_initial(cfg.initial, g);
        traj = adaptive_run(u0, params, kernel, sink);
    }
    csv.flush();
    if (!csv) throw io_error("write failure on CSV output '" + cfg.csv_path + "'");
    if (log)
        *log << "run: exit=" << exit_name(traj.exit) << " t_final=" << traj.t_final
             << " records=" << traj.records.size() << "\n";
    return exit_code_for(traj.exit);
}

SweepResult cmd_sweep(const RunConfig& cfg, double amp_lo, double amp_hi, double tol,
                      std::ostream& out) {
    if (!(amp_lo < amp_hi)) throw config_error("sweep: need amp_lo < amp_hi");
    if (!(tol > 0.0)) throw config_error("sweep: need tol > 0");
    const Grid g = make_grid(cfg);
    const PaddedKernel kernel(g);
    const RunParams params = make_run_params(cfg);

    struct Probe {
        ExitStatus exit;
        double E0;
        double t_final;
    };
    int runs = 0;
    auto probe = [&](double amp) {
        const Field u0 = build_initial(scaled(cfg.initial, amp), g);
        const double E0 = energy(cfg.spec, u0, kernel);
        const Trajectory traj = adaptive_run(u0, params, kernel);
        ++runs;
        if (traj.exit == ExitStatus::NumericalFailure)
            throw numerical_failure("sweep: run at amplitude " + std::to_string(amp) +
                                    " failed numerically");
        out << "sweep: amp=" << amp << " exit=" << exit_name(traj.exit)
            << " E0=" << E0 << " t_final=" << traj.t_final << "\n";
        return Probe{traj.exit, E0, traj.t_final};
    };

    Probe lo = probe(amp_lo);
    Probe hi = probe(amp_hi);
    if (lo.exit == hi.exit)
        throw config_error("sweep inconclusive: both endpoints classify as " +
                           std::string(exit_name(lo.exit)));
    // Keep the global side at lo and the blow-up side at hi.
    const bool lo_global = lo.exit == ExitStatus::ReachedFinalTime;
    if (!lo_global) {
        std::swap(amp_lo, amp_hi);
        std::swap(lo, hi);
    }

    while (std::fabs(amp_hi - amp_lo) > tol) {
        const double mid = 0.5 * (amp_lo + amp_hi);
        const Probe pm = probe(mid);
        if (pm.exit == ExitStatus::ReachedFinalTime) {
            amp_lo = mid;
            lo = pm;
        } else {
            amp_hi = mid;
            hi = pm;
        }
    }

    SweepResult res;
    res.amp_lo = amp_lo;
    res.amp_hi = amp_hi;
    res.exit_lo = lo.exit;
    res.exit_hi = hi.exit;
    res.energy_lo = lo.E0;
    res.energy_hi = hi.E0;
    res.t_final_hi = hi.t_final;
    res.runs = runs;
    out << "sweep: bracket [" << amp_lo << ", " << amp_hi << "] width "
        << std::fabs(amp_hi - amp_lo) << " after " << runs << " runs\n";
    out << "sweep: global side amp=" << amp_lo << " exit=" << exit_name(lo.exit)
        << " E0=" << lo.E0 << "\n";
    out << "sweep: blow-up side amp=" << amp_hi << " exit=" << exit_name(hi.exit)
        << " E0=" << hi.E0 << " t_final=" << hi.t_final << "\n";
    return res;
}

LabConfig parse_lab_config(const std::string& text) {
    LabConfig cfg;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    auto fail = [&line](const std::string& msg) {
        throw config_error("lab config line " + std::to_string(line) + ": " + msg);
    };
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        std::string s = raw;
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
        std::size_t b = 0;
        while (b < s.size() && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
        s = s.substr(b);
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos) fail("expected key = value");
        auto trim = [](std::string t) {
            std::size_t x = 0, y = t.size();
            while (x < y && std::isspace(static_cast<unsigned char>(t[x]))) ++x;
            while (y > x && std::isspace(static_cast<unsigned char>(t[y - 1]))) --y;
            return t.substr(x, y - x);
        };
        const std::string key = trim(s.substr(0, eq));
        const std::string val = trim(s.substr(eq + 1));
        try {
            if (key == "N") cfg.N = std::stoi(val);
            else if (key == "L") cfg.L = std::stod(val);
            else if (key == "samples") cfg.samples = std::stoi(val);
            else if (key == "kmax") cfg.kmax = std::stoi(val);
            else if (key == "seed") cfg.seed = std::stoull(val);
            else if (key == "m") cfg.m = val;
            else if (key == "r") cfg.r = std::stod(val);
            else if (key == "nonlinearity") {
                if (val == "F1") cfg.spec.kind = Kind::F1;
                else if (val == "F2") cfg.spec.kind = Kind::F2;
                else if (val == "F3") cfg.spec.kind = Kind::F3;
                else fail("nonlinearity = " + val + ": want F1, F2, or F3");
            } else if (key == "q") cfg.spec.q = std::stod(val);
            else if (key == "q_rat") cfg.q_rat = val;
            else if (key == "beta") cfg.beta = val;
            else if (key == "h") cfg.h = val;
            else if (key == "a") cfg.a = val;
            else if (key == "csv_path") cfg.csv_path = val;
            else fail("unknown key '" + key + "'");
        } catch (const config_error&) {
            throw;
        } catch (const std::exception&) {
            fail(key + " = " + val + ": unparsable value");
        }
    }
    if (cfg.N < 2) throw config_error("lab config: N must be >= 2");
    if (cfg.samples < 1) throw config_error("lab config: samples must be >= 1");
    if (cfg.kmax < 1 || cfg.kmax > cfg.N) throw config_error("lab config: kmax must lie in 1..N");
    if (!(cfg.r > 1.0)) throw config_error("lab config: r must be > 1");
    cfg.spec.validate(true);
    return cfg;
}

LabConfig load_lab_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open lab config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_lab_config(ss.str());
}

int cmd_lab(const LabConfig& cfg, std::ostream& out) {
    const rational m = parse_rational(cfg.m);
    const RationalOrInf r_conj = hls_conjugate(m);
    const rational q = parse_rational(cfg.q_rat);
    const rational beta = parse_rational(cfg.beta);
    const rational h = parse_rational(cfg.h);
    const rational a_beta = a_of_beta(q, beta);
    const rational a = cfg.a.empty() ? (2 + a_beta) / 2 : parse_rational(cfg.a);

    out << "exponents:\n";
    out << "  hls: m = " << rational_str(m) << ", conjugate r = " << rational_str(r_conj) << "\n";
    out << "  a_of_beta(q=" << rational_str(q) << ", beta=" << rational_str(beta)
        << ") = " << rational_str(a_beta) << "\n";
    const BootstrapReport rep = bootstrap_exponents(q, beta, h, a);
    out << "  bootstrap(q=" << rational_str(q) << ", beta=" << rational_str(beta)
        << ", h=" << rational_str(h) << ", a=" << rational_str(a) << "):\n";
    out << "    beta_tilde = " << rational_str(rep.beta_tilde)
        << ", theta = " << rational_str(rep.theta) << ", s = " << rational_str(rep.s) << "\n";
    out << "    s' = " << (rep.s_prime ? rational_str(*rep.s_prime) : std::string("-"))
        << ", theta*s' = "
        << (rep.theta_s_prime ? rational_str(*rep.theta_s_prime) : std::string("-")) << "\n";
    out << "    valid_s = " << (rep.valid_s ? "true" : "false")
        << ", valid_condi = " << (rep.valid_condi ? "true" : "false") << "\n";
    const AmannWindow w = amann_window(q);
    out << "  amann_window(q=" << rational_str(q) << "): gamma0 = " << rational_str(w.gamma0)
        << ", p0 in (" << rational_str(w.p0_low) << ", " << rational_str(w.p0_high) << ")"
        << ", nonempty = " << (w.nonempty ? "true" : "false") << "\n";

    const Grid g(cfg.L, cfg.N);
    const PaddedKernel kernel(g);
    EnsembleParams ep;
    ep.samples = cfg.samples;
    ep.kmax = cfg.kmax;
    ep.seed = cfg.seed;
    const EnsembleResult hls = ensemble_hls_ratio(g, kernel, m, ep);
    const EnsembleResult poly = ensemble_poly_ratio(g, kernel, cfg.spec, cfg.r, ep);
    out << "ensembles (" << cfg.samples << " band-limited samples, kmax = " << cfg.kmax
        << ", seed = " << cfg.seed << ", N = " << cfg.N << "):\n";
    out << "  hls_ratio max = " << hls.max << " at sample " << hls.argmax
        << "  (empirical constant, not asserted)\n";
    out << "  poly_bound_ratio[" << kind_name(cfg.spec.kind) << ", q = " << cfg.spec.q
        << ", r = " << cfg.r << ", kappa = " << kappa(cfg.spec) << "] max = " << poly.max
        << " at sample " << poly.argmax << "\n";

    std::ofstream csv(cfg.csv_path, std::ios::binary | std::ios::trunc);
    if (!csv) throw io_error("cannot open lab CSV output '" + cfg.csv_path + "'");
    csv << "index,hls_ratio,poly_ratio\n";
    char buf[80];
    for (int i = 0; i < cfg.samples; ++i) {
        std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g\n", i, hls.values[i], poly.values[i]);
        csv << buf;
    }
    if (!csv) throw io_error("write failure on lab CSV output '" + cfg.csv_path + "'");
    out << "lab: wrote " << cfg.samples << " ratios to " << cfg.csv_path << "\n";
    return exit_ok;
}

} // namespace nwfl
