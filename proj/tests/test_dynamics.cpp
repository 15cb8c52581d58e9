#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "newtonflow/errors.hpp"
#include "newtonflow/grid.hpp"
#include "newtonflow/integrator.hpp"
#include "newtonflow/nonlinearity.hpp"
#include "newtonflow/norms.hpp"
#include "newtonflow/potential.hpp"
#include "newtonflow/transforms.hpp"

using namespace nwfl;

namespace {

Field sine_mode(const Grid& g, double amp) {
    Field u(g);
    const double f = M_PI / g.L;
    for (int ix = 0; ix < g.N; ++ix)
        for (int iy = 0; iy < g.N; ++iy)
            for (int iz = 0; iz < g.N; ++iz)
                u.at(ix, iy, iz) = amp * std::sin(f * g.node(ix)) * std::sin(f * g.node(iy)) *
                                   std::sin(f * g.node(iz));
    return u;
}

Field random_low_modes(const Grid& g, int kmax, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist;
    SpectralField c(g);
    for (int k1 = 1; k1 <= kmax; ++k1)
        for (int k2 = 1; k2 <= kmax; ++k2)
            for (int k3 = 1; k3 <= kmax; ++k3)
                c.c[(static_cast<std::size_t>(k1 - 1) * g.N + (k2 - 1)) * g.N + (k3 - 1)] =
                    dist(rng);
    return from_spectral(c);
}

double l2_diff(const Field& a, const Field& b) {
    Field d = a;
    for (std::size_t i = 0; i < d.v.size(); ++i) d.v[i] -= b.v[i];
    return lp_norm(d, 2.0);
}

const double pi3 = M_PI * M_PI * M_PI;

} // namespace

TEST_CASE("q range validation per kind, with the override hatch") {
    CHECK_NOTHROW((NonlinearitySpec{Kind::F2, 3.0}.validate()));
    CHECK_NOTHROW((NonlinearitySpec{Kind::F2, 1.0 + 1e-9}.validate()));
    CHECK_THROWS_AS((NonlinearitySpec{Kind::F2, 1.0}.validate()), domain_error);
    CHECK_THROWS_AS((NonlinearitySpec{Kind::F2, 5.0}.validate()), domain_error);
    CHECK_NOTHROW((NonlinearitySpec{Kind::F3, 3.0}.validate())); // closed left endpoint
    CHECK_NOTHROW((NonlinearitySpec{Kind::F3, 4.9}.validate()));
    CHECK_THROWS_AS((NonlinearitySpec{Kind::F3, 2.5}.validate()), domain_error);
    CHECK_THROWS_AS((NonlinearitySpec{Kind::F3, 5.0}.validate()), domain_error);
    CHECK_NOTHROW((NonlinearitySpec{Kind::F2, 5.0}.validate(true)));
    CHECK_NOTHROW((NonlinearitySpec{Kind::F3, 2.0}.validate(true)));
    // q only feeds F1's |u|^{q+1} diagnostics; its reaction term ignores it.
    CHECK_NOTHROW((NonlinearitySpec{Kind::F1, 7.0}.validate()));
}

TEST_CASE("reaction terms: zero input, oddness, one-node arithmetic") {
    const Grid g(1.9, 10);
    const PaddedKernel kernel(g);
    const NonlinearitySpec specs[3] = {{Kind::F1, 3.0}, {Kind::F2, 2.5}, {Kind::F3, 3.5}};
    const Field u = random_low_modes(g, 10, 17);
    Field mu = u;
    for (double& x : mu.v) x = -x;
    for (const auto& spec : specs) {
        const Field fz = apply_nonlinearity(spec, Field(g), kernel);
        for (double x : fz.v) CHECK(x == 0.0);
        const Field f = apply_nonlinearity(spec, u, kernel);
        const Field fm = apply_nonlinearity(spec, mu, kernel);
        for (std::size_t i = 0; i < f.v.size(); ++i) CHECK(fm.v[i] == -f.v[i]);
    }

    // Single occupied node p, F3 with q=3: the only potential contribution at
    // p is the singular cell, so F3(u)|_p = v^3 - h^3 (c0/h) v^2 * v.
    Field one(g);
    const double v = 0.8;
    one.at(4, 5, 6) = v;
    const Field f3 = apply_nonlinearity({Kind::F3, 3.0}, one, kernel);
    const double want = v * v * v * (1.0 - singular_cell_constant() * g.h * g.h);
    CHECK(f3.at(4, 5, 6) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("energies: zero field, eigenmode quadratic part, cross-kind identities") {
    const Grid g(M_PI, 16);
    const PaddedKernel kernel(g);
    for (Kind k : {Kind::F1, Kind::F2, Kind::F3})
        CHECK(energy({k, 3.0}, Field(g), kernel) == 0.0);

    // E1 + (1/4) int phi u^2 isolates the quadratic part (1/2)||u||_{1,2}^2.
    const Field u = sine_mode(g, 1.0);
    const double quad = energy({Kind::F1, 3.0}, u, kernel) +
                        0.25 * potential_energy_term(u, kernel);
    CHECK(quad == doctest::Approx(pi3 / 4.0).epsilon(1e-12));

    const Field w = random_low_modes(g, 6, 23);
    const double q = 3.4;
    const double e1 = energy({Kind::F1, q}, w, kernel);
    const double e2 = energy({Kind::F2, q}, w, kernel);
    const double e3 = energy({Kind::F3, q}, w, kernel);
    const double phi_term = potential_energy_term(w, kernel);
    const double p = integrate([&] {
        Field a = w;
        for (double& x : a.v) x = std::pow(std::fabs(x), q + 1.0);
        return a;
    }());
    const double scale = std::fabs(e1) + std::fabs(e2) + std::fabs(e3) + 1.0;
    CHECK(std::fabs(e2 - (e1 - p / (q + 1.0))) <= 1e-12 * scale);
    CHECK(std::fabs(e2 - (e3 - 0.5 * phi_term)) <= 1e-12 * scale);
}

TEST_CASE("gradient pairs with the energy differential and with u") {
    const Grid g(M_PI, 12);
    const PaddedKernel kernel(g);
    const Field u = random_low_modes(g, 5, 31);
    const Field v = random_low_modes(g, 5, 32);
    const double h3 = g.h * g.h * g.h;
    for (const auto& spec :
         {NonlinearitySpec{Kind::F1, 3.0}, {Kind::F2, 3.0}, {Kind::F3, 3.0}}) {
        const Field gz = energy_gradient(spec, Field(g), kernel);
        for (double x : gz.v) CHECK(x == 0.0);

        const Field grad = energy_gradient(spec, u, kernel);
        double pairing = 0.0;
        for (std::size_t i = 0; i < u.v.size(); ++i) pairing += grad.v[i] * v.v[i];
        pairing *= h3;
        double best = 1e30;
        for (double eps : {1e-3, 1e-4, 1e-5, 1e-6}) {
            Field up = u, um = u;
            for (std::size_t i = 0; i < u.v.size(); ++i) {
                up.v[i] += eps * v.v[i];
                um.v[i] -= eps * v.v[i];
            }
            const double fd = (energy(spec, up, kernel) - energy(spec, um, kernel)) / (2.0 * eps);
            best = std::min(best, std::fabs(fd - pairing) / std::max(1.0, std::fabs(pairing)));
        }
        CHECK(best <= 1e-6);

        // <g, u> = ||u||_{1,2}^2 - int F(u) u, the multiply-by-u identity.
        const Field f = apply_nonlinearity(spec, u, kernel);
        double gu = 0.0, fu = 0.0;
        for (std::size_t i = 0; i < u.v.size(); ++i) {
            gu += grad.v[i] * u.v[i];
            fu += f.v[i] * u.v[i];
        }
        const double want = h1_norm_sq(u) - fu * h3;
        CHECK(std::fabs(gu * h3 - want) <= 1e-12 * std::max(1.0, std::fabs(want)));
    }
}

TEST_CASE("ETD with zero forcing is the exact linear semigroup") {
    const Grid g(M_PI, 16);
    Field u = sine_mode(g, 1.0);
    const Field zero(g);
    const double dt = 0.01;
    for (int n = 1; n <= 100; ++n) {
        u = etd_apply(u, zero, dt);
        const double coeff = to_spectral(u).c[0]; // mode (1,1,1): a = 1 + 3
        const double want = std::exp(-4.0 * n * dt);
        CHECK(std::fabs(coeff - want) <= 1e-10 * want);
    }
}

TEST_CASE("ETD displacement never exceeds dt times the gradient norm") {
    // u+ - u = (1 - e^{-a dt})/a * (-ghat) per mode and (1-e^{-x})/x <= 1,
    // so ||u+ - u||_2 <= dt ||g||_2 for every state; steady states are fixed.
    const Grid g(1.5, 12);
    const PaddedKernel kernel(g);
    const NonlinearitySpec spec{Kind::F2, 3.0};
    const Field u = random_low_modes(g, 5, 77);
    const double gn = lp_norm(energy_gradient(spec, u, kernel), 2.0);
    for (double dt : {1e-1, 1e-2, 1e-3}) {
        const FlowState next = etd_step({0.0, u, 0.0, 0}, spec, kernel, dt);
        CHECK(l2_diff(next.u, u) <= dt * gn * (1.0 + 1e-12) + 1e-15);
    }
}

TEST_CASE("ETD step converges to the gradient flow at first order") {
    const Grid g(M_PI, 12);
    const PaddedKernel kernel(g);
    const NonlinearitySpec spec{Kind::F2, 3.0};
    const Field u = random_low_modes(g, 4, 11);
    const Field grad = energy_gradient(spec, u, kernel);
    double err[3];
    double dt = 4e-3;
    for (int i = 0; i < 3; ++i, dt *= 0.5) {
        const FlowState next = etd_step({0.0, u, 0.0, 0}, spec, kernel, dt);
        Field rate = next.u;
        for (std::size_t j = 0; j < rate.v.size(); ++j)
            rate.v[j] = (rate.v[j] - u.v[j]) / dt + grad.v[j];
        err[i] = lp_norm(rate, 2.0);
    }
    CHECK(err[0] / err[1] == doctest::Approx(2.0).epsilon(0.15));
    CHECK(err[1] / err[2] == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("ETD step rejects non-finite states") {
    const Grid g(1.0, 8);
    const PaddedKernel kernel(g);
    Field bad(g);
    bad.v[0] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(etd_step({0.0, bad, 0.0, 0}, {Kind::F1, 3.0}, kernel, 1e-3),
                    numerical_failure);
}

TEST_CASE("steady residual: zero field, and eigenmode linear part") {
    const Grid g(M_PI, 14);
    const PaddedKernel kernel(g);
    const NonlinearitySpec spec{Kind::F3, 3.0};
    CHECK(steady_residual(spec, Field(g), kernel) == 0.0);

    // Adding F back onto the gradient isolates (-Lap + 1)u, which on the
    // (1,1,1) eigenmode of L=pi has norm (1+3)||u||_2 = 4 sqrt(pi^3/8).
    const Field u = sine_mode(g, 1.0);
    const Field grad = energy_gradient(spec, u, kernel);
    const Field f = apply_nonlinearity(spec, u, kernel);
    Field lin = grad;
    for (std::size_t i = 0; i < lin.v.size(); ++i) lin.v[i] += f.v[i];
    CHECK(lp_norm(lin, 2.0) == doctest::Approx(4.0 * std::sqrt(pi3 / 8.0)).epsilon(1e-12));
}

TEST_CASE("steady residual decays monotonically after the initial transient") {
    const Grid g(M_PI, 12);
    const PaddedKernel kernel(g);
    const NonlinearitySpec spec{Kind::F3, 3.0};
    FlowState st{0.0, sine_mode(g, 0.5), 0.0, 0};
    const double dt = 5e-3;
    std::vector<double> samples;
    for (int n = 1; n * dt <= 3.0 + 1e-12; ++n) {
        st = etd_step(st, spec, kernel, dt);
        if (n % 50 == 0 && st.t >= 1.0 - 1e-12)
            samples.push_back(steady_residual(spec, st.u, kernel));
    }
    REQUIRE(samples.size() >= 8);
    for (std::size_t i = 1; i < samples.size(); ++i)
        CHECK(samples[i] <= samples[i - 1] * (1.0 + 1e-10));
}

TEST_CASE("adaptive run: zero data stays identically zero") {
    const Grid g(M_PI, 8);
    const PaddedKernel kernel(g);
    RunParams p;
    p.spec = {Kind::F1, 3.0};
    p.t_end = 1.0;
    p.record_every = 0.25;
    const Trajectory traj = adaptive_run(Field(g), p, kernel);
    CHECK(traj.exit == ExitStatus::ReachedFinalTime);
    CHECK(traj.t_final == 1.0);
    REQUIRE(traj.records.size() == 5);
    for (const auto& r : traj.records) {
        CHECK(r.E == 0.0);
        CHECK(r.l2 == 0.0);
        CHECK(r.sup == 0.0);
        CHECK(r.l_a == 0.0);
        CHECK(r.phi_term == 0.0);
    }
}

TEST_CASE("adaptive run: small data decays with monotone energy") {
    const Grid g(M_PI, 12);
    const PaddedKernel kernel(g);
    RunParams p;
    p.spec = {Kind::F3, 3.0};
    p.t_end = 3.0;
    p.record_every = 0.25;
    const Trajectory traj = adaptive_run(sine_mode(g, 0.5), p, kernel);
    CHECK(traj.exit == ExitStatus::ReachedFinalTime);
    REQUIRE(traj.records.size() >= 2);
    CHECK(traj.records.back().sup < traj.records.front().sup);
    for (std::size_t i = 1; i < traj.records.size(); ++i) {
        CHECK(traj.records[i].t > traj.records[i - 1].t);
        CHECK(traj.records[i].E <=
              traj.records[i - 1].E + 1e-10 * std::max(1.0, std::fabs(traj.records[i - 1].E)));
        CHECK(std::isfinite(traj.records[i].l_a));
    }
}

TEST_CASE("adaptive run: large F2 data is classified as blow-up") {
    const Grid g(M_PI, 12);
    const PaddedKernel kernel(g);
    RunParams p;
    p.spec = {Kind::F2, 3.0};
    p.t_end = 5.0;
    p.sup_blowup = 1e4;
    const Trajectory traj = adaptive_run(sine_mode(g, 3.0), p, kernel);
    CHECK(traj.exit == ExitStatus::BlowUp);
    CHECK(traj.t_final > 0.0);
    CHECK(traj.t_final < 5.0);
    REQUIRE(!traj.records.empty());
    CHECK(traj.records.back().t == traj.t_final);
    CHECK(traj.records.back().sup > 1e4);
}

TEST_CASE("adaptive run: non-finite initial data is a numerical failure") {
    const Grid g(M_PI, 8);
    const PaddedKernel kernel(g);
    Field bad(g);
    bad.v[3] = std::nan("");
    RunParams p;
    p.spec = {Kind::F1, 3.0};
    p.t_end = 1.0;
    CHECK(adaptive_run(bad, p, kernel).exit == ExitStatus::NumericalFailure);
}

TEST_CASE("flow commutes with negation, bitwise") {
    const Grid g(M_PI, 10);
    const PaddedKernel kernel(g);
    RunParams p;
    p.spec = {Kind::F2, 3.0};
    p.t_end = 1.0;
    p.record_every = 0.25;
    const Field u0 = random_low_modes(g, 4, 41);
    Field mu0 = u0;
    for (double& x : mu0.v) x = -x;

    std::vector<std::vector<double>> fields[2];
    int which = 0;
    auto sink = [&](const RecordEvent& ev) { fields[which].push_back(ev.state.u.v); };
    const Trajectory a = adaptive_run(u0, p, kernel, sink);
    which = 1;
    const Trajectory b = adaptive_run(mu0, p, kernel, sink);

    CHECK(a.exit == b.exit);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].t == b.records[i].t);
        CHECK(a.records[i].dt == b.records[i].dt);
        CHECK(a.records[i].E == b.records[i].E);
        CHECK(a.records[i].l2 == b.records[i].l2);
        CHECK(a.records[i].sup == b.records[i].sup);
        CHECK(a.records[i].diss_residual == b.records[i].diss_residual);
    }
    REQUIRE(fields[0].size() == fields[1].size());
    for (std::size_t r = 0; r < fields[0].size(); ++r)
        for (std::size_t i = 0; i < fields[0][r].size(); ++i)
            CHECK(fields[0][r][i] == -fields[1][r][i]);
}

TEST_CASE("discrete multiply-by-u identity converges at order >= 1") {
    // |<u, u_t> + ||u||_{1,2}^2 - int F(u) u| with u_t the central difference
    // in time, sampled along a fixed-dt flow; halving dt halves the defect.
    const Grid g(M_PI, 12);
    const PaddedKernel kernel(g);
    const NonlinearitySpec spec{Kind::F2, 3.0};
    const Field u0 = sine_mode(g, 0.5);
    const double h3 = g.h * g.h * g.h;

    auto defect = [&](double dt) {
        FlowState st{0.0, u0, 0.0, 0};
        const int steps = static_cast<int>(std::lround(0.2 / dt));
        Field prev = st.u;
        double worst = 0.0;
        for (int n = 1; n <= steps; ++n) {
            const FlowState next = etd_step(st, spec, kernel, dt);
            if (n >= 2 && n % (steps / 4) == 0) {
                double uut = 0.0;
                for (std::size_t i = 0; i < st.u.v.size(); ++i)
                    uut += st.u.v[i] * (next.u.v[i] - prev.v[i]);
                uut = uut * h3 / (2.0 * dt);
                const Field f = apply_nonlinearity(spec, st.u, kernel);
                double fu = 0.0;
                for (std::size_t i = 0; i < f.v.size(); ++i) fu += f.v[i] * st.u.v[i];
                worst = std::max(worst,
                                 std::fabs(uut + h1_norm_sq(st.u) - fu * h3));
            }
            prev = st.u;
            st = next;
        }
        return worst;
    };

    const double d1 = defect(4e-3), d2 = defect(2e-3), d3 = defect(1e-3);
    CHECK(std::log2(d1 / d2) >= 1.0);
    CHECK(std::log2(d2 / d3) >= 1.0);
}

TEST_CASE("in-memory restart at a record boundary is bitwise identical") {
    const Grid g(M_PI, 10);
    const PaddedKernel kernel(g);
    RunParams p;
    p.spec = {Kind::F2, 3.0};
    p.t_end = 1.5;
    p.record_every = 0.25;
    Field u0 = random_low_modes(g, 4, 51);
    const double scale = 0.3 / lp_norm(u0, lp_infinity); // small data: no blow-up
    for (double& x : u0.v) x *= scale;

    ResumePoint rp;
    bool captured = false;
    auto capture = [&](const RecordEvent& ev) {
        if (!captured && ev.rec.t == 0.5) {
            rp.state = ev.state;
            rp.dt_next = ev.dt_next;
            rp.record_index = ev.record_index;
            captured = true;
        }
    };
    const Trajectory full = adaptive_run(u0, p, kernel, capture);
    REQUIRE(captured);
    const Trajectory tail = adaptive_run_resumed(rp, p, kernel);

    CHECK(tail.exit == full.exit);
    std::vector<const DiagnosticsRecord*> suffix;
    for (const auto& r : full.records)
        if (r.t > 0.5) suffix.push_back(&r);
    REQUIRE(tail.records.size() == suffix.size());
    for (std::size_t i = 0; i < suffix.size(); ++i) {
        CHECK(tail.records[i].t == suffix[i]->t);
        CHECK(tail.records[i].dt == suffix[i]->dt);
        CHECK(tail.records[i].E == suffix[i]->E);
        CHECK(tail.records[i].l2 == suffix[i]->l2);
        CHECK(tail.records[i].h1 == suffix[i]->h1);
        CHECK(tail.records[i].sup == suffix[i]->sup);
        CHECK(tail.records[i].l_qp1 == suffix[i]->l_qp1);
        CHECK(tail.records[i].l_a == suffix[i]->l_a);
        CHECK(tail.records[i].phi_term == suffix[i]->phi_term);
        CHECK(tail.records[i].diss_residual == suffix[i]->diss_residual);
    }
}

TEST_CASE("dealiased forcing still reaches the final time near the plain run") {
    const Grid g(M_PI, 12);
    const PaddedKernel kernel(g);
    RunParams p;
    p.spec = {Kind::F2, 3.0};
    p.t_end = 1.0;
    p.record_every = 0.5;
    const Field u0 = sine_mode(g, 0.4);
    const Trajectory plain = adaptive_run(u0, p, kernel);
    p.dealias_cut = 2 * (g.N + 1) / 3;
    const Trajectory cut = adaptive_run(u0, p, kernel);
    CHECK(plain.exit == ExitStatus::ReachedFinalTime);
    CHECK(cut.exit == ExitStatus::ReachedFinalTime);
    const double a = plain.records.back().l2, b = cut.records.back().l2;
    CHECK(std::fabs(a - b) <= 0.05 * std::max(a, b));
}
