#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "helpers.hpp"
#include "wtbouss/config.hpp"
#include "wtbouss/verify.hpp"

using namespace wtbouss;
using test::field_from_fn;
using test::grid;

namespace {

double qj(const State& s, CaseTag tag, double eps) {
    GoodUnknowns u = to_ptheta(tag, s, eps);
    const double a = weighted_norm(u.p, tag, eps, 1.0, 0.0, false);
    const double b = weighted_norm(u.theta, tag, eps, 1.0, 0.0, false);
    return a * a + b * b;
}

}  // namespace

TEST_CASE("zero state stays zero") {
    GridSpec g = grid(16);
    ModelParams p = ModelParams::case1(0.1);
    RhsFn f = [&](const State& s) { return rhs(SystemId::Case1, s, p); };
    State s(g);
    State out = step(s, 0.01, f);
    CHECK(test::data_scale(out) == 0.0);
    CHECK(out.time == doctest::Approx(0.01));
}

TEST_CASE("RK4 order: one oscillation period returns to the data at slope 4") {
    GridSpec g = grid(32);
    const double eps = 0.1;
    ModelParams p = ModelParams::case1(eps);
    const double lam = SymbolSpec::lambda1(eps).eval(1.0, 0.0).real();
    const double period = 2.0 * std::numbers::pi / lam;

    State s0(g);
    s0.zeta = field_from_fn(g, [](double x, double) { return 0.01 * std::cos(x); });
    s0.v = field_from_fn(g, [&](double x, double) { return -0.01 / lam * std::cos(x); });
    // (v, w, zeta) on the eigenvector rotates back to itself after a period

    RhsFn f = [&](const State& s) { return rhs(SystemId::Case1, s, p, true); };
    auto run = [&](int nsteps) {
        State s = s0;
        const double dt = period / nsteps;
        for (int n = 0; n < nsteps; ++n) s = step(s, dt, f);
        return max_abs(s.zeta - s0.zeta) + max_abs(s.v - s0.v);
    };
    const double e1 = run(48), e2 = run(96), e3 = run(192);
    const double slope1 = std::log2(e1 / e2), slope2 = std::log2(e2 / e3);
    CHECK(slope1 == doctest::Approx(4.0).epsilon(0.05));
    CHECK(slope2 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("time reversal undoes a step to integrator order") {
    GridSpec g = grid(32);
    const double eps = 0.15;
    ModelParams p = ModelParams::case1(eps);
    State s0 = random_curl_free_state(CaseTag::Case1, g, eps, 4, 0.1, 11);
    RhsFn fwd = [&](const State& s) { return rhs(SystemId::Case1, s, p, true); };
    RhsFn bwd = [&](const State& s) {
        Tendency t = rhs(SystemId::Case1, s, p, true);
        t.dv *= -1.0;
        t.dw *= -1.0;
        t.dzeta *= -1.0;
        return t;
    };
    auto defect = [&](double dt) {
        State s = step(step(s0, dt, fwd), dt, bwd);
        return max_abs(s.zeta - s0.zeta) + max_abs(s.v - s0.v) + max_abs(s.w - s0.w);
    };
    const double e1 = defect(0.2), e2 = defect(0.1), e3 = defect(0.05);
    CHECK(std::log2(e1 / e2) > 3.8);
    CHECK(std::log2(e2 / e3) > 3.8);
}

TEST_CASE("integrate with t_end = 0 emits a single record") {
    RunConfig cfg;
    cfg.system = SystemId::Case1;
    cfg.params = ModelParams::case1(0.1);
    cfg.grid = grid(16);
    cfg.t_end = 0.0;
    cfg.init = InitFamily::Trig;
    cfg.amplitude = 0.01;
    RunResult r = integrate(cfg);
    CHECK(r.ok);
    CHECK(r.records.size() == 1);
    CHECK(r.records[0].time == 0.0);
}

TEST_CASE("linearized case runs conserve the J-weighted quadratic invariant") {
    for (CaseTag tag : {CaseTag::Case1, CaseTag::Case2}) {
        RunConfig cfg;
        cfg.system = system_of_case(tag);
        cfg.params = tag == CaseTag::Case1 ? ModelParams::case1(0.1) : ModelParams::case2(0.1);
        cfg.grid = grid(32);
        cfg.linearized = true;
        cfg.t_end = 10.0;
        cfg.dt = 2e-3;
        cfg.init = InitFamily::Trig;
        cfg.amplitude = 0.05;
        cfg.diag_every = 1000000;  // only endpoint diagnostics
        cfg.diag_tilde = false;
        State s0 = initial_state(cfg);
        RunResult r = integrate(cfg);
        REQUIRE(r.ok);
        const double q0 = qj(s0, tag, 0.1);
        const double q1 = qj(r.final_state, tag, 0.1);
        CHECK(std::abs(q1 - q0) / q0 < 1e-10);
    }
}

TEST_CASE("cfl halving refines the solution at integrator order") {
    RunConfig cfg;
    cfg.system = SystemId::Case1;
    cfg.params = ModelParams::case1(0.1);
    cfg.grid = grid(32);
    cfg.t_end = 2.0;
    cfg.init = InitFamily::Gaussian;
    cfg.amplitude = 0.1;
    cfg.diag_every = 1 << 30;
    cfg.diag_tilde = false;
    auto run = [&](double cfl) {
        RunConfig c = cfg;
        c.cfl = cfl;
        c.dt = auto_dt(c);
        // snap to an integer divisor of t_end happens inside integrate
        RunResult r = integrate(c);
        REQUIRE(r.ok);
        return r.final_state;
    };
    State a = run(1.0), b = run(0.5), c = run(0.25);
    const double d1 = max_abs(a.zeta - b.zeta) + max_abs(a.v - b.v);
    const double d2 = max_abs(b.zeta - c.zeta) + max_abs(b.v - c.v);
    CHECK(d1 / d2 > 10.0);  // 16x expected for a 4th-order method
    CHECK(d1 / d2 < 24.0);
}

TEST_CASE("integrate is deterministic and reruns byte-identically") {
    RunConfig cfg;
    cfg.system = SystemId::Case2;
    cfg.params = ModelParams::case2(0.12);
    cfg.grid = grid(32);
    cfg.t_end = 0.5;
    cfg.init = InitFamily::Random;
    cfg.amplitude = 0.02;
    cfg.seed = 909;
    cfg.diag_every = 5;
    RunResult a = integrate(cfg);
    RunResult b = integrate(cfg);
    REQUIRE(a.ok);
    REQUIRE(b.ok);
    REQUIRE(a.records.size() == b.records.size());
    for (size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].energy.e_total == b.records[i].energy.e_total);
        CHECK(a.records[i].curl_res == b.records[i].curl_res);
    }
    write_diagnostics_csv("/tmp/wtbouss_test_a.csv", a.records);
    write_diagnostics_csv("/tmp/wtbouss_test_b.csv", b.records);
    std::ifstream fa("/tmp/wtbouss_test_a.csv"), fb("/tmp/wtbouss_test_b.csv");
    std::stringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    CHECK(sa.str() == sb.str());
    CHECK(sa.str().find("time,e_total") != std::string::npos);
}

TEST_CASE("curl residual stays at round-off over a nonlinear run") {
    RunConfig cfg;
    cfg.system = SystemId::Case1;
    cfg.params = ModelParams::case1(0.1);
    cfg.grid = grid(32);
    cfg.t_end = 5.0;
    cfg.init = InitFamily::Gaussian;
    cfg.amplitude = 0.1;
    cfg.diag_every = 20;
    cfg.diag_tilde = false;
    RunResult r = integrate(cfg);
    REQUIRE(r.ok);
    const double scale = test::data_scale(r.final_state);
    for (const auto& rec : r.records)
        CHECK(rec.curl_res <= 1e-8 * (1.0 + rec.time) * scale);
}

TEST_CASE("sweep: degenerate single entry and zero amplitude") {
    RunConfig cfg;
    cfg.system = SystemId::Case1;
    cfg.params = ModelParams::case1(0.1);
    cfg.grid = grid(16);
    cfg.t0 = 0.5;
    cfg.init = InitFamily::Trig;
    cfg.amplitude = 0.0;
    cfg.diag_every = 10;
    cfg.diag_tilde = false;
    auto rows = long_time_sweep(cfg, {0.1, 0.05});
    REQUIRE(rows.size() == 2);
    for (const auto& row : rows) {
        CHECK(row.ok);
        CHECK(row.growth_ratio == 1.0);  // null solution
        CHECK(row.t_end == doctest::Approx(0.5 / row.eps));
    }
}

TEST_CASE("blow-up is reported as a partial series, not a crash") {
    RunConfig cfg;
    cfg.system = SystemId::Case1;
    cfg.params = ModelParams::case1(0.9);
    cfg.grid = grid(16);
    cfg.t_end = 50.0;
    cfg.dt = 2.0;  // far beyond the stability bound
    cfg.init = InitFamily::Trig;
    cfg.amplitude = 5.0;
    cfg.diag_every = 1;
    cfg.diag_tilde = false;
    RunResult r = integrate(cfg);
    CHECK_FALSE(r.ok);
    CHECK(r.error_code == 3);
    CHECK(!r.records.empty());
}
