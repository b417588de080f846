#include <doctest.h>

#include <numbers>

#include "helpers.hpp"
#include "wtbouss/verify.hpp"

using namespace wtbouss;
using test::field_from_fn;
using test::grid;

TEST_CASE("validate_params classifies the two special cases") {
    ParamsReport r1 = validate_params(ModelParams::case1(0.1));
    CHECK(r1.constraint_ok);
    CHECK(std::abs(r1.constraint_res1) < 1e-14);
    CHECK(std::abs(r1.constraint_res2) < 1e-14);
    CHECK(r1.curl_free_ok);
    CHECK(r1.case_tag_ok);
    // a = f = g = 0 sits on the boundary of (i) and satisfies f = g, so (ii);
    // (iii)/(iv) need a = c which fails (0 vs -1/3)
    CHECK(r1.family[0]);
    CHECK(r1.family[1]);
    CHECK_FALSE(r1.family[2]);
    CHECK_FALSE(r1.family[3]);

    ParamsReport r2 = validate_params(ModelParams::case2(0.1));
    CHECK(r2.constraint_ok);
    CHECK(r2.family[0]);
    CHECK(r2.family[1]);
    CHECK(r2.curl_free_ok);
    CHECK(r2.case_tag_ok);
}

TEST_CASE("validate_params reports the forced residuals for zero coefficients") {
    ModelParams p = ModelParams::general({0, 0, 0, 0, 0, 0, 0}, 0.1);
    ParamsReport r = validate_params(p);
    CHECK_FALSE(r.constraint_ok);
    CHECK(r.constraint_res1 == doctest::Approx(-1.0 / 3.0).epsilon(1e-14));
    CHECK(r.constraint_res2 == doctest::Approx(-2.0 / 3.0).epsilon(1e-14));
    CHECK_THROWS_AS(require_valid(p), ArgumentError);
}

TEST_CASE("null solution is a fixed point of every system") {
    GridSpec g = grid(32);
    State s(g);
    for (SystemId sys : {SystemId::WTB1, SystemId::WTB2, SystemId::Case1, SystemId::Case2}) {
        ModelParams p = sys == SystemId::Case2 ? ModelParams::case2(0.1) : ModelParams::case1(0.1);
        if (sys == SystemId::WTB1 || sys == SystemId::WTB2)
            p = ModelParams::general(ModelParams::case2(0.1).coef(), 0.1);
        Tendency t = rhs(sys, s, p);
        CHECK(max_abs(t.dv) == 0.0);
        CHECK(max_abs(t.dw) == 0.0);
        CHECK(max_abs(t.dzeta) == 0.0);
    }
}

TEST_CASE("Case1 linearization matches the per-mode symbols") {
    GridSpec g = grid(32);
    const double eps = 0.2;
    ModelParams p = ModelParams::case1(eps);
    const int k = 2, l = 1;
    const double delta = 1e-7;
    State s(g);
    s.zeta = field_from_fn(g, [&](double x, double y) { return delta * std::cos(k * x + l * y); });

    Tendency tl = rhs(SystemId::Case1, s, p, true);
    // J dv = -zeta_x, J dw = -zeta_y, J dzeta = -(J v_x + w_y) = 0
    const double J = 1.0 + eps / 3.0 * k * k;
    RealField ev = field_from_fn(
        g, [&](double x, double y) { return delta * k / J * std::sin(k * x + l * y); });
    RealField ew = field_from_fn(
        g, [&](double x, double y) { return delta * l / J * std::sin(k * x + l * y); });
    CHECK(test::rel_linf(tl.dv, ev) < 1e-12);
    CHECK(test::rel_linf(tl.dw, ew) < 1e-12);
    CHECK(max_abs(tl.dzeta) < 1e-15);

    // the nonlinear evaluation deviates only by the quadratic terms,
    // O(eps k delta^2)
    Tendency t = rhs(SystemId::Case1, s, p);
    CHECK(max_abs(t.dv - tl.dv) < 10.0 * eps * (k + l) * delta * delta);
    CHECK(max_abs(t.dzeta - tl.dzeta) < 10.0 * eps * (k + l) * delta * delta);
}

TEST_CASE("Case1 single-mode quadratic term with the elliptic factor") {
    GridSpec g = grid(64);
    const double eps = 0.1;
    State s(g);
    s.v = field_from_fn(g, [](double x, double) { return std::cos(x); });

    Tendency t = rhs(SystemId::Case1, s, ModelParams::case1(eps));
    // -e v v_x = 0.05 sin 2x, through (1 - (e/3) dx^2)^-1 at mode 2
    const double coef = 0.05 / (1.0 + (eps / 3.0) * 4.0);
    RealField ev = field_from_fn(g, [&](double x, double) { return coef * std::sin(2.0 * x); });
    CHECK(test::rel_linf(t.dv, ev) < 1e-12);
    CHECK(max_abs(t.dw) < 1e-14);
    // zeta equation: J dzeta = -(J v_x) => dzeta = sin x
    RealField ez = field_from_fn(g, [](double x, double) { return std::sin(x); });
    CHECK(test::rel_linf(t.dzeta, ez) < 1e-12);
}

TEST_CASE("Case1/Case2 equal the generic WTB2 evaluator at their coefficients") {
    GridSpec g = grid(32);
    const double eps = 0.15;
    State s = random_curl_free_state(CaseTag::Case1, g, eps, 4, 0.3, 42);
    ModelParams p1 = ModelParams::case1(eps);
    Tendency a = rhs(SystemId::Case1, s, p1);
    Tendency b = rhs(SystemId::WTB2, s, ModelParams::general(p1.coef(), eps));
    CHECK(test::rel_linf(a.dv, b.dv) < 1e-14);
    CHECK(test::rel_linf(a.dzeta, b.dzeta) < 1e-14);

    State s2 = random_curl_free_state(CaseTag::Case2, g, eps, 4, 0.3, 43);
    ModelParams p2 = ModelParams::case2(eps);
    Tendency c = rhs(SystemId::Case2, s2, p2);
    Tendency d = rhs(SystemId::WTB2, s2, ModelParams::general(p2.coef(), eps));
    CHECK(test::rel_linf(c.dw, d.dw) < 1e-14);
}

TEST_CASE("rhs rejects mismatched case coefficients") {
    GridSpec g = grid(16);
    State s(g);
    CHECK_THROWS_AS(rhs(SystemId::Case1, s, ModelParams::case2(0.1)), ArgumentError);
}

TEST_CASE("zeta_tilde values and fixed-point inverse") {
    GridSpec g = grid(32);
    RealField zero(g);
    CHECK(max_abs(zeta_tilde(zero, 0.1)) == 0.0);

    RealField two = field_from_fn(g, [](double, double) { return 2.0; });
    RealField zt = zeta_tilde(two, 0.1);
    CHECK(max_abs(zt - field_from_fn(g, [](double, double) { return 1.9; })) < 1e-13);

    RealField z = field_from_fn(g, [](double x, double y) {
        return 0.4 * std::cos(x) + 0.3 * std::sin(x + y);
    });
    RealField back = zeta_from_tilde(zeta_tilde(z, 0.2), 0.2);
    CHECK(test::rel_linf(back, z) < 1e-11);
}

TEST_CASE("curl residual") {
    GridSpec g = grid(32);
    State s(g);
    CHECK(curl_residual(s, 0.1, false) == 0.0);

    s.v = field_from_fn(g, [](double x, double y) { return std::sin(x + y); });
    s.w = s.v;
    CHECK(curl_residual(s, 0.1, false) < 1e-12);

    State s2(g);
    s2.v = field_from_fn(g, [](double, double y) { return std::cos(y); });
    const double expect = std::sqrt(2.0) * std::numbers::pi;  // ||sin y||_L2 on [0,2pi)^2
    CHECK(curl_residual(s2, 0.1, false) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("rhs preserves the curl-free condition exactly") {
    GridSpec g = grid(32);
    const double eps = 0.12;
    for (CaseTag tag : {CaseTag::Case1, CaseTag::Case2}) {
        State s = random_curl_free_state(tag, g, eps, 5, 0.5, 7);
        ModelParams p = tag == CaseTag::Case1 ? ModelParams::case1(eps) : ModelParams::case2(eps);
        Tendency t = rhs(system_of_case(tag), s, p);
        State ds(g);
        ds.v = t.dv;
        ds.w = t.dw;
        CHECK(curl_residual(ds, eps, false) < 1e-12);
    }
}

TEST_CASE("consistency residual vanishes on zero data and scales out") {
    GridSpec g = grid(32);
    ModelParams p = ModelParams::case2(0.1);
    State s(g);
    ConsistencyResidual r = consistency_residual(s, p);
    CHECK(r.total == 0.0);
    CHECK(r.per_equation[0] == 0.0);
}

TEST_CASE("consistency residual decays at the eps^2 rate") {
    State s = consistency_profile(grid(48), 0.1);
    const std::array<double, 7> co = {-0.1, 0.2, -0.05, 17.0 / 60.0, 0.9, -0.05, -7.0 / 15.0};
    double r1 = consistency_residual(s, ModelParams::general(co, 0.1)).total;
    double r2 = consistency_residual(s, ModelParams::general(co, 0.05)).total;
    CHECK(r1 / r2 > 3.4);
    CHECK(r1 / r2 < 4.6);
}

TEST_CASE("consistency residual is quadratic in the data at leading order") {
    GridSpec g = grid(48);
    ModelParams p = ModelParams::general(ModelParams::case2(0.05).coef(), 0.05);
    RunConfig cfg;
    cfg.system = SystemId::WTB1;
    cfg.params = p;
    cfg.grid = g;
    cfg.init = InitFamily::Gaussian;
    cfg.amplitude = 0.1;
    State s1 = initial_state(cfg);
    cfg.amplitude = 0.05;
    State s2 = initial_state(cfg);
    double r1 = consistency_residual(s1, p).total;
    double r2 = consistency_residual(s2, p).total;
    // residual ~ eps^2 * quadratic(data): halving data quarters the residual
    CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.15));
}
