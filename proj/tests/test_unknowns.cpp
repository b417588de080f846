#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "wtbouss/verify.hpp"

using namespace wtbouss;
using test::field_from_fn;
using test::grid;

TEST_CASE("to_ptheta on the zero state") {
    GridSpec g = grid(32);
    State s(g);
    GoodUnknowns u = to_ptheta(CaseTag::Case1, s, 0.1);
    CHECK(max_abs(u.p) == 0.0);
    CHECK(max_abs(u.theta) == 0.0);
}

TEST_CASE("to_ptheta: p = v_x when w = zeta = 0") {
    GridSpec g = grid(64);
    State s(g);
    s.v = field_from_fn(g, [](double x, double) { return std::cos(x); });
    GoodUnknowns u = to_ptheta(CaseTag::Case1, s, 0.1);
    RealField expect = field_from_fn(g, [](double x, double) { return -std::sin(x); });
    CHECK(test::rel_linf(u.p, expect) < 1e-13);
    CHECK(max_abs(u.theta) < 1e-15);
}

TEST_CASE("to_ptheta: theta is Lambda1 zeta") {
    GridSpec g = grid(64);
    State s(g);
    s.zeta = field_from_fn(g, [](double x, double) { return std::cos(2.0 * x); });
    GoodUnknowns u = to_ptheta(CaseTag::Case1, s, 0.3);
    const double lam = 2.0 / std::sqrt(1.4);  // 1.6903085094570331
    CHECK(max_abs(u.theta) == doctest::Approx(lam).epsilon(1e-12));
    CHECK(std::abs(mean(u.theta)) < 1e-15);
}

TEST_CASE("from_ptheta zero and single-mode values") {
    GridSpec g = grid(64);
    RealField zero(g);
    State s0 = from_ptheta(CaseTag::Case2, zero, zero, 0.1);
    CHECK(test::data_scale(s0) == 0.0);

    // p = cos x, case 1, eps = 0.1: gains J = A^2 at (1,0) cancel, v = sin x
    RealField p = field_from_fn(g, [](double x, double) { return std::cos(x); });
    State s = from_ptheta(CaseTag::Case1, p, zero, 0.1);
    RealField expect = field_from_fn(g, [](double x, double) { return std::sin(x); });
    CHECK(test::rel_linf(s.v, expect) < 1e-13);
    CHECK(max_abs(s.w) < 1e-15);
}

TEST_CASE("from_ptheta output is exactly curl-free and inverts to_ptheta") {
    GridSpec g = grid(48);
    for (CaseTag tag : {CaseTag::Case1, CaseTag::Case2}) {
        const double eps = 0.17;
        State s = random_curl_free_state(tag, g, eps, 6, 0.8, 101);
        CHECK(curl_residual(s, eps, false) < 1e-13);

        GoodUnknowns u = to_ptheta(tag, s, eps);
        State back = from_ptheta(tag, u.p, u.theta, eps);
        CHECK(test::rel_linf(back.v, s.v) < 1e-12);
        CHECK(test::rel_linf(back.w, s.w) < 1e-12);
        CHECK(test::rel_linf(back.zeta, s.zeta) < 1e-12);
    }
}

TEST_CASE("from_ptheta rejects nonzero-mean input") {
    GridSpec g = grid(32);
    RealField p = field_from_fn(g, [](double, double) { return 1.0; });
    RealField zero(g);
    CHECK_THROWS_AS(from_ptheta(CaseTag::Case1, p, zero, 0.1), ArgumentError);
}

TEST_CASE("resolvent with zero zeta is division by two") {
    GridSpec g = grid(32);
    Rng rng(5);
    RealField f = random_band_limited(g, g.cutx(), rng);
    RealField zero(g);
    RealField u = resolvent_apply(zero, f, 0.2, ResolventConfig{});
    CHECK(test::rel_linf(u, 0.5 * f) < 1e-13);
}

TEST_CASE("resolvent with constant zeta matches the per-mode closed form") {
    GridSpec g = grid(64);
    const double eps = 0.3, c = 0.8;
    RealField zc = field_from_fn(g, [&](double, double) { return c; });
    RealField f = field_from_fn(g, [](double x, double y) {
        return std::cos(3.0 * x) + std::sin(y) + 0.5 * std::cos(x + 2.0 * y);
    });
    RealField u = resolvent_apply(zc, f, eps, ResolventConfig{});
    SpectralField sf = transform(f), su = transform(u);
    for (auto [k1, k2] : {std::pair{3, 0}, {0, 1}, {1, 2}}) {
        const double x1 = double(k1);
        const double y = 1.0 + eps / 6.0 * x1 * x1;
        const Complex expect = sf.mode(k1, k2) / (2.0 + 0.5 * eps * c / y);
        CHECK(std::abs(su.mode(k1, k2) - expect) < 1e-10 * std::abs(expect));
    }
}

TEST_CASE("resolvent forward defect is below 10*tol") {
    GridSpec g = grid(48);
    const double eps = 0.25;
    Rng rng(77);
    RealField zeta = 0.5 * random_band_limited(g, 6, rng);
    RealField f = random_band_limited(g, 6, rng);
    ResolventConfig cfg;
    RealField u = resolvent_apply(zeta, f, eps, cfg);
    // apply (2 + (eps/2) zeta Y^-1) to u and recover f
    RealField yu = apply_symbol(SymbolSpec::yeps(eps, -1.0), u);
    RealField back = 2.0 * u + (0.5 * eps) * pmul(zeta, yu);
    CHECK(l2_norm(back - f) <= 10.0 * cfg.tol * l2_norm(f));
}

TEST_CASE("resolvent guard refuses huge zeta") {
    GridSpec g = grid(32);
    RealField zeta = field_from_fn(g, [](double, double) { return 50.0; });
    RealField f = field_from_fn(g, [](double x, double) { return std::cos(x); });
    CHECK_THROWS_AS(resolvent_apply(zeta, f, 0.5, ResolventConfig{}), GuardError);
}

TEST_CASE("gamma identity and self-adjointness") {
    GridSpec g = grid(48);
    const double eps = 0.2;
    Rng rng(13);
    ResolventConfig cfg;
    for (int trial = 0; trial < 20; ++trial) {
        RealField zeta = 0.4 * random_band_limited(g, 6, rng);
        RealField f = random_band_limited(g, 6, rng);
        RealField h = random_band_limited(g, 6, rng);

        GammaPair gp = gamma_apply(zeta, f, eps, cfg);
        RealField zf = pmul(zeta, f);
        CHECK(l2_norm(gp.gamma + gp.Gamma - zf) <= 1e-10 * std::max(1.0, l2_norm(zf)));

        GammaPair gh = gamma_apply(zeta, h, eps, cfg);
        const double asym = std::abs(l2_inner(gp.gamma, h) - l2_inner(f, gh.gamma));
        CHECK(asym <= 1e-10 * l2_norm(f) * l2_norm(h));
        const double asymG = std::abs(l2_inner(gp.Gamma, h) - l2_inner(f, gh.Gamma));
        CHECK(asymG <= 1e-10 * l2_norm(f) * l2_norm(h));
    }
    RealField zero(g);
    GammaPair gz = gamma_apply(zero, zero, eps, cfg);
    CHECK(max_abs(gz.Gamma) == 0.0);
    CHECK(max_abs(gz.gamma) == 0.0);
}

TEST_CASE("to_tilde vanishes on the zero state and on pure-p data") {
    GridSpec g = grid(32);
    State s(g);
    ResolventConfig cfg;
    for (CaseTag tag : {CaseTag::Case1, CaseTag::Case2}) {
        GoodUnknowns u = to_tilde(tag, s, 0.1, cfg);
        CHECK(max_abs(u.p_tilde) == 0.0);
        CHECK(max_abs(u.theta_tilde) == 0.0);
    }

    // v = cos x only (case 1): theta = 0 and zeta = 0 kill every p-correction
    // term by term, so p_tilde = p exactly
    State s1(g);
    s1.v = field_from_fn(g, [](double x, double) { return std::cos(x); });
    GoodUnknowns u1 = to_tilde(CaseTag::Case1, s1, 0.1, cfg);
    CHECK(max_abs(u1.theta) < 1e-15);
    CHECK(test::rel_linf(u1.p_tilde, u1.p) < 1e-14);
}

TEST_CASE("tilde corrections scale linearly in eps") {
    GridSpec g = grid(48);
    ResolventConfig cfg;
    for (CaseTag tag : {CaseTag::Case1, CaseTag::Case2}) {
        double prev = 0.0;
        int k = 0;
        double slopes[2];
        for (double eps : {0.1, 0.05, 0.025}) {
            State s = random_curl_free_state(tag, g, eps, 5, 0.2, 303);
            GoodUnknowns u = to_tilde(tag, s, eps, cfg);
            double d = weighted_norm(remove_mean(u.p_tilde - u.p), tag, eps, 1.0, 4.0, false) +
                       weighted_norm(u.theta_tilde - u.theta, tag, eps, 1.0, 4.0, true);
            if (k > 0) slopes[k - 1] = std::log2(prev / d);
            prev = d;
            ++k;
        }
        for (double sl : slopes) CHECK(sl == doctest::Approx(1.0).epsilon(0.15));
    }
}

TEST_CASE("theta_tilde is zero-mean") {
    GridSpec g = grid(32);
    ResolventConfig cfg;
    State s = random_curl_free_state(CaseTag::Case2, g, 0.15, 5, 0.3, 9);
    GoodUnknowns u = to_tilde(CaseTag::Case2, s, 0.15, cfg);
    CHECK(std::abs(mean(u.theta_tilde)) < 1e-12 * (1.0 + max_abs(u.theta_tilde)));
}
