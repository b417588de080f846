#include <doctest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "wtbouss/verify.hpp"

using namespace wtbouss;
using test::field_from_fn;
using test::grid;

namespace {
constexpr double pi = std::numbers::pi;
const double two_pi_sq = 2.0 * pi * pi;  // |cos x|_{L2}^2 on [0,2pi)^2
}

TEST_CASE("sobolev norms: zero,单-mode value, homogeneity") {
    GridSpec g = grid(64);
    RealField zero(g);
    CHECK(sobolev_norm(zero, 3.0, NormFlavor::Inhomogeneous) == 0.0);

    RealField f = field_from_fn(g, [](double x, double) { return std::cos(x); });
    // weight <(1,0)>^2 = 2: sqrt(2)*|cos x|_L2 = sqrt(2)*sqrt(2 pi^2) = 2 pi
    CHECK(sobolev_norm(f, 1.0, NormFlavor::Inhomogeneous) ==
          doctest::Approx(2.0 * pi).epsilon(1e-12));
    CHECK(sobolev_norm(f, 1.0, NormFlavor::Homogeneous) ==
          doctest::Approx(std::sqrt(two_pi_sq)).epsilon(1e-12));

    Rng rng(3);
    RealField r(g);
    for (double& x : r.v) x = rng.gaussian();
    const double a = -2.7;
    CHECK(sobolev_norm(a * r, 2.5, NormFlavor::Inhomogeneous) ==
          doctest::Approx(std::abs(a) * sobolev_norm(r, 2.5, NormFlavor::Inhomogeneous))
              .epsilon(1e-13));
}

TEST_CASE("hs_eps norm carries the eps^{-1/2} prefactor and anisotropic weight") {
    GridSpec g = grid(32);
    const double eps = 0.1;
    RealField f = field_from_fn(g, [](double, double y) { return std::cos(y); });
    // mode (0,1): weight eps^{-1/2} (eps * 1)^s with s = 2
    const double expect = std::pow(eps, -0.25) * eps * std::sqrt(two_pi_sq);
    CHECK(sobolev_norm(f, 2.0, NormFlavor::HsEps, eps) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("energy on the zero state is zero") {
    GridSpec g = grid(32);
    State s(g);
    for (CaseTag tag : {CaseTag::Case1, CaseTag::Case2}) {
        EnergyReport r = energy(tag, s, 4.0, 0.1);
        CHECK(r.e_total == 0.0);
        CHECK(r.e_low == 0.0);
        CHECK(r.e_high == 0.0);
    }
}

TEST_CASE("case-1 energy of v = cos x at s = 0, eps = 0") {
    GridSpec g = grid(64);
    State s(g);
    s.v = field_from_fn(g, [](double x, double) { return std::cos(x); });
    EnergyReport r = energy(CaseTag::Case1, s, 0.0, 0.0);
    CHECK(r.e_low == doctest::Approx(two_pi_sq).epsilon(1e-12));
    CHECK(r.e_high == doctest::Approx(two_pi_sq).epsilon(1e-12));
    CHECK(r.e_total == doctest::Approx(2.0 * two_pi_sq).epsilon(1e-12));
}

TEST_CASE("J-weighted norms increase with eps") {
    GridSpec g = grid(32);
    Rng rng(17);
    State s(g);
    for (double& x : s.v.v) x = rng.gaussian();
    for (double& x : s.w.v) x = rng.gaussian();
    for (double& x : s.zeta.v) x = rng.gaussian();
    double prev_low = -1.0;
    for (double eps : {0.0, 0.05, 0.2, 0.8}) {
        EnergyReport r = energy(CaseTag::Case1, s, 3.0, eps);
        CHECK(r.e_low > prev_low);
        prev_low = r.e_low;
    }
    CHECK(weighted_norm(s.v, CaseTag::Case2, 0.3, 1.0, 2.0, false) >
          weighted_norm(s.v, CaseTag::Case2, 0.1, 1.0, 2.0, false));
}

TEST_CASE("tilde energy values") {
    GridSpec g = grid(64);
    RealField zero(g);
    CHECK(tilde_energy(zero, zero, CaseTag::Case1, 4.0, 0.1) == 0.0);

    RealField pt = field_from_fn(g, [](double x, double) { return std::cos(x); });
    const double expect = (1.0 + 0.1 / 3.0) * two_pi_sq;
    CHECK(tilde_energy(pt, zero, CaseTag::Case1, 0.0, 0.1) ==
          doctest::Approx(expect).epsilon(1e-12));

    RealField biased = field_from_fn(g, [](double, double) { return 1.0; });
    CHECK_THROWS_AS(tilde_energy(biased, zero, CaseTag::Case1, 4.0, 0.1), ArgumentError);
}

TEST_CASE("inhomogeneous vs homogeneous+L2: per-mode weight bounds") {
    // (1+r^2)^s >= (r^{2s} + 1)/2 for all s >= 0; the upper constant is 2^s
    GridSpec g = grid(48);
    Rng rng(23);
    RealField f(g);
    for (double& x : f.v) x = rng.gaussian();
    for (double s : {0.5, 1.0, 2.0, 4.0}) {
        const double h2 = std::pow(sobolev_norm(f, s, NormFlavor::Inhomogeneous), 2);
        const double parts = std::pow(sobolev_norm(f, s, NormFlavor::Homogeneous), 2) +
                             std::pow(l2_norm(f), 2);
        CHECK(h2 >= 0.5 * parts * (1.0 - 1e-12));
        CHECK(h2 <= std::pow(2.0, s) * parts * (1.0 + 1e-12));
        if (s <= 1.0) CHECK(h2 <= 2.0 * parts * (1.0 + 1e-12));
    }
}

TEST_CASE("energies are invariant under spatial translation") {
    GridSpec g = grid(32);
    State s = random_curl_free_state(CaseTag::Case2, g, 0.2, 5, 0.7, 31);
    // translate by half a cell diagonal via a spectral phase shift
    auto shift = [&](const RealField& f) {
        SpectralField sf = transform(f);
        for (int i = 0; i < g.nx; ++i)
            for (int j = 0; j < g.nyh(); ++j) {
                const double ph = g.xi1_of(i) * 1.3 + g.xi2_of(j) * 0.7;
                sf.at(i, j) *= Complex(std::cos(ph), -std::sin(ph));
            }
        return inverse_transform(sf);
    };
    State t(g);
    t.v = shift(s.v);
    t.w = shift(s.w);
    t.zeta = shift(s.zeta);
    for (CaseTag tag : {CaseTag::Case1, CaseTag::Case2}) {
        EnergyReport a = energy(tag, s, 4.0, 0.2);
        EnergyReport b = energy(tag, t, 4.0, 0.2);
        CHECK(a.e_total == doctest::Approx(b.e_total).epsilon(1e-11));
        CHECK(a.e_low == doctest::Approx(b.e_low).epsilon(1e-11));
        CHECK(a.e_high == doctest::Approx(b.e_high).epsilon(1e-11));
    }
}

TEST_CASE("linear flow conserves |J^1/2 p|^2 + |J^1/2 theta|^2 per mode") {
    // the linear part rotates each (p, theta) mode pair; the J weight is
    // shared, so any per-mode rotation leaves the quantity unchanged
    GridSpec g = grid(32);
    const double eps = 0.15;
    Rng rng(41);
    RealField p = random_band_limited(g, 5, rng);
    RealField th = random_band_limited(g, 5, rng);
    SpectralField sp = transform(p), st = transform(th);
    const double q0 = std::pow(weighted_norm(sp, CaseTag::Case1, eps, 1.0, 0.0, false), 2) +
                      std::pow(weighted_norm(st, CaseTag::Case1, eps, 1.0, 0.0, false), 2);
    SpectralField sp2 = sp, st2 = st;
    Rng rng2(42);
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.nyh(); ++j) {
            const double a = 2.0 * pi * rng2.uniform();
            const Complex cp = sp.at(i, j), ct = st.at(i, j);
            sp2.at(i, j) = std::cos(a) * cp + std::sin(a) * ct;
            st2.at(i, j) = -std::sin(a) * cp + std::cos(a) * ct;
        }
    const double q1 = std::pow(weighted_norm(sp2, CaseTag::Case1, eps, 1.0, 0.0, false), 2) +
                      std::pow(weighted_norm(st2, CaseTag::Case1, eps, 1.0, 0.0, false), 2);
    CHECK(q1 == doctest::Approx(q0).epsilon(1e-12));
}
