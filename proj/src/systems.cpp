#include "wtbouss/systems.hpp"

#include <cmath>

#include "wtbouss/energy.hpp"

namespace wtbouss {

CaseTag case_of(SystemId sys) {
    switch (sys) {
        case SystemId::Case1: return CaseTag::Case1;
        case SystemId::Case2: return CaseTag::Case2;
        default: return CaseTag::General;
    }
}

SystemId system_of_case(CaseTag tag) {
    switch (tag) {
        case CaseTag::Case1: return SystemId::Case1;
        case CaseTag::Case2: return SystemId::Case2;
        default: return SystemId::WTB2;
    }
}

namespace {

void require_finite(const State& s, const char* where) {
    if (!all_finite(s.v) || !all_finite(s.w) || !all_finite(s.zeta))
        throw NumericalError(std::string(where) + ": non-finite field");
}

// (1 + q*eps*dx^2) dx  acting on a spectrum:  (1 - q*eps*xi1^2) * i xi1
SpectralField lin_x(const SpectralField& z, double q, double eps) {
    SpectralField out(z.grid);
    const GridSpec& g = z.grid;
    for (int i = 0; i < g.nx; ++i) {
        const double x1 = (2 * std::abs(g.kx_of(i)) == g.nx) ? 0.0 : g.xi1_of(i);
        const double m = 1.0 - q * eps * x1 * x1;
        for (int j = 0; j < g.nyh(); ++j) out.at(i, j) = m * Complex(0.0, x1) * z.at(i, j);
    }
    return out;
}

// (1 + q*eps*dx^2) dy:  (1 - q*eps*xi1^2) * i xi2
SpectralField lin_y(const SpectralField& z, double q, double eps) {
    SpectralField out(z.grid);
    const GridSpec& g = z.grid;
    for (int i = 0; i < g.nx; ++i) {
        const double x1 = g.xi1_of(i);
        const double m = 1.0 - q * eps * x1 * x1;
        for (int j = 0; j < g.nyh(); ++j) {
            const double x2 = (2 * j == g.ny) ? 0.0 : g.xi2_of(j);
            out.at(i, j) = m * Complex(0.0, x2) * z.at(i, j);
        }
    }
    return out;
}

// divide by the elliptic factor (1 - q*eps*dx^2): symbol 1 + q*eps*xi1^2 >= 1
void invert_elliptic(SpectralField& f, double q, double eps) {
    const GridSpec& g = f.grid;
    for (int i = 0; i < g.nx; ++i) {
        const double x1 = g.xi1_of(i);
        const double m = 1.0 / (1.0 + q * eps * x1 * x1);
        for (int j = 0; j < g.nyh(); ++j) f.at(i, j) *= m;
    }
}

ModelParams params_for(SystemId sys, const ModelParams& p) {
    switch (sys) {
        case SystemId::Case1: {
            if (p.case_tag != CaseTag::Case1)
                throw ArgumentError("rhs: Case1 system requires Case1 coefficients");
            return p;
        }
        case SystemId::Case2: {
            if (p.case_tag != CaseTag::Case2)
                throw ArgumentError("rhs: Case2 system requires Case2 coefficients");
            return p;
        }
        default: return p;
    }
}

}  // namespace

Tendency rhs(SystemId sys, const State& s, const ModelParams& p0, bool linearized) {
    require_same_grid(s.v.grid, s.w.grid, "rhs");
    require_same_grid(s.v.grid, s.zeta.grid, "rhs");
    require_finite(s, "rhs");
    const ModelParams p = params_for(sys, p0);
    const double eps = p.eps;
    const bool aniso = (sys == SystemId::WTB1);
    const double se = std::sqrt(eps);

    SpectralField sv = transform(s.v), sw = transform(s.w), sz = transform(s.zeta);
    truncate_to_band(sv);
    truncate_to_band(sw);
    truncate_to_band(sz);

    SpectralField Fv = lin_x(sz, p.a, eps);                     // (1+a e dx^2) zeta_x
    SpectralField Fw = lin_y(sz, p.f, eps);                     // (1+f e dx^2) zeta_y
    if (aniso) Fw *= se;
    SpectralField Fz = lin_x(sv, p.c, eps) + (aniso ? se : 1.0) * lin_y(sw, p.g, eps);

    if (!linearized) {
        RealField v = inverse_transform(sv), w = inverse_transform(sw), z = inverse_transform(sz);
        RealField vx = inverse_transform(ddx(sv)), vy = inverse_transform(ddy(sv));
        RealField wx = inverse_transform(ddx(sw)), wy = inverse_transform(ddy(sw));
        RealField zx = inverse_transform(ddx(sz)), zy = inverse_transform(ddy(sz));

        if (aniso) {
            // eps (v v_x + 1/2 w w_x) + (eps^{3/2}/2) w v_y
            RealField nv = eps * pmul(v, vx) + (0.5 * eps) * pmul(w, wx) +
                           (0.5 * eps * se) * pmul(w, vy);
            // (eps/2) v w_x + eps^{3/2} (w w_y + 1/2 v v_y)
            RealField nw = (0.5 * eps) * pmul(v, wx) + (eps * se) * pmul(w, wy) +
                           (0.5 * eps * se) * pmul(v, vy);
            Fv += transform(nv);
            Fw += transform(nw);
            // eps (zeta v)_x + eps^{3/2} (zeta w)_y, flux form
            Fz += eps * ddx(transform(pmul(z, v))) + eps * se * ddy(transform(pmul(z, w)));
        } else {
            RealField nv = eps * (pmul(v, vx) + pmul(w, vy)) + (0.5 * eps) * pmul(z, zx);
            RealField nw = eps * (pmul(v, wx) + pmul(w, wy)) + (0.5 * eps) * pmul(z, zy);
            RealField nz = eps * (pmul(v, zx) + pmul(w, zy)) +
                           (0.5 * eps) * (pmul(z, vx) + pmul(z, wy));
            Fv += transform(nv);
            Fw += transform(nw);
            Fz += transform(nz);
        }
        truncate_to_band(Fv);
        truncate_to_band(Fw);
        truncate_to_band(Fz);
    }

    invert_elliptic(Fv, p.b, eps);
    invert_elliptic(Fw, p.e, eps);
    invert_elliptic(Fz, p.d, eps);

    Tendency t;
    t.dv = inverse_transform(-1.0 * Fv);
    t.dw = inverse_transform(-1.0 * Fw);
    t.dzeta = inverse_transform(-1.0 * Fz);
    if (!all_finite(t.dv) || !all_finite(t.dw) || !all_finite(t.dzeta))
        throw NumericalError("rhs: non-finite tendency");
    return t;
}

RealField zeta_tilde(const RealField& zeta, double eps) {
    return zeta - (0.25 * eps) * dealiased_product(zeta, zeta);
}

RealField zeta_from_tilde(const RealField& zt, double eps, double tol, int max_iter) {
    RealField z = zt;
    const double scale = 1.0 + max_abs(zt);
    for (int it = 0; it < max_iter; ++it) {
        RealField next = zt + (0.25 * eps) * dealiased_product(z, z);
        double delta = max_abs(next - z);
        z = std::move(next);
        if (delta < tol * scale) return z;
    }
    throw NumericalError("zeta_from_tilde: fixed point did not converge");
}

double curl_residual(const State& s, double eps, bool scaled) {
    RealField r = ddy(s.v);
    if (scaled) r *= std::sqrt(eps);
    r -= ddx(s.w);
    return l2_norm(r);
}

ConsistencyResidual consistency_residual(const State& s, const ModelParams& p, int n) {
    require_valid(p);
    const double eps = p.eps;
    const double se = std::sqrt(eps);

    Tendency t = rhs(SystemId::WTB1, s, p);

    SpectralField sv = transform(s.v), sw = transform(s.w), szb = transform(s.zeta);
    truncate_to_band(sv);
    truncate_to_band(sw);
    truncate_to_band(szb);
    RealField v = inverse_transform(sv), w = inverse_transform(sw);
    RealField zb = inverse_transform(szb);
    RealField zt = zeta_tilde(zb, eps);
    SpectralField szt = transform(zt);

    // d/dt zeta_tilde = zeta_t - (eps/2) zeta zeta_t, analytically
    RealField zt_t = t.dzeta - (0.5 * eps) * pmul(zb, t.dzeta);

    RealField vx = inverse_transform(ddx(sv)), vy = inverse_transform(ddy(sv));
    RealField wx = inverse_transform(ddx(sw)), wy = inverse_transform(ddy(sw));
    RealField ztx = inverse_transform(ddx(szt)), zty = inverse_transform(ddy(szt));

    // elliptic factor (1 - q eps dx^2) applied spectrally
    auto ell = [&](const RealField& f, double q) {
        return inverse_transform(
            apply_multiplier(transform(f), [q, eps](double x1, double) {
                return 1.0 + q * eps * x1 * x1;
            }));
    };

    RealField r1 = ell(t.dv, p.b) + inverse_transform(lin_x(szt, p.a, eps)) +
                   eps * (pmul(v, vx) + 0.5 * pmul(w, wx)) +
                   (0.5 * eps * se) * pmul(w, vy) + (0.5 * eps) * pmul(zt, ztx);

    RealField r2 = ell(t.dw, p.e) + se * inverse_transform(lin_y(szt, p.f, eps)) +
                   (0.5 * eps) * pmul(v, wx) +
                   eps * se * (pmul(w, wy) + 0.5 * pmul(v, vy) + 0.5 * pmul(zt, zty));

    RealField r3 = ell(zt_t, p.d) + inverse_transform(lin_x(sv, p.c, eps)) +
                   se * inverse_transform(lin_y(sw, p.g, eps)) +
                   eps * pmul(v, ztx) + eps * se * pmul(w, zty) +
                   (0.5 * eps) * (pmul(zt, vx) + (se) * pmul(zt, wy));

    ConsistencyResidual out;
    out.n = n;
    out.per_equation[0] = sobolev_norm(r1, double(n), NormFlavor::HsEps, eps);
    out.per_equation[1] = sobolev_norm(r2, double(n), NormFlavor::HsEps, eps);
    out.per_equation[2] = sobolev_norm(r3, double(n), NormFlavor::HsEps, eps);
    out.total = std::sqrt(out.per_equation[0] * out.per_equation[0] +
                          out.per_equation[1] * out.per_equation[1] +
                          out.per_equation[2] * out.per_equation[2]);
    return out;
}

}  // namespace wtbouss
