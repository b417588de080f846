#include "wtbouss/unknowns.hpp"

#include <cmath>

namespace wtbouss {

GoodUnknowns to_ptheta(CaseTag tag, const State& s, double eps) {
    CaseOps ops(tag, eps);
    SpectralField sv = transform(s.v), sw = transform(s.w), sz = transform(s.zeta);
    truncate_to_band(sv);
    truncate_to_band(sw);
    truncate_to_band(sz);

    GoodUnknowns u;
    u.case_tag = tag;
    u.p = inverse_transform(ddx(sv) + ops.k(ddy(sw), -1.0));
    u.theta = inverse_transform(ops.lam(sz, 1.0));
    return u;
}

State from_ptheta(CaseTag tag, const RealField& p, const RealField& theta, double eps) {
    require_same_grid(p.grid, theta.grid, "from_ptheta");
    const double scale = 1.0 + std::max(max_abs(p), max_abs(theta));
    if (std::abs(mean(p)) > 1e-12 * scale || std::abs(mean(theta)) > 1e-12 * scale)
        throw ArgumentError("from_ptheta: p and theta must be zero-mean");

    CaseOps ops(tag, eps);
    SpectralField sp = transform(p), st = transform(theta);
    truncate_to_band(sp);
    truncate_to_band(st);

    State s(p.grid);
    // V = -AB^-2 K grad p  (case 1: K = J); zeta = K AB^-1 theta = Lambda^-1 theta
    SpectralField kp = ops.k(sp, 1.0);
    s.v = inverse_transform(-1.0 * ops.ab(ddx(kp), -2.0));
    s.w = inverse_transform(-1.0 * ops.ab(ddy(kp), -2.0));
    s.zeta = inverse_transform(ops.lam(st, -1.0));
    return s;
}

namespace {

RealField to_band(const RealField& f) {
    SpectralField s = transform(f);
    truncate_to_band(s);
    return inverse_transform(s);
}

}  // namespace

RealField resolvent_apply(const RealField& zeta_in, const RealField& f_in, double eps,
                          const ResolventConfig& cfg, ResolventStats* stats) {
    require_same_grid(zeta_in.grid, f_in.grid, "resolvent_apply");
    cfg.validate();
    // operands live on the dealias band, like every field in this library;
    // project defensively so the series products stay alias-free
    RealField zeta = to_band(zeta_in);
    RealField f = to_band(f_in);
    const double nf = l2_norm(f);
    RealField sum = 0.5 * f;
    if (nf == 0.0) {
        if (stats) *stats = {0.0, 1};
        return sum;
    }

    // iterate g <- (eps/4) zeta . Y^-1 g
    auto yinv = [&](const RealField& g) {
        return inverse_transform(apply_multiplier(transform(g), [eps](double x1, double) {
            return 1.0 / (1.0 + eps / 6.0 * x1 * x1);
        }));
    };

    RealField g = f;
    double sign = -1.0;
    double factor = 0.0;
    int terms = 1;
    for (int n = 1; n <= cfg.max_terms; ++n, ++terms) {
        const double ng = l2_norm(g);
        if (ng == 0.0) {
            if (stats) *stats = {factor, terms};
            return sum;
        }
        RealField next = (0.25 * eps) * pmul(zeta, yinv(g));
        const double r = l2_norm(next) / ng;
        factor = std::max(factor, r);
        if (r >= cfg.norm_guard) {
            if (stats) *stats = {factor, terms};
            throw GuardError("resolvent_apply: contraction guard violated, factor " +
                                 std::to_string(r),
                             r);
        }
        g = std::move(next);
        sum += (0.5 * sign) * g;
        sign = -sign;
        const double tn = l2_norm(g);
        if (tn < cfg.tol * nf) {
            if (stats) *stats = {factor, terms + 1};
            return sum;
        }
    }
    throw NumericalError("resolvent_apply: Neumann series did not reach tolerance; "
                         "last term norm " +
                         std::to_string(l2_norm(g)));
}

GammaPair gamma_apply(const RealField& zeta_in, const RealField& f_in, double eps,
                      const ResolventConfig& cfg) {
    GammaPair out;
    RealField zeta = to_band(zeta_in);
    RealField f = to_band(f_in);
    RealField zf = pmul(zeta, f);
    out.Gamma = resolvent_apply(zeta, zf, eps, cfg, &out.stats);
    auto yinv = [&](const RealField& g) {
        return inverse_transform(apply_multiplier(transform(g), [eps](double x1, double) {
            return 1.0 / (1.0 + eps / 6.0 * x1 * x1);
        }));
    };
    out.gamma = out.Gamma + (0.5 * eps) * pmul(zeta, yinv(out.Gamma));
    return out;
}

GoodUnknowns to_tilde(CaseTag tag, const State& s, double eps,
                      const ResolventConfig& cfg, ResolventStats* stats) {
    GoodUnknowns u = to_ptheta(tag, s, eps);
    CaseOps ops(tag, eps);

    SpectralField sv = transform(s.v), sw = transform(s.w), sz = transform(s.zeta);
    truncate_to_band(sv);
    truncate_to_band(sw);
    truncate_to_band(sz);
    RealField v = inverse_transform(sv), w = inverse_transform(sw), z = inverse_transform(sz);
    SpectralField sp = transform(u.p), st = transform(u.theta);

    if (tag == CaseTag::Case1) {
        if (eps * max_abs(z) >= 2.0)
            throw GuardError("to_tilde: denominator 2 + (eps/2) zeta not bounded away from 0",
                             eps * max_abs(z));
        // p~ = p + (e/2) J^-1(z Jp) + e J^-1(V . grad A^-1 J theta)
        //        - (e^2/6) (1+e z/2)/(2+e z/2) z A^-2 dx^4 p
        RealField Jp = inverse_transform(ops.j(sp, 1.0));
        SpectralField ajt = ops.ab(ops.j(st, 1.0), -1.0);
        RealField gx = inverse_transform(ddx(ajt)), gy = inverse_transform(ddy(ajt));
        RealField corr = (0.5 * eps) * pmul(z, Jp) + eps * (pmul(v, gx) + pmul(w, gy));
        SpectralField scorr = ops.j(transform(corr), -1.0);

        RealField Gz = banded_pointwise(
            [eps](double zv) { return (1.0 + 0.5 * eps * zv) * zv / (2.0 + 0.5 * eps * zv); },
            z);
        RealField a2p = inverse_transform(ops.ab(ddx(ddx(ddx(ddx(sp)))), -2.0));
        u.p_tilde = u.p + inverse_transform(scorr) - (eps * eps / 6.0) * pmul(Gz, a2p);

        // th~ = th + (e/2) J^-1 A^-1 (z . A J th) - e J^-1 A^-1 (V . grad J p)
        RealField AJt = inverse_transform(ops.ab(ops.j(st, 1.0), 1.0));
        RealField jpx = inverse_transform(ddx(ops.j(sp, 1.0)));
        RealField jpy = inverse_transform(ddy(ops.j(sp, 1.0)));
        RealField tcorr = (0.5 * eps) * pmul(z, AJt) - eps * (pmul(v, jpx) + pmul(w, jpy));
        u.theta_tilde =
            u.theta + inverse_transform(ops.j(ops.ab(transform(tcorr), -1.0), -1.0));
        if (stats) *stats = {0.0, 0};
    } else {
        // p~ = p + e J^-1 (V . grad B^-1 K th + z K p / 2)
        //        - (e^2/6) gamma_eps Y^-2 B^-2 dx^4 p
        SpectralField kt = ops.k(st, 1.0);
        SpectralField bkt = ops.ab(kt, -1.0);
        RealField gx = inverse_transform(ddx(bkt)), gy = inverse_transform(ddy(bkt));
        RealField Kp = inverse_transform(ops.k(sp, 1.0));
        RealField corr = eps * (pmul(v, gx) + pmul(w, gy) + 0.5 * pmul(z, Kp));
        RealField op = inverse_transform(
            ops.y(ops.ab(ddx(ddx(ddx(ddx(sp)))), -2.0), -2.0));
        GammaPair gp = gamma_apply(z, op, eps, cfg);
        if (stats) *stats = gp.stats;
        u.p_tilde = u.p + inverse_transform(ops.j(transform(corr), -1.0)) -
                    (eps * eps / 6.0) * gp.gamma;

        // th~ = th - e J^-1 B^-1 (V . grad K p - z B K th / 2)
        RealField kpx = inverse_transform(ddx(ops.k(sp, 1.0)));
        RealField kpy = inverse_transform(ddy(ops.k(sp, 1.0)));
        RealField BKt = inverse_transform(ops.ab(kt, 1.0));
        RealField tcorr = pmul(v, kpx) + pmul(w, kpy) - 0.5 * pmul(z, BKt);
        u.theta_tilde =
            u.theta - eps * inverse_transform(ops.j(ops.ab(transform(tcorr), -1.0), -1.0));
    }
    return u;
}

}  // namespace wtbouss
