#include "wtbouss/verify.hpp"

#include <cmath>
#include <numbers>

namespace wtbouss {

double l2_inner(const RealField& f, const RealField& g) {
    require_same_grid(f.grid, g.grid, "l2_inner");
    double s = 0.0;
    for (size_t i = 0; i < f.v.size(); ++i) s += f.v[i] * g.v[i];
    return s * f.grid.cell_area();
}

namespace {

SpectralField dx4(const SpectralField& f) {
    SpectralField out(f.grid);
    const GridSpec& g = f.grid;
    for (int i = 0; i < g.nx; ++i) {
        const double x1 = g.xi1_of(i);
        const double m = x1 * x1 * x1 * x1;
        for (int j = 0; j < g.nyh(); ++j) out.at(i, j) = m * f.at(i, j);
    }
    return out;
}

SpectralField dxx(const SpectralField& f) {
    SpectralField out(f.grid);
    const GridSpec& g = f.grid;
    for (int i = 0; i < g.nx; ++i) {
        const double m = -g.xi1_of(i) * g.xi1_of(i);
        for (int j = 0; j < g.nyh(); ++j) out.at(i, j) = m * f.at(i, j);
    }
    return out;
}

RealField ir(const SpectralField& s) { return inverse_transform(s); }
SpectralField tf(const RealField& f) { return transform(f); }

}  // namespace

// ---------------------------------------------------------------------------
// dispersion

std::vector<DispersionResult> dispersion_sweep(SystemId sys, const ModelParams& p,
                                               const GridSpec& g,
                                               const std::vector<std::pair<int, int>>& modes,
                                               double T, double dt, double amp) {
    require_valid(p);
    const double eps = p.eps;
    const bool aniso = (sys == SystemId::WTB1);
    const double sy = aniso ? std::sqrt(eps) : 1.0;
    SymbolSpec lam = SymbolSpec::lambda_dr(p.coef(), eps, aniso);

    State s(g);
    SpectralField sz(g), svv(g), sww(g);
    std::vector<double> predicted(modes.size());
    for (size_t m = 0; m < modes.size(); ++m) {
        const auto [k1, k2] = modes[m];
        if (std::abs(k1) > g.cutx() || std::abs(k2) > g.cuty() || (k1 == 0 && k2 == 0))
            throw ArgumentError("dispersion: mode not resolved on this grid");
        const double x1 = 2.0 * std::numbers::pi * k1 / g.lx;
        const double x2 = 2.0 * std::numbers::pi * k2 / g.ly;
        const double L = lam.eval(x1, x2).real();
        if (!(L > 0.0)) throw ArgumentError("dispersion: degenerate mode");
        predicted[m] = L;
        const double a1 = (1.0 - p.a * eps * x1 * x1) / (1.0 + p.b * eps * x1 * x1);
        const double a2 = sy * (1.0 - p.f * eps * x1 * x1) / (1.0 + p.e * eps * x1 * x1);
        // eigenvector of the +i*Lambda branch: (v, w, zeta) = (-a1 x1/L, -a2 x2/L, 1)
        const double cn = amp * double(g.n()) / 2.0;
        sz.add_mode(k1, k2, Complex(cn, 0.0));
        svv.add_mode(k1, k2, Complex(-a1 * x1 / L * cn, 0.0));
        sww.add_mode(k1, k2, Complex(-a2 * x2 / L * cn, 0.0));
    }
    s.zeta = ir(sz);
    s.v = ir(svv);
    s.w = ir(sww);

    const long nsteps = std::lround(T / dt);
    std::vector<Complex> prev(modes.size());
    std::vector<double> phase(modes.size(), 0.0);
    {
        SpectralField s0 = tf(s.zeta);
        for (size_t m = 0; m < modes.size(); ++m)
            prev[m] = s0.mode(modes[m].first, modes[m].second);
    }
    RhsFn f = [&](const State& st) { return rhs(sys, st, p); };
    for (long n = 0; n < nsteps; ++n) {
        s = step(s, dt, f);
        SpectralField sc = tf(s.zeta);
        for (size_t m = 0; m < modes.size(); ++m) {
            Complex c = sc.mode(modes[m].first, modes[m].second);
            phase[m] += std::arg(c / prev[m]);
            prev[m] = c;
        }
    }

    std::vector<DispersionResult> out(modes.size());
    for (size_t m = 0; m < modes.size(); ++m) {
        out[m].k1 = modes[m].first;
        out[m].k2 = modes[m].second;
        out[m].predicted = predicted[m];
        out[m].measured = std::abs(phase[m]) / (dt * double(nsteps));
        out[m].rel_err = std::abs(out[m].measured - out[m].predicted) / out[m].predicted;
    }
    return out;
}

DispersionResult dispersion_check(SystemId sys, const ModelParams& p, const GridSpec& g,
                                  int k1, int k2, double T, double dt, double amp) {
    return dispersion_sweep(sys, p, g, {{k1, k2}}, T, dt, amp)[0];
}

// ---------------------------------------------------------------------------
// shared per-state workspace for the derived systems

namespace {

struct Work {
    CaseTag tag;
    double eps;
    CaseOps ops;
    GridSpec grid;

    RealField v, w, z;               // banded state
    RealField dv, dw, dz;            // analytic time derivatives
    RealField p, th;                 // good unknowns (first layer)
    SpectralField sp, sth;           // their spectra
    RealField p_t, th_t;             // their analytic time derivatives
    SpectralField sp_t, sth_t;
    RealField Np, Nth;               // quadratic remainders, as written
    RealField Np0;                   // mean-removed copy (torus convention)

    Work(CaseTag tag_, const State& st, double eps_)
        : tag(tag_), eps(eps_), ops(tag_, eps_), grid(st.grid()) {
        SpectralField sv = tf(st.v), sw = tf(st.w), sz = tf(st.zeta);
        truncate_to_band(sv);
        truncate_to_band(sw);
        truncate_to_band(sz);
        State sb(grid);
        sb.v = ir(sv);
        sb.w = ir(sw);
        sb.zeta = ir(sz);
        sb.time = st.time;
        v = sb.v; w = sb.w; z = sb.zeta;

        ModelParams mp = tag == CaseTag::Case1 ? ModelParams::case1(eps) : ModelParams::case2(eps);
        Tendency td = rhs(system_of_case(tag), sb, mp);
        dv = td.dv; dw = td.dw; dz = td.dzeta;

        GoodUnknowns u = to_ptheta(tag, sb, eps);
        p = u.p; th = u.theta;
        sp = tf(p); sth = tf(th);

        // p_t = d/dt (v_x + K^-1 w_y),  theta_t = Lambda zeta_t
        p_t = ir(ddx(tf(dv)) + ops.k(ddy(tf(dw)), -1.0));
        th_t = ir(ops.lam(tf(dz), 1.0));
        sp_t = tf(p_t); sth_t = tf(th_t);

        auto nl = nonlinear_terms_impl(*this);
        Np = nl.first; Nth = nl.second;
        Np0 = remove_mean(Np);
    }

    static std::pair<RealField, RealField> nonlinear_terms_impl(const Work& wk);

    RealField grad_dot(const RealField& a, const RealField& b, const SpectralField& f) const {
        // (a, b) . grad f  with dealiased products
        return pmul(a, ir(ddx(f))) + pmul(b, ir(ddy(f)));
    }
};

std::pair<RealField, RealField> Work::nonlinear_terms_impl(const Work& wk) {
    const CaseOps& ops = wk.ops;
    const double eps = wk.eps;
    SpectralField sv = tf(wk.v), sw = tf(wk.w), sz = tf(wk.z);
    RealField vx = ir(ddx(sv)), vy = ir(ddy(sv));
    RealField wx = ir(ddx(sw)), wy = ir(ddy(sw));
    RealField zx = ir(ddx(sz)), zy = ir(ddy(sz));

    // N_p1 = vx vx + wx vy + zx zx / 2 + K^-1( vy wx + wy wy + zy zy / 2 )
    RealField np1 = pmul(vx, vx) + pmul(wx, vy) + 0.5 * pmul(zx, zx) +
                    ir(ops.k(tf(pmul(vy, wx) + pmul(wy, wy) + 0.5 * pmul(zy, zy)), -1.0));

    // N_p2 = -[K^-1, v] K v_xx - [K^-1, w] K w_xx - (1/2)[K^-1, zeta] K zeta_xx
    // (the dispersive factor is J = K in case 1)
    auto comm_kinv = [&](const RealField& f, const SpectralField& sg) {
        // [K^-1, f] K g = K^-1(f . K g) - f . g
        RealField Kg = ir(ops.k(sg, 1.0));
        return ir(ops.k(tf(pmul(f, Kg)), -1.0)) - pmul(f, ir(sg));
    };
    RealField np2 = -1.0 * comm_kinv(wk.v, dxx(sv)) - comm_kinv(wk.w, dxx(sw)) -
                    0.5 * comm_kinv(wk.z, dxx(sz));

    RealField Np = -1.0 * (np1 + np2);

    RealField Nth(wk.grid);
    if (wk.tag == CaseTag::Case1) {
        // N_th = -(eps/6) Lambda1( [J, zeta] A^-2 dx^4 p )
        RealField u = ir(ops.ab(dx4(wk.sp), -2.0));
        RealField comm = ir(ops.j(tf(pmul(wk.z, u)), 1.0)) - pmul(wk.z, ir(ops.j(tf(u), 1.0)));
        Nth = (-eps / 6.0) * ir(ops.lam(tf(comm), 1.0));
    } else {
        // N_th = (eps^2/12) Lambda2( [dx^2, zeta] Y^-2 B^-2 dx^4 p )
        RealField u = ir(ops.y(ops.ab(dx4(wk.sp), -2.0), -2.0));
        RealField comm = ir(dxx(tf(pmul(wk.z, u)))) - pmul(wk.z, ir(dxx(tf(u))));
        Nth = (eps * eps / 12.0) * ir(ops.lam(tf(comm), 1.0));
    }
    return {Np, Nth};
}

double hdot_norm(const RealField& f, double s) {
    return sobolev_norm(f, s, NormFlavor::Homogeneous);
}

}  // namespace

std::pair<RealField, RealField> nonlinear_terms(CaseTag tag, const State& s, double eps) {
    Work wk(tag, s, eps);
    return {wk.Np, wk.Nth};
}

// ---------------------------------------------------------------------------
// (p, theta) system defect

std::pair<ResidualReport, ResidualReport> ptheta_residual(CaseTag tag, const State& st,
                                                          double eps, double sobolev_s) {
    Work wk(tag, st, eps);
    const CaseOps& ops = wk.ops;

    // J (p_t - Lambda theta) and J (theta_t + Lambda p); J Lambda = A in
    // case 1 and Y B in case 2
    RealField lhs_p = ir(ops.j(wk.sp_t - ops.lam(wk.sth, 1.0), 1.0));
    RealField lhs_th = ir(ops.j(wk.sth_t + ops.lam(wk.sp, 1.0), 1.0));

    RealField rhs_p(wk.grid), rhs_th(wk.grid);
    if (tag == CaseTag::Case1) {
        // -e J^-1(V.grad Jp) + (e/2) J^-1(z A J th) + e N_p
        RealField vgJp = wk.grad_dot(wk.v, wk.w, ops.j(wk.sp, 1.0));
        RealField zAJth = pmul(wk.z, ir(ops.ab(ops.j(wk.sth, 1.0), 1.0)));
        rhs_p = ir(ops.j(tf(-eps * vgJp + (0.5 * eps) * zAJth), -1.0)) + eps * wk.Np;

        // -e L1(V.grad A^-1 J th) - (e/2) L1(z J p) + (e^2/6) A(z A^-2 dx^4 p) + e N_th
        RealField vgAJt = wk.grad_dot(wk.v, wk.w, ops.ab(ops.j(wk.sth, 1.0), -1.0));
        RealField zJp = pmul(wk.z, ir(ops.j(wk.sp, 1.0)));
        RealField za2p = pmul(wk.z, ir(ops.ab(dx4(wk.sp), -2.0)));
        rhs_th = ir(ops.lam(tf(-eps * vgAJt - (0.5 * eps) * zJp), 1.0)) +
                 (eps * eps / 6.0) * ir(ops.ab(tf(za2p), 1.0)) + eps * wk.Nth;
    } else {
        // -e K^-1(V.grad Kp) + (e/2) K^-1(z B K th) + e N_p
        RealField vgKp = wk.grad_dot(wk.v, wk.w, ops.k(wk.sp, 1.0));
        RealField zBKth = pmul(wk.z, ir(ops.ab(ops.k(wk.sth, 1.0), 1.0)));
        rhs_p = ir(ops.k(tf(-eps * vgKp + (0.5 * eps) * zBKth), -1.0)) + eps * wk.Np;

        // -e L2(V.grad B^-1 K th) - (e/2) L2(z K p) + (e^2/6) Y B(z Y^-2 B^-2 dx^4 p) + e N_th
        RealField vgBKt = wk.grad_dot(wk.v, wk.w, ops.ab(ops.k(wk.sth, 1.0), -1.0));
        RealField zKp = pmul(wk.z, ir(ops.k(wk.sp, 1.0)));
        RealField zyb = pmul(wk.z, ir(ops.y(ops.ab(dx4(wk.sp), -2.0), -2.0)));
        rhs_th = ir(ops.lam(tf(-eps * vgBKt - (0.5 * eps) * zKp), 1.0)) +
                 (eps * eps / 6.0) * ir(ops.y(ops.ab(tf(zyb), 1.0), 1.0)) + eps * wk.Nth;
    }

    RealField res_p = lhs_p - rhs_p;
    RealField res_th = lhs_th - rhs_th;
    ResidualReport rp{"p_equation", l2_norm(res_p), hdot_norm(res_p, sobolev_s)};
    ResidualReport rt{"theta_equation", l2_norm(res_th), hdot_norm(res_th, sobolev_s)};
    return {rp, rt};
}

// ---------------------------------------------------------------------------
// symmetric (p~, theta~) system defect

namespace {

struct GammaCtx {
    // gamma/Gamma applications bound to one zeta and config
    const RealField& zeta;
    double eps;
    const ResolventConfig& cfg;

    RealField yinv(const RealField& f) const {
        return inverse_transform(apply_multiplier(transform(f), [e = eps](double x1, double) {
            return 1.0 / (1.0 + e / 6.0 * x1 * x1);
        }));
    }
    RealField Gamma(const RealField& f) const {
        return resolvent_apply(zeta, pmul(zeta, f), eps, cfg);
    }
    RealField gamma(const RealField& f) const {
        RealField G = Gamma(f);
        return G + (0.5 * eps) * pmul(zeta, yinv(G));
    }
    // [d/dt, Gamma] f given zeta_t
    RealField dGamma(const RealField& zt, const RealField& f) const {
        RealField G = Gamma(f);
        RealField inner = resolvent_apply(zeta, pmul(zt, f), eps, cfg);
        RealField corr = resolvent_apply(zeta, (0.5 * eps) * pmul(zt, yinv(G)), eps, cfg);
        return inner - corr;
    }
    RealField dgamma(const RealField& zt, const RealField& f) const {
        RealField G = Gamma(f);
        RealField h = dGamma(zt, f);
        return (0.5 * eps) * pmul(zt, yinv(G)) + h + (0.5 * eps) * pmul(zeta, yinv(h));
    }
};

}  // namespace

std::pair<ResidualReport, ResidualReport> tilde_residual(CaseTag tag, const State& st,
                                                         double eps, double sobolev_s,
                                                         const ResolventConfig& cfg) {
    Work wk(tag, st, eps);
    const CaseOps& ops = wk.ops;
    State sb(wk.grid);
    sb.v = wk.v; sb.w = wk.w; sb.zeta = wk.z;
    GoodUnknowns u = to_tilde(tag, sb, eps, cfg);
    SpectralField spt = tf(u.p_tilde), stt = tf(u.theta_tilde);

    RealField res_p(wk.grid), res_th(wk.grid);

    if (tag == CaseTag::Case1) {
        RealField Gz = banded_pointwise(
            [eps](double s) { return (1.0 + 0.5 * eps * s) * s / (2.0 + 0.5 * eps * s); }, wk.z);
        RealField Gp = banded_pointwise(
            [eps](double s) { return s / (2.0 + 0.5 * eps * s); }, wk.z);
        RealField Gprime = banded_pointwise(
            [eps](double s) {
                const double den = 2.0 + 0.5 * eps * s;
                return (2.0 + 2.0 * eps * s + 0.25 * eps * eps * s * s) / (den * den);
            },
            wk.z);
        RealField dtG = pmul(Gprime, wk.dz);

        SpectralField sJp = ops.j(wk.sp, 1.0);
        SpectralField sAJth = ops.ab(ops.j(wk.sth, 1.0), -1.0);   // A^-1 J th
        SpectralField sAJth_t = ops.ab(ops.j(wk.sth_t, 1.0), -1.0);
        RealField a2p = ir(ops.ab(dx4(wk.sp), -2.0));             // A^-2 dx^4 p
        RealField a2p_t = ir(ops.ab(dx4(wk.sp_t), -2.0));

        // d/dt p~ by the chain rule
        RealField dcorr = 0.5 * (pmul(wk.dz, ir(sJp)) + pmul(wk.z, ir(ops.j(wk.sp_t, 1.0)))) +
                          wk.grad_dot(wk.dv, wk.dw, sAJth) + wk.grad_dot(wk.v, wk.w, sAJth_t);
        RealField pt_t = wk.p_t + eps * ir(ops.j(tf(dcorr), -1.0)) -
                         (eps * eps / 6.0) * (pmul(dtG, a2p) + pmul(Gz, a2p_t));

        // d/dt th~
        RealField tcorr = 0.5 * (pmul(wk.dz, ir(ops.ab(ops.j(wk.sth, 1.0), 1.0))) +
                                 pmul(wk.z, ir(ops.ab(ops.j(wk.sth_t, 1.0), 1.0)))) -
                          (wk.grad_dot(wk.dv, wk.dw, sJp) + wk.grad_dot(wk.v, wk.w, ops.j(wk.sp_t, 1.0)));
        RealField tt_t = wk.th_t + eps * ir(ops.j(ops.ab(tf(tcorr), -1.0), -1.0));

        // operator (1 + e z/2 - (e^2/6) Gz A^-2 dx^4) A(D)
        auto sym_op = [&](const SpectralField& sf) {
            RealField Af = ir(ops.ab(sf, 1.0));
            RealField A1x4 = ir(ops.ab(dx4(sf), -1.0));  // A^-2 dx^4 A f = A^-1 dx^4 f
            return Af + (0.5 * eps) * pmul(wk.z, Af) - (eps * eps / 6.0) * pmul(Gz, A1x4);
        };

        RealField lhs_p = ir(ops.j(tf(pt_t), 1.0)) - sym_op(stt);
        RealField lhs_th = ir(ops.j(tf(tt_t), 1.0)) + sym_op(spt);

        // N_p~,1
        RealField np1 = 0.5 * pmul(wk.dz, ir(sJp)) + wk.grad_dot(wk.dv, wk.dw, sAJth) -
                        (eps / 6.0) * ir(ops.j(tf(pmul(dtG, a2p)), 1.0));
        // N_p~,2 (N_p enters mean-removed; see the torus zero-mode note)
        RealField gpa = pmul(Gp, a2p);
        RealField np2 = (eps * eps / 6.0) * wk.grad_dot(wk.v, wk.w, tf(gpa)) +
                        wk.Np0 + (0.5 * eps) * pmul(wk.z, wk.Np0) +
                        eps * wk.grad_dot(wk.v, wk.w, ops.ab(tf(wk.Nth), -1.0)) -
                        (eps * eps / 6.0) *
                            ir(ops.j(tf(pmul(Gz, ir(ops.ab(dx4(ops.j(tf(wk.Np), -1.0)), -2.0)))), 1.0));
        // N_p~,3 = (e^2/18) [dx^2, Gz] A^-1 J^-1 dx^4 th~
        RealField q = ir(ops.j(ops.ab(dx4(stt), -1.0), -1.0));
        RealField np3 = (eps * eps / 18.0) * (ir(dxx(tf(pmul(Gz, q)))) - pmul(Gz, ir(dxx(tf(q)))));

        RealField rhs_p = -eps * wk.grad_dot(wk.v, wk.w, spt) + eps * (np1 + np2 + np3);
        res_p = lhs_p - rhs_p;

        // N_th~,1
        RealField AJth_full = ir(ops.ab(ops.j(wk.sth, 1.0), 1.0));   // A J th
        RealField AJth_t_full = ir(ops.ab(ops.j(wk.sth_t, 1.0), 1.0));
        RealField Jp_t = ir(ops.j(wk.sp_t, 1.0));
        RealField nt1 = 0.5 * ir(ops.ab(tf(pmul(wk.dz, AJth_full)), -1.0)) -
                        ir(ops.ab(tf(wk.grad_dot(wk.dv, wk.dw, sJp)), -1.0)) +
                        0.5 * (ir(ops.ab(tf(pmul(wk.z, AJth_t_full)), -1.0)) -
                               pmul(wk.z, ir(ops.j(wk.sth_t, 1.0)))) -
                        (ir(ops.ab(tf(wk.grad_dot(wk.v, wk.w, tf(Jp_t))), -1.0)) -
                         wk.grad_dot(wk.v, wk.w, ops.ab(tf(Jp_t), -1.0)));
        // N_th~,2.  Two sign notes: the leading minus is the in-text color
        // correction; the transport-of-N_p term must carry a minus as well
        // (the substitution -eps V.grad A^-1 (J p_t) with J p_t = A th~ +
        // eps N_p forces it, and the case-2 analogue prints that minus).
        RealField dpt = u.p_tilde - wk.p;
        RealField adp = ir(ops.ab(dx4(tf(dpt)), -2.0));
        RealField f1 = ir(ops.ab(tf(pmul(Gp, adp)), 1.0));
        RealField nt2 = (-eps / 6.0) * (f1 + (0.5 * eps) * pmul(wk.z, f1)) + wk.Nth +
                        (0.5 * eps) * pmul(wk.z, wk.Nth) -
                        eps * wk.grad_dot(wk.v, wk.w, ops.ab(tf(wk.Np), -1.0));
        // N_th~,3 = (e/6)(1 + e z/2) [A, Gp] A^-2 dx^4 p~
        RealField a2pt = ir(ops.ab(dx4(spt), -2.0));
        RealField commA = ir(ops.ab(tf(pmul(Gp, a2pt)), 1.0)) -
                          pmul(Gp, ir(ops.ab(dx4(spt), -1.0)));
        RealField nt3 = (eps / 6.0) * (commA + (0.5 * eps) * pmul(wk.z, commA));

        RealField rhs_th = -eps * wk.grad_dot(wk.v, wk.w, stt) + eps * (nt1 + nt2 + nt3);
        res_th = lhs_th - rhs_th;
    } else {
        GammaCtx gc{wk.z, eps, cfg};

        SpectralField sKp = ops.k(wk.sp, 1.0);
        SpectralField sKp_t = ops.k(wk.sp_t, 1.0);
        SpectralField sBKth = ops.ab(ops.k(wk.sth, 1.0), -1.0);   // B^-1 K th
        SpectralField sBKth_t = ops.ab(ops.k(wk.sth_t, 1.0), -1.0);
        RealField op = ir(ops.y(ops.ab(dx4(wk.sp), -2.0), -2.0));     // Y^-2 B^-2 dx^4 p
        RealField op_t = ir(ops.y(ops.ab(dx4(wk.sp_t), -2.0), -2.0));

        // d/dt p~
        RealField dcorr = wk.grad_dot(wk.dv, wk.dw, sBKth) + wk.grad_dot(wk.v, wk.w, sBKth_t) +
                          0.5 * (pmul(wk.dz, ir(sKp)) + pmul(wk.z, ir(sKp_t)));
        RealField pt_t = wk.p_t + eps * ir(ops.j(tf(dcorr), -1.0)) -
                         (eps * eps / 6.0) * (gc.gamma(op_t) + gc.dgamma(wk.dz, op));

        // d/dt th~
        RealField tcorr = wk.grad_dot(wk.dv, wk.dw, sKp) + wk.grad_dot(wk.v, wk.w, sKp_t) -
                          0.5 * (pmul(wk.dz, ir(ops.ab(ops.k(wk.sth, 1.0), 1.0))) +
                                 pmul(wk.z, ir(ops.ab(ops.k(wk.sth_t, 1.0), 1.0))));
        RealField tt_t = wk.th_t - eps * ir(ops.j(ops.ab(tf(tcorr), -1.0), -1.0));

        // operator (Y B + (e/2) z B - (e^2/6) gamma Y^-1 B^-1 dx^4)
        auto sym_op = [&](const SpectralField& sf) {
            RealField YBf = ir(ops.y(ops.ab(sf, 1.0), 1.0));
            RealField Bf = ir(ops.ab(sf, 1.0));
            RealField yb = ir(ops.y(ops.ab(dx4(sf), -1.0), -1.0));   // Y^-1 B^-1 dx^4 f
            return YBf + (0.5 * eps) * pmul(wk.z, Bf) - (eps * eps / 6.0) * gc.gamma(yb);
        };

        RealField lhs_p = ir(ops.j(tf(pt_t), 1.0)) - sym_op(stt);
        RealField lhs_th = ir(ops.j(tf(tt_t), 1.0)) + sym_op(spt);

        // N_p~,1.  The gamma-commutator coefficient must be eps/6 so the
        // outer eps reproduces the chain rule's eps^2/6 (the case-1 analogue
        // prints eps/6; the eps^2/6 in the case-2 display double-counts).
        RealField np1 = 0.5 * pmul(wk.dz, ir(sKp)) + wk.grad_dot(wk.dv, wk.dw, sBKth) -
                        (eps / 6.0) * ir(ops.j(tf(gc.dgamma(wk.dz, op)), 1.0));
        // N_p~,2
        RealField gop_t = gc.gamma(op_t);
        RealField comm_x2 = ir(dxx(tf(gop_t))) - gc.gamma(ir(dxx(tf(op_t))));
        RealField Gop = gc.Gamma(op);
        RealField np2 = (eps * eps / 12.0) * comm_x2 +
                        (eps * eps / 6.0) * wk.grad_dot(wk.v, wk.w, tf(Gop));
        // N_p~,3 (N_p mean-removed in the first two slots)
        RealField np3 = wk.Np0 + (0.5 * eps) * pmul(wk.z, gc.yinv(wk.Np0)) +
                        eps * wk.grad_dot(wk.v, wk.w, ops.ab(ops.y(tf(wk.Nth), -1.0), -1.0)) -
                        (eps * eps / 6.0) * gc.gamma(ir(ops.y(ops.ab(dx4(tf(wk.Np)), -2.0), -2.0)));

        RealField rhs_p = -eps * wk.grad_dot(wk.v, wk.w, spt) + eps * (np1 + np2 + np3);
        res_p = lhs_p - rhs_p;

        // N_th~,1
        RealField BKth_full = ir(ops.ab(ops.k(wk.sth, 1.0), 1.0));   // B K th
        RealField BKth_t_full = ir(ops.ab(ops.k(wk.sth_t, 1.0), 1.0));
        RealField Kp_t = ir(sKp_t);
        RealField nt1 = -ir(ops.ab(tf(wk.grad_dot(wk.dv, wk.dw, sKp)), -1.0)) +
                        0.5 * ir(ops.ab(tf(pmul(wk.dz, BKth_full)), -1.0)) +
                        0.5 * (ir(ops.ab(tf(pmul(wk.z, BKth_t_full)), -1.0)) -
                               pmul(wk.z, ir(ops.k(wk.sth_t, 1.0)))) -
                        (ir(ops.ab(tf(wk.grad_dot(wk.v, wk.w, sKp_t)), -1.0)) -
                         wk.grad_dot(wk.v, wk.w, ops.ab(tf(Kp_t), -1.0)));
        // N_th~,2
        RealField nt2 = wk.Nth + (0.5 * eps) * pmul(wk.z, gc.yinv(wk.Nth)) -
                        eps * wk.grad_dot(wk.v, wk.w, ops.ab(ops.y(tf(wk.Np), -1.0), -1.0));
        // N_th~,3
        RealField dpt = u.p_tilde - wk.p;
        RealField g1 = gc.gamma(ir(ops.y(ops.ab(dx4(tf(dpt)), -1.0), -1.0)));
        RealField YBGop = ir(ops.y(ops.ab(tf(Gop), 1.0), 1.0));
        RealField GYBop = gc.Gamma(ir(ops.y(ops.ab(tf(op), 1.0), 1.0)));
        RealField h = YBGop - GYBop;  // [Y B, Gamma] (Y^-2 B^-2 dx^4 p)
        RealField nt3 = (-eps / 6.0) * g1 +
                        (eps / 6.0) * (h + (0.5 * eps) * pmul(wk.z, gc.yinv(h)));

        RealField rhs_th = -eps * wk.grad_dot(wk.v, wk.w, stt) + eps * (nt1 + nt2 + nt3);
        res_th = lhs_th - rhs_th;
    }

    ResidualReport rp{"p_tilde_equation", l2_norm(remove_mean(res_p)),
                      hdot_norm(res_p, sobolev_s)};
    ResidualReport rt{"theta_tilde_equation", l2_norm(remove_mean(res_th)),
                      hdot_norm(res_th, sobolev_s)};
    return {rp, rt};
}

// ---------------------------------------------------------------------------
// equivalences

EquivalenceReport equivalence_check(CaseTag tag, const State& st, double sobolev_s,
                                    double eps, const ResolventConfig& cfg) {
    Work wk(tag, st, eps);
    const double s = sobolev_s;
    EquivalenceReport rep;

    SpectralField sv = tf(wk.v), sw = tf(wk.w), sz = tf(wk.z);
    auto J = [&](double x1) { return wk.ops.J(x1); };
    auto hdots = [&](double x1, double x2) {
        const double r2 = x1 * x1 + x2 * x2;
        return r2 == 0.0 ? 0.0 : std::pow(r2, s);
    };
    auto hs = [&](double x1, double x2) { return std::pow(1.0 + x1 * x1 + x2 * x2, s); };

    if (tag == CaseTag::Case1) {
        double lhs = std::sqrt(spectral_weight_sum(
                         wk.sp, [&](double x1, double x2) { return J(x1) * hdots(x1, x2); })) +
                     std::sqrt(spectral_weight_sum(
                         wk.sth, [&](double x1, double x2) { return J(x1) * hdots(x1, x2); }));
        auto wv = [&](double x1, double x2) { return (J(x1) * x1 * x1 + x2 * x2) * hdots(x1, x2); };
        auto wwz = [&](double x1, double x2) {
            return (x1 * x1 + x2 * x2 / J(x1)) * hdots(x1, x2);
        };
        double rhs = std::sqrt(spectral_weight_sum(sv, wv)) +
                     std::sqrt(spectral_weight_sum(sw, wwz)) +
                     std::sqrt(spectral_weight_sum(sz, wwz));
        rep.lemma_lhs = lhs;
        rep.lemma_rhs = rhs;
    } else {
        double lhs = weighted_norm(wk.sp, tag, eps, 1.0, s, false) +
                     weighted_norm(wk.sth, tag, eps, 1.0, s, false);
        auto wgrad = [&](double x1, double x2) { return J(x1) * (x1 * x1 + x2 * x2) * hs(x1, x2); };
        double rhs = std::sqrt(spectral_weight_sum(sv, wgrad)) +
                     std::sqrt(spectral_weight_sum(sw, wgrad)) +
                     std::sqrt(spectral_weight_sum(sz, wgrad));
        rep.lemma_lhs = lhs;
        rep.lemma_rhs = rhs;
    }
    rep.ratio = rep.lemma_rhs > 0.0 ? rep.lemma_lhs / rep.lemma_rhs : 0.0;

    State sb(wk.grid);
    sb.v = wk.v; sb.w = wk.w; sb.zeta = wk.z;
    GoodUnknowns u = to_tilde(tag, sb, eps, cfg);
    rep.tilde_dp = weighted_norm(remove_mean(u.p_tilde - wk.p), tag, eps, 1.0, s, false);
    rep.tilde_dtheta = weighted_norm(u.theta_tilde - wk.th, tag, eps, 1.0, s, true);

    const double nV = std::max(sobolev_norm(wk.v, s, NormFlavor::Inhomogeneous),
                               sobolev_norm(wk.w, s, NormFlavor::Inhomogeneous));
    const double nz = sobolev_norm(wk.z, s, NormFlavor::Inhomogeneous);
    const double np = sobolev_norm(wk.p, s, NormFlavor::Inhomogeneous);
    const double nth = sobolev_norm(wk.th, s, NormFlavor::Inhomogeneous);
    if (tag == CaseTag::Case1) {
        const double jz = weighted_norm(sz, tag, eps, 1.0, s, false);
        const double jp = weighted_norm(wk.sp, tag, eps, 1.0, s, false);
        const double jth = weighted_norm(wk.sth, tag, eps, 1.0, s, false);
        rep.tilde_dp_bound = eps * (jz * jp + nV * jth);
        rep.tilde_dtheta_bound = eps * (nz * jth + nV * jp);
    } else {
        const double jz1 = weighted_norm(sz, tag, eps, 1.0, s + 1.0, false);
        rep.tilde_dp_bound = eps * (jz1 * np + nV * nth);
        rep.tilde_dtheta_bound = eps * (nz * nth + nV * np);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// samplers

State random_curl_free_state(CaseTag tag, const GridSpec& g, double eps, int band,
                             double amp, unsigned long long seed) {
    Rng rng(seed);
    RealField p = amp * random_band_limited(g, band, rng);
    RealField th = amp * random_band_limited(g, band, rng);
    return from_ptheta(tag, p, th, eps);
}

std::vector<LemmaSample> lemma_sampler(const std::string& id, int samples,
                                       const std::vector<double>& eps_list, const GridSpec& g,
                                       unsigned long long seed) {
    const double s = 4.0;
    const int band = std::max(1, g.nx / 6);
    std::vector<LemmaSample> out;

    for (double eps : eps_list) {
        CaseOps c1(CaseTag::Case1, eps);
        CaseOps c2(CaseTag::Case2, eps);
        LemmaSample row;
        row.eps = eps;
        Rng rng(seed);

        for (int n = 0; n < samples; ++n) {
            RealField f = random_band_limited(g, band, rng);
            RealField gg = random_band_limited(g, band, rng);
            double lhs = 0.0, rhs = 0.0;

            if (id == "L2.1.1") {
                RealField prod = pmul(c1.j(f, 0.5), c1.j(gg, 0.5));
                lhs = weighted_norm(c1.j(tf(prod), -0.5), CaseTag::Case1, eps, 0.0, s, false);
                rhs = sobolev_norm(f, s, NormFlavor::Inhomogeneous) *
                      sobolev_norm(gg, s, NormFlavor::Inhomogeneous);
            } else if (id == "L2.1.2") {
                // J^-1/2 ([J^-1, f] J^3/2 g)
                RealField j32 = c1.j(gg, 1.5);
                RealField comm = ir(c1.j(tf(pmul(f, j32)), -1.0)) - pmul(f, c1.j(gg, 0.5));
                lhs = weighted_norm(c1.j(tf(comm), -0.5), CaseTag::Case1, eps, 0.0, s, false);
                rhs = std::sqrt(eps) * sobolev_norm(ddx(f), s, NormFlavor::Inhomogeneous) *
                      sobolev_norm(gg, s, NormFlavor::Inhomogeneous);
            } else if (id == "L2.1.3") {
                RealField jg = c1.j(gg, 0.5);
                SymbolSpec Ds = SymbolSpec::absd(s);
                RealField comm = apply_symbol(Ds, pmul(f, jg)) - pmul(f, apply_symbol(Ds, jg));
                lhs = l2_norm(c1.j(tf(comm), -0.5));
                rhs = weighted_norm(tf(f), CaseTag::Case1, eps, 1.0, s, false) *
                      sobolev_norm(gg, s - 1.0, NormFlavor::Inhomogeneous);
            } else if (id == "L2.1.4") {
                RealField gx = ddx(gg);
                RealField comm =
                    ir(c2.k(tf(pmul(f, gx)), 1.0)) - pmul(f, ir(c2.k(tf(gx), 1.0)));
                lhs = sobolev_norm(comm, s, NormFlavor::Inhomogeneous);
                rhs = sobolev_norm(ddx(f), s, NormFlavor::Inhomogeneous) *
                      sobolev_norm(gg, s, NormFlavor::Inhomogeneous);
            } else if (id == "L2.2.1") {
                RealField comm =
                    ir(c1.ab(tf(pmul(f, gg)), 1.0)) - pmul(f, ir(c1.ab(tf(gg), 1.0)));
                lhs = weighted_norm(c1.j(tf(comm), -0.5), CaseTag::Case1, eps, 0.0, s, false);
                rhs = (sobolev_norm(f, s, NormFlavor::Inhomogeneous) +
                       weighted_norm(c1.j(c1.ab(tf(f), 1.0), -0.5), CaseTag::Case1, eps, 0.0, s,
                                     false)) *
                      sobolev_norm(gg, s, NormFlavor::Inhomogeneous);
            } else if (id == "L2.2.2") {
                RealField Ag = ir(c1.ab(tf(gg), 1.0));
                RealField comm = ir(c1.ab(tf(pmul(f, Ag)), -1.0)) - pmul(f, remove_mean(gg));
                lhs = weighted_norm(c1.j(tf(comm), -0.5), CaseTag::Case1, eps, 0.0, s, true);
                rhs = sobolev_norm(f, s, NormFlavor::Inhomogeneous) *
                      sobolev_norm(gg, s - 1.0, NormFlavor::Inhomogeneous);
            } else if (id == "L2.2.3") {
                RealField comm = ir(c2.ab(tf(pmul(f, gg)), 1.0)) - pmul(f, ir(c2.ab(tf(gg), 1.0)));
                lhs = weighted_norm(c2.j(tf(comm), -0.5), CaseTag::Case2, eps, 0.0, s, false);
                double nf = std::sqrt(spectral_weight_sum(tf(f), [&](double x1, double x2) {
                    return (x1 * x1 + x2 * x2) / c2.J(x1) *
                           std::pow(1.0 + x1 * x1 + x2 * x2, s);
                }));
                double ng = weighted_norm(c2.j(tf(gg), -0.5), CaseTag::Case2, eps, 0.0, s, false);
                rhs = nf * ng;
            } else if (id == "L2.2.4") {
                RealField Bg = ir(c2.ab(tf(gg), 1.0));
                RealField comm = ir(c2.ab(tf(pmul(f, Bg)), -1.0)) - pmul(f, remove_mean(gg));
                lhs = weighted_norm(c2.j(tf(comm), -0.5), CaseTag::Case2, eps, 0.0, s, true);
                double nf = std::sqrt(spectral_weight_sum(tf(f), [&](double x1, double x2) {
                    return (x1 * x1 + x2 * x2) / c2.J(x1) *
                           std::pow(1.0 + x1 * x1 + x2 * x2, s - 1.0);
                }));
                double ng = weighted_norm(c2.j(tf(gg), -0.5), CaseTag::Case2, eps, 0.0, s - 1.0,
                                          false);
                rhs = nf * ng;
            } else if (id == "product_J") {
                RealField zeta = random_band_limited(g, band, rng);
                RealField prod = pmul(zeta, f);
                lhs = weighted_norm(tf(prod), CaseTag::Case2, eps, 1.0, s, false);
                rhs = weighted_norm(tf(zeta), CaseTag::Case2, eps, 1.0, s + 1.0, false) *
                      weighted_norm(tf(f), CaseTag::Case2, eps, 1.0, s, false);
            } else if (id == "adjoint") {
                RealField zeta = 0.2 * random_band_limited(g, band, rng);
                ResolventConfig cfg;
                GammaPair gf = gamma_apply(zeta, f, eps, cfg);
                GammaPair gg2 = gamma_apply(zeta, gg, eps, cfg);
                lhs = std::abs(l2_inner(gf.gamma, gg) - l2_inner(f, gg2.gamma));
                rhs = l2_norm(f) * l2_norm(gg);
            } else {
                throw ArgumentError("lemma_sampler: unknown id " + id);
            }

            if (rhs == 0.0) continue;  // 0/0 convention: skip
            row.max_ratio = std::max(row.max_ratio, lhs / rhs);
            ++row.used;
        }
        out.push_back(row);
    }
    return out;
}

}  // namespace wtbouss
