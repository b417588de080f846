#include "wtbouss/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <numbers>
#include <thread>

namespace wtbouss {

unsigned long long Rng::next_u64() {
    // splitmix64 stream feeding mt19937_64-free arithmetic keeps the output
    // identical across standard libraries
    unsigned long long z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double Rng::uniform() {
    return double(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
}

RealField random_band_limited(const GridSpec& g, int band, Rng& rng) {
    if (band < 1) throw ArgumentError("random_band_limited: band >= 1");
    if (band > std::min(g.cutx(), g.cuty()))
        throw ArgumentError("random_band_limited: band exceeds the dealias band");
    SpectralField s(g);
    for (int k1 = -band; k1 <= band; ++k1)
        for (int k2 = 0; k2 <= band; ++k2) {
            if (k2 == 0 && k1 <= 0) continue;  // Hermitian partners + zero mode
            if (k1 * k1 + k2 * k2 > band * band) continue;
            s.add_mode(k1, k2, Complex(rng.gaussian(), rng.gaussian()));
        }
    RealField f = inverse_transform(s);
    const double m = max_abs(f);
    if (m > 0.0) f *= 1.0 / m;
    return f;
}

State step(const State& s, double dt, const RhsFn& f) {
    Tendency k1 = f(s);
    State s2(s.grid());
    auto axpy = [&](const State& base, double a, const Tendency& t, State& out) {
        out.v = base.v;
        out.w = base.w;
        out.zeta = base.zeta;
        for (int i = 0; i < base.grid().n(); ++i) {
            out.v.v[i] += a * t.dv.v[i];
            out.w.v[i] += a * t.dw.v[i];
            out.zeta.v[i] += a * t.dzeta.v[i];
        }
        out.time = base.time;
    };
    axpy(s, 0.5 * dt, k1, s2);
    Tendency k2 = f(s2);
    axpy(s, 0.5 * dt, k2, s2);
    Tendency k3 = f(s2);
    axpy(s, dt, k3, s2);
    Tendency k4 = f(s2);

    State out(s.grid());
    out.time = s.time + dt;
    const double c = dt / 6.0;
    for (int i = 0; i < s.grid().n(); ++i) {
        out.v.v[i] = s.v.v[i] + c * (k1.dv.v[i] + 2.0 * (k2.dv.v[i] + k3.dv.v[i]) + k4.dv.v[i]);
        out.w.v[i] = s.w.v[i] + c * (k1.dw.v[i] + 2.0 * (k2.dw.v[i] + k3.dw.v[i]) + k4.dw.v[i]);
        out.zeta.v[i] =
            s.zeta.v[i] + c * (k1.dzeta.v[i] + 2.0 * (k2.dzeta.v[i] + k3.dzeta.v[i]) + k4.dzeta.v[i]);
    }
    if (!all_finite(out.v) || !all_finite(out.w) || !all_finite(out.zeta))
        throw NumericalError("step: blow-up detected at t = " + std::to_string(out.time));
    return out;
}

double auto_dt(const RunConfig& cfg) {
    double lam_max = 0.0;
    const GridSpec& g = cfg.grid;
    const ModelParams& p = cfg.params;
    SymbolSpec lam = SymbolSpec::lambda_dr(p.coef(), p.eps, cfg.system == SystemId::WTB1);
    for (int k1 = 0; k1 <= g.cutx(); ++k1)
        for (int k2 = 0; k2 <= g.cuty(); ++k2) {
            double x1 = 2.0 * std::numbers::pi * k1 / g.lx;
            double x2 = 2.0 * std::numbers::pi * k2 / g.ly;
            lam_max = std::max(lam_max, lam.eval(x1, x2).real());
        }
    if (lam_max <= 0.0) throw NumericalError("auto_dt: degenerate dispersion symbol");
    return cfg.cfl / lam_max;
}

namespace {

RealField periodized_gaussian(const GridSpec& g, double rx, double ry) {
    RealField f(g);
    const double cx = 0.5 * g.lx, cy = 0.5 * g.ly;
    for (int i = 0; i < g.nx; ++i) {
        const double x = g.lx * i / g.nx;
        for (int j = 0; j < g.ny; ++j) {
            const double y = g.ly * j / g.ny;
            double acc = 0.0;
            for (int px = -1; px <= 1; ++px)
                for (int py = -1; py <= 1; ++py) {
                    const double dx = x - cx + px * g.lx;
                    const double dy = y - cy + py * g.ly;
                    acc += std::exp(-(dx * dx / (2.0 * rx * rx) + dy * dy / (2.0 * ry * ry)));
                }
            f.at(i, j) = acc;
        }
    }
    return f;
}

RealField banded(const RealField& f) {
    SpectralField s = transform(f);
    truncate_to_band(s);
    return inverse_transform(s);
}

}  // namespace

State initial_state(const RunConfig& cfg) {
    const GridSpec& g = cfg.grid;
    const double eps = cfg.params.eps;
    // curl-free by construction: V = grad(phi) (WTB1: v = phi_x, w = sqrt(eps) phi_y)
    RealField phi(g), zeta(g);
    switch (cfg.init) {
        case InitFamily::Gaussian: {
            RealField bump = periodized_gaussian(g, 0.12 * g.lx, 0.12 * g.ly);
            zeta = remove_mean(banded(bump));
            phi = zeta;
            break;
        }
        case InitFamily::Trig: {
            const double kx = 2.0 * std::numbers::pi / g.lx;
            const double ky = 2.0 * std::numbers::pi / g.ly;
            for (int i = 0; i < g.nx; ++i) {
                const double x = g.lx * i / g.nx;
                for (int j = 0; j < g.ny; ++j) {
                    const double y = g.ly * j / g.ny;
                    zeta.at(i, j) = std::cos(kx * x) + 0.5 * std::cos(kx * x + ky * y);
                    phi.at(i, j) = std::sin(kx * x) + 0.25 * std::cos(2.0 * ky * y);
                }
            }
            break;
        }
        case InitFamily::Random: {
            Rng rng(cfg.seed);
            int band = cfg.band > 0 ? cfg.band : std::max(1, g.nx / 6);
            zeta = random_band_limited(g, band, rng);
            phi = random_band_limited(g, band, rng);
            break;
        }
    }
    State s(g);
    s.zeta = cfg.amplitude * zeta;
    SpectralField sphi = transform(phi);
    truncate_to_band(sphi);
    s.v = cfg.amplitude * inverse_transform(ddx(sphi));
    const double wy_scale = cfg.system == SystemId::WTB1 ? std::sqrt(eps) : 1.0;
    s.w = (cfg.amplitude * wy_scale) * inverse_transform(ddy(sphi));
    s.time = 0.0;
    return s;
}

State consistency_profile(const GridSpec& g, double amplitude) {
    RealField bump = periodized_gaussian(g, 0.16 * g.lx, 0.08 * g.ly);
    RealField b = remove_mean(banded(bump));
    State s(g);
    s.zeta = amplitude * b;
    SpectralField sb = transform(b);
    s.v = amplitude * inverse_transform(ddx(sb));
    s.w = amplitude * inverse_transform(ddy(sb));
    return s;
}

namespace {

DiagnosticsRecord diagnose(const RunConfig& cfg, const State& s) {
    DiagnosticsRecord rec;
    rec.time = s.time;
    const CaseTag tag = case_of(cfg.system);
    rec.energy = energy(tag, s, cfg.sobolev_s, cfg.params.eps, cfg.params.b);
    rec.curl_res = curl_residual(s, cfg.params.eps, cfg.system == SystemId::WTB1);
    if (cfg.diag_consistency && cfg.system == SystemId::WTB1)
        rec.consistency_res = consistency_residual(s, cfg.params).total;
    if (cfg.diag_tilde && (tag == CaseTag::Case1 || tag == CaseTag::Case2)) {
        ResolventStats stats;
        GoodUnknowns u = to_tilde(tag, s, cfg.params.eps, cfg.resolvent, &stats);
        rec.energy.e_tilde_high = tilde_energy(remove_mean(u.p_tilde),
                                               remove_mean(u.theta_tilde), tag,
                                               cfg.sobolev_s, cfg.params.eps);
        if (tag == CaseTag::Case2) rec.guard_factor = stats.contraction;
    }
    return rec;
}

}  // namespace

RunResult integrate(const RunConfig& cfg) {
    require_valid(cfg.params);
    RunResult res;
    State s = initial_state(cfg);
    const double t_end = cfg.effective_t_end();
    if (!(t_end >= 0.0)) throw ArgumentError("integrate: t_end must be >= 0");

    RhsFn f = [&cfg](const State& st) {
        return rhs(cfg.system, st, cfg.params, cfg.linearized);
    };

    try {
        res.records.push_back(diagnose(cfg, s));
        if (t_end > 0.0) {
            double dt = cfg.dt > 0.0 ? cfg.dt : auto_dt(cfg);
            long nsteps = std::lround(std::ceil(t_end / dt - 1e-12));
            dt = t_end / double(nsteps);
            for (long n = 1; n <= nsteps; ++n) {
                s = step(s, dt, f);
                s.time = dt * double(n);  // avoid accumulated addition error
                if (n % std::max(1, cfg.diag_every) == 0 || n == nsteps)
                    res.records.push_back(diagnose(cfg, s));
            }
        }
        res.final_state = std::move(s);
        res.ok = true;
    } catch (const GuardError& e) {
        res.ok = false;
        res.error = e.what();
        res.error_code = 4;
        res.final_state = std::move(s);
    } catch (const NumericalError& e) {
        res.ok = false;
        res.error = e.what();
        res.error_code = 3;
        res.final_state = std::move(s);
    }
    return res;
}

static int max_workers() {
    if (const char* env = std::getenv("WTBOUSS_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? int(hc) : 1;
}

std::vector<SweepRow> long_time_sweep(const RunConfig& base, const std::vector<double>& eps_list) {
    if (eps_list.empty()) throw ArgumentError("long_time_sweep: empty eps list");
    auto run_one = [&](double eps) {
        RunConfig cfg = base;
        cfg.params.eps = eps;
        cfg.t_end_over_eps = true;
        SweepRow row;
        row.eps = eps;
        row.t_end = cfg.effective_t_end();
        RunResult r = integrate(cfg);
        row.ok = r.ok;
        row.error = r.error;
        if (!r.records.empty()) {
            row.e0 = r.records.front().energy.e_total;
            for (const auto& rec : r.records) {
                row.e_max = std::max(row.e_max, rec.energy.e_total);
                row.max_curl = std::max(row.max_curl, rec.curl_res);
                if (std::isfinite(rec.guard_factor))
                    row.max_guard = std::max(row.max_guard, rec.guard_factor);
            }
            row.growth_ratio = row.e0 > 0.0 ? row.e_max / row.e0 : 1.0;
        }
        return row;
    };

    const int workers = std::max(1, std::min<int>(max_workers(), int(eps_list.size())));
    std::vector<SweepRow> rows(eps_list.size());
    if (workers == 1) {
        for (size_t i = 0; i < eps_list.size(); ++i) rows[i] = run_one(eps_list[i]);
    } else {
        // waves of at most `workers` concurrent entries
        for (size_t start = 0; start < eps_list.size(); start += size_t(workers)) {
            const size_t stop = std::min(eps_list.size(), start + size_t(workers));
            std::vector<std::future<SweepRow>> futs;
            for (size_t i = start; i < stop; ++i)
                futs.push_back(std::async(std::launch::async, run_one, eps_list[i]));
            for (size_t i = start; i < stop; ++i) rows[i] = futs[i - start].get();
        }
    }
    return rows;
}

}  // namespace wtbouss
