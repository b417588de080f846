#include "wtbouss/energy.hpp"

#include <cmath>

namespace wtbouss {

double spectral_weight_sum(const SpectralField& f,
                           const std::function<double(double, double)>& w) {
    const GridSpec& g = f.grid;
    double acc = 0.0;
    for (int i = 0; i < g.nx; ++i) {
        const double x1 = g.xi1_of(i);
        for (int j = 0; j < g.nyh(); ++j) {
            const double a2 = std::norm(f.at(i, j));
            if (a2 == 0.0) continue;
            acc += herm_weight(g, j) * w(x1, g.xi2_of(j)) * a2;
        }
    }
    return acc * parseval_factor(g);
}

namespace {

double weight_sum(const SpectralField& f, const std::function<double(double, double)>& w) {
    return spectral_weight_sum(f, w);
}

double jsym(CaseTag tag, double eps, double sigma_general, double xi1) {
    switch (tag) {
        case CaseTag::Case1: return 1.0 + eps / 3.0 * xi1 * xi1;
        case CaseTag::Case2: return 1.0 + eps / 2.0 * xi1 * xi1;
        case CaseTag::General: return 1.0 + sigma_general * eps * xi1 * xi1;
    }
    return 1.0;
}

}  // namespace

double sobolev_norm(const SpectralField& f, double s, NormFlavor flavor, double eps) {
    switch (flavor) {
        case NormFlavor::Inhomogeneous:
            return std::sqrt(weight_sum(f, [s](double x1, double x2) {
                return std::pow(1.0 + x1 * x1 + x2 * x2, s);
            }));
        case NormFlavor::Homogeneous:
            return std::sqrt(weight_sum(f, [s](double x1, double x2) {
                const double r2 = x1 * x1 + x2 * x2;
                return r2 == 0.0 ? 0.0 : std::pow(r2, s);
            }));
        case NormFlavor::HsEps: {
            const double pre = 1.0 / std::sqrt(eps);
            return std::sqrt(weight_sum(f, [s, eps, pre](double x1, double x2) {
                const double w = x1 * x1 + eps * x2 * x2;
                return pre * (w == 0.0 && s != 0.0 ? 0.0 : std::pow(w, s));
            }));
        }
    }
    throw ArgumentError("sobolev_norm: unknown flavor");
}

double sobolev_norm(const RealField& f, double s, NormFlavor flavor, double eps) {
    return sobolev_norm(transform(f), s, flavor, eps);
}

double weighted_norm(const SpectralField& f, CaseTag tag, double eps, double jpow,
                     double s, bool homogeneous) {
    return std::sqrt(weight_sum(f, [&](double x1, double x2) {
        const double r2 = x1 * x1 + x2 * x2;
        double sw;
        if (homogeneous)
            sw = r2 == 0.0 ? 0.0 : std::pow(r2, s);
        else
            sw = std::pow(1.0 + r2, s);
        return sw * std::pow(jsym(tag, eps, 0.0, x1), jpow);
    }));
}

double weighted_norm(const RealField& f, CaseTag tag, double eps, double jpow,
                     double s, bool homogeneous) {
    return weighted_norm(transform(f), tag, eps, jpow, s, homogeneous);
}

EnergyReport energy(CaseTag tag, const State& st, double s, double eps,
                    double j_sigma_general) {
    EnergyReport r;
    r.s = s;
    r.eps = eps;
    r.case_tag = tag;
    r.time = st.time;

    SpectralField sv = transform(st.v), sw = transform(st.w), sz = transform(st.zeta);

    const double sig = tag == CaseTag::Case1 ? 1.0 / 3.0
                      : tag == CaseTag::Case2 ? 0.5
                                              : j_sigma_general;
    auto J = [&](double x1) { return 1.0 + sig * eps * x1 * x1; };
    auto hs = [&](double x1, double x2, double ss) { return std::pow(1.0 + x1 * x1 + x2 * x2, ss); };
    auto hdots = [&](double x1, double x2, double ss) {
        const double r2 = x1 * x1 + x2 * x2;
        return r2 == 0.0 ? 0.0 : std::pow(r2, ss);
    };

    if (tag == CaseTag::Case2) {
        // E_s = |J^(1/2) zeta|_{H^{s+1}}^2 + |J^(1/2) V|_{H^{s+1}}^2
        auto w_tot = [&](double x1, double x2) { return J(x1) * hs(x1, x2, s + 1.0); };
        r.e_total = weight_sum(sv, w_tot) + weight_sum(sw, w_tot) + weight_sum(sz, w_tot);
        auto w_lowJ = [&](double x1, double x2) { return J(x1) * hs(x1, x2, s); };
        auto w_lowJK = [&](double x1, double x2) {
            const double y = 1.0 + eps / 6.0 * x1 * x1;
            return J(x1) * (J(x1) / y) * hs(x1, x2, s);
        };
        r.e_low = weight_sum(sv, w_lowJK) + weight_sum(sw, w_lowJ) + weight_sum(sz, w_lowJ);
        auto w_high = [&](double x1, double x2) {
            return J(x1) * (x1 * x1 + x2 * x2) * hdots(x1, x2, s);
        };
        r.e_high = weight_sum(sv, w_high) + weight_sum(sw, w_high) + weight_sum(sz, w_high);
        return r;
    }

    // Case-1 shaped functionals (also the general-system diagnostic form)
    auto w_v_low = [&](double x1, double x2) { return J(x1) * J(x1) * hs(x1, x2, s); };
    auto w_wz_low = [&](double x1, double x2) { return J(x1) * hs(x1, x2, s); };
    r.e_low = weight_sum(sv, w_v_low) + weight_sum(sw, w_wz_low) + weight_sum(sz, w_wz_low);

    // |(J^(1/2) f_x, f_y)|_{Hdot^s}^2 = sum (J xi1^2 + xi2^2) |xi|^2s |f|^2
    auto w_v_high = [&](double x1, double x2) {
        return (J(x1) * x1 * x1 + x2 * x2) * hdots(x1, x2, s);
    };
    // |(f_x, J^(-1/2) f_y)|_{Hdot^s}^2 = sum (xi1^2 + xi2^2/J) |xi|^2s |f|^2
    auto w_wz_high = [&](double x1, double x2) {
        return (x1 * x1 + x2 * x2 / J(x1)) * hdots(x1, x2, s);
    };
    r.e_high = weight_sum(sv, w_v_high) + weight_sum(sw, w_wz_high) + weight_sum(sz, w_wz_high);
    r.e_total = r.e_low + r.e_high;
    return r;
}

double tilde_energy(const RealField& p_tilde, const RealField& theta_tilde,
                    CaseTag tag, double s, double eps) {
    const double scale = std::max(max_abs(p_tilde), max_abs(theta_tilde));
    if (std::abs(mean(p_tilde)) > 1e-10 * (1.0 + scale) ||
        std::abs(mean(theta_tilde)) > 1e-10 * (1.0 + scale))
        throw ArgumentError("tilde_energy: inputs must be zero-mean");
    const double np = weighted_norm(p_tilde, tag, eps, 1.0, s, true);
    const double nt = weighted_norm(theta_tilde, tag, eps, 1.0, s, true);
    return np * np + nt * nt;
}

}  // namespace wtbouss
