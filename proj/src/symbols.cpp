#include "wtbouss/symbols.hpp"

#include <cmath>
#include <numbers>

namespace wtbouss {

namespace {

inline Complex cpow_int(Complex z, int n) {
    Complex r(1.0, 0.0);
    bool neg = n < 0;
    unsigned m = neg ? unsigned(-n) : unsigned(n);
    Complex b = z;
    while (m) {
        if (m & 1u) r *= b;
        b *= b;
        m >>= 1;
    }
    return neg ? Complex(1.0, 0.0) / r : r;
}

inline double rpow(double x, double p) {
    if (p == 1.0) return x;
    if (p == -1.0) return 1.0 / x;
    if (p == 2.0) return x * x;
    if (p == -2.0) return 1.0 / (x * x);
    if (p == 0.5) return std::sqrt(x);
    if (p == -0.5) return 1.0 / std::sqrt(x);
    return std::pow(x, p);
}

}  // namespace

SymbolSpec SymbolSpec::jeps(double sigma, double eps, double power) {
    SymbolSpec s; s.kind = SymbolKind::Jeps; s.sigma = sigma; s.eps = eps; s.power = power; return s;
}
SymbolSpec SymbolSpec::yeps(double eps, double power) {
    SymbolSpec s; s.kind = SymbolKind::Yeps; s.eps = eps; s.power = power; return s;
}
SymbolSpec SymbolSpec::keps(double c, double g, double eps, double power) {
    SymbolSpec s; s.kind = SymbolKind::Keps; s.c = c; s.g = g; s.eps = eps; s.power = power; return s;
}
SymbolSpec SymbolSpec::a_op(double eps, double power) {
    SymbolSpec s; s.kind = SymbolKind::A; s.eps = eps; s.power = power; return s;
}
SymbolSpec SymbolSpec::b_op(double eps, double power) {
    SymbolSpec s; s.kind = SymbolKind::B; s.eps = eps; s.power = power; return s;
}
SymbolSpec SymbolSpec::lambda1(double eps, double power) {
    SymbolSpec s; s.kind = SymbolKind::Lambda1; s.eps = eps; s.power = power; return s;
}
SymbolSpec SymbolSpec::lambda2(double eps, double power) {
    SymbolSpec s; s.kind = SymbolKind::Lambda2; s.eps = eps; s.power = power; return s;
}
SymbolSpec SymbolSpec::lambda_dr(const std::array<double, 7>& abcdefg, double eps,
                                 bool aniso_y, double power) {
    SymbolSpec s; s.kind = SymbolKind::LambdaDR; s.coef = abcdefg; s.eps = eps;
    s.aniso_y = aniso_y; s.power = power; return s;
}
SymbolSpec SymbolSpec::dx(double power) {
    SymbolSpec s; s.kind = SymbolKind::Dx; s.power = power; return s;
}
SymbolSpec SymbolSpec::dy(double power) {
    SymbolSpec s; s.kind = SymbolKind::Dy; s.power = power; return s;
}
SymbolSpec SymbolSpec::absd(double power) {
    SymbolSpec s; s.kind = SymbolKind::AbsD; s.power = power; return s;
}
SymbolSpec SymbolSpec::bracketd(double power) {
    SymbolSpec s; s.kind = SymbolKind::BracketD; s.power = power; return s;
}

Complex SymbolSpec::eval(double xi1, double xi2) const {
    switch (kind) {
        case SymbolKind::Jeps:
            return rpow(1.0 + sigma * eps * xi1 * xi1, power);
        case SymbolKind::Yeps:
            return rpow(1.0 + eps / 6.0 * xi1 * xi1, power);
        case SymbolKind::Keps:
            return rpow((1.0 - c * eps * xi1 * xi1) / (1.0 - g * eps * xi1 * xi1), power);
        case SymbolKind::A: {
            double v2 = (1.0 + eps / 3.0 * xi1 * xi1) * xi1 * xi1 + xi2 * xi2;
            if (v2 == 0.0) return power < 0.0 ? 0.0 : (power == 0.0 ? 1.0 : 0.0);
            return rpow(v2, 0.5 * power);
        }
        case SymbolKind::B: {
            double k = (1.0 + eps / 2.0 * xi1 * xi1) / (1.0 + eps / 6.0 * xi1 * xi1);
            double v2 = k * xi1 * xi1 + xi2 * xi2;
            if (v2 == 0.0) return power < 0.0 ? 0.0 : (power == 0.0 ? 1.0 : 0.0);
            return rpow(v2, 0.5 * power);
        }
        case SymbolKind::Lambda1: {
            double j = 1.0 + eps / 3.0 * xi1 * xi1;
            double v2 = xi1 * xi1 / j + xi2 * xi2 / (j * j);
            if (v2 == 0.0) return power < 0.0 ? 0.0 : (power == 0.0 ? 1.0 : 0.0);
            return rpow(v2, 0.5 * power);
        }
        case SymbolKind::Lambda2: {
            double r = (1.0 + eps / 6.0 * xi1 * xi1) / (1.0 + eps / 2.0 * xi1 * xi1);
            double v2 = xi1 * xi1 * r + xi2 * xi2 * r * r;
            if (v2 == 0.0) return power < 0.0 ? 0.0 : (power == 0.0 ? 1.0 : 0.0);
            return rpow(v2, 0.5 * power);
        }
        case SymbolKind::LambdaDR: {
            const double a = coef[0], b = coef[1], c_ = coef[2], d = coef[3];
            const double e = coef[4], f = coef[5], g_ = coef[6];
            const double x2 = xi1 * xi1;
            const double wy = aniso_y ? eps : 1.0;
            double v2 = x2 * (1.0 - a * eps * x2) * (1.0 - c_ * eps * x2) /
                            ((1.0 + b * eps * x2) * (1.0 + d * eps * x2)) +
                        wy * xi2 * xi2 * (1.0 - f * eps * x2) * (1.0 - g_ * eps * x2) /
                            ((1.0 + e * eps * x2) * (1.0 + d * eps * x2));
            if (v2 == 0.0) return power < 0.0 ? 0.0 : (power == 0.0 ? 1.0 : 0.0);
            return rpow(v2, 0.5 * power);
        }
        case SymbolKind::AbsD: {
            double v = std::hypot(xi1, xi2);
            if (v == 0.0) return power < 0.0 ? 0.0 : (power == 0.0 ? 1.0 : 0.0);
            return rpow(v, power);
        }
        case SymbolKind::BracketD:
            return rpow(1.0 + xi1 * xi1 + xi2 * xi2, 0.5 * power);
        case SymbolKind::Dx: {
            int n = int(power);
            if (double(n) != power) throw ArgumentError("Dx symbol: power must be an integer");
            if (xi1 == 0.0 && n < 0) return 0.0;
            return cpow_int(Complex(0.0, xi1), n);
        }
        case SymbolKind::Dy: {
            int n = int(power);
            if (double(n) != power) throw ArgumentError("Dy symbol: power must be an integer");
            if (xi2 == 0.0 && n < 0) return 0.0;
            return cpow_int(Complex(0.0, xi2), n);
        }
    }
    throw ArgumentError("SymbolSpec::eval: unknown kind");
}

SpectralField apply_symbol(const SymbolSpec& sym, const SpectralField& f) {
    SpectralField out(f.grid);
    const GridSpec& g = f.grid;
    const bool is_deriv = sym.kind == SymbolKind::Dx || sym.kind == SymbolKind::Dy;
    for (int i = 0; i < g.nx; ++i) {
        const double x1 = g.xi1_of(i);
        const bool nyq_x = 2 * std::abs(g.kx_of(i)) == g.nx;
        for (int j = 0; j < g.nyh(); ++j) {
            const double x2 = g.xi2_of(j);
            Complex s = sym.eval(x1, x2);
            // odd derivative on the Nyquist mode cannot stay real: drop it
            if (is_deriv && int(sym.power) % 2 != 0 &&
                ((sym.kind == SymbolKind::Dx && nyq_x) ||
                 (sym.kind == SymbolKind::Dy && 2 * j == g.ny)))
                s = 0.0;
            if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
                throw NumericalError("apply_symbol: non-finite symbol value");
            out.at(i, j) = s * f.at(i, j);
        }
    }
    return out;
}

RealField apply_symbol(const SymbolSpec& sym, const RealField& f) {
    return inverse_transform(apply_symbol(sym, transform(f)));
}

SpectralField apply_multiplier(const SpectralField& f, const RealSymbolFn& sym) {
    SpectralField out(f.grid);
    const GridSpec& g = f.grid;
    for (int i = 0; i < g.nx; ++i) {
        const double x1 = g.xi1_of(i);
        for (int j = 0; j < g.nyh(); ++j)
            out.at(i, j) = sym(x1, g.xi2_of(j)) * f.at(i, j);
    }
    return out;
}

SpectralField ddx(const SpectralField& f) {
    SpectralField out(f.grid);
    const GridSpec& g = f.grid;
    for (int i = 0; i < g.nx; ++i) {
        const double x1 = (2 * std::abs(g.kx_of(i)) == g.nx) ? 0.0 : g.xi1_of(i);
        for (int j = 0; j < g.nyh(); ++j)
            out.at(i, j) = Complex(0.0, x1) * f.at(i, j);
    }
    return out;
}

SpectralField ddy(const SpectralField& f) {
    SpectralField out(f.grid);
    const GridSpec& g = f.grid;
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.nyh(); ++j) {
            const double x2 = (2 * j == g.ny) ? 0.0 : g.xi2_of(j);
            out.at(i, j) = Complex(0.0, x2) * f.at(i, j);
        }
    return out;
}

RealField ddx(const RealField& f) { return inverse_transform(ddx(transform(f))); }
RealField ddy(const RealField& f) { return inverse_transform(ddy(transform(f))); }

CaseOps::CaseOps(CaseTag t, double e) : tag(t), eps(e) {
    if (t == CaseTag::General)
        throw ArgumentError("CaseOps: only Case1/Case2 have a symmetrization operator set");
}

double CaseOps::J(double xi1) const {
    return 1.0 + (tag == CaseTag::Case1 ? eps / 3.0 : eps / 2.0) * xi1 * xi1;
}
double CaseOps::Y(double xi1) const {
    return tag == CaseTag::Case1 ? 1.0 : 1.0 + eps / 6.0 * xi1 * xi1;
}
double CaseOps::K(double xi1) const { return J(xi1) / Y(xi1); }
double CaseOps::AB2(double xi1, double xi2) const { return K(xi1) * xi1 * xi1 + xi2 * xi2; }

namespace {
inline SpectralField pow_apply(const SpectralField& f, double p, bool vanishes_at_zero,
                               const std::function<double(double, double)>& base) {
    SpectralField out(f.grid);
    const GridSpec& g = f.grid;
    for (int i = 0; i < g.nx; ++i) {
        const double x1 = g.xi1_of(i);
        for (int j = 0; j < g.nyh(); ++j) {
            const double x2 = g.xi2_of(j);
            double b = base(x1, x2);
            double s;
            if (vanishes_at_zero && b == 0.0)
                s = (p == 0.0) ? 1.0 : 0.0;
            else
                s = rpow(b, p);
            out.at(i, j) = s * f.at(i, j);
        }
    }
    return out;
}
}  // namespace

SpectralField CaseOps::j(const SpectralField& f, double p) const {
    return pow_apply(f, p, false, [this](double x1, double) { return J(x1); });
}
SpectralField CaseOps::y(const SpectralField& f, double p) const {
    return pow_apply(f, p, false, [this](double x1, double) { return Y(x1); });
}
SpectralField CaseOps::k(const SpectralField& f, double p) const {
    return pow_apply(f, p, false, [this](double x1, double) { return K(x1); });
}
SpectralField CaseOps::ab(const SpectralField& f, double p) const {
    return pow_apply(f, 0.5 * p, true, [this](double x1, double x2) { return AB2(x1, x2); });
}
SpectralField CaseOps::lam(const SpectralField& f, double p) const {
    return pow_apply(f, 0.5 * p, true, [this](double x1, double x2) {
        double kk = K(x1);
        return AB2(x1, x2) / (kk * kk);  // Lambda = AB / K  (A/J in case 1)
    });
}

RealField CaseOps::j(const RealField& f, double p) const { return inverse_transform(j(transform(f), p)); }
RealField CaseOps::y(const RealField& f, double p) const { return inverse_transform(y(transform(f), p)); }
RealField CaseOps::k(const RealField& f, double p) const { return inverse_transform(k(transform(f), p)); }
RealField CaseOps::ab(const RealField& f, double p) const { return inverse_transform(ab(transform(f), p)); }
RealField CaseOps::lam(const RealField& f, double p) const { return inverse_transform(lam(transform(f), p)); }

double CaseOps::lam_max(const GridSpec& g) const {
    double m = 0.0;
    for (int k1 = 0; k1 <= g.cutx(); ++k1)
        for (int k2 = 0; k2 <= g.cuty(); ++k2) {
            double x1 = 2.0 * std::numbers::pi * k1 / g.lx;
            double x2 = 2.0 * std::numbers::pi * k2 / g.ly;
            double kk = K(x1);
            m = std::max(m, std::sqrt(AB2(x1, x2)) / kk);
        }
    return m;
}

}  // namespace wtbouss
