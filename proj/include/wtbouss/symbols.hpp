#pragma once

#include <array>
#include <functional>

#include "wtbouss/grid.hpp"

namespace wtbouss {

enum class CaseTag { General, Case1, Case2 };

/// Named anisotropic multiplier with a real power.
///
/// Real symbols (xi = (xi1, xi2)):
///   Jeps      1 + sigma*eps*xi1^2                      (sigma = b, d, e, 1/3, 1/2, ...)
///   Yeps      1 + (eps/6)*xi1^2
///   Keps      (1 - c*eps*xi1^2) / (1 - g*eps*xi1^2)    (c <= 0, g <= 0)
///   A         sqrt((1 + (eps/3)xi1^2) xi1^2 + xi2^2)
///   B         sqrt(Keps(xi1; -1/2, -1/6) xi1^2 + xi2^2)
///   Lambda1   A / Jeps(1/3)
///   Lambda2   B / Keps(-1/2, -1/6)
///   LambdaDR  full dispersion symbol from coefficients a..g; the anisotropic
///             flavor weights xi2^2 by eps (pre-scaling convention)
///   AbsD      |xi|
///   BracketD  sqrt(1 + |xi|^2)
/// Complex symbols:
///   Dx        (i xi1)^power,  Dy  (i xi2)^power   (integer powers)
///
/// Symbols that vanish only at xi = 0 (A, B, Lambda*, AbsD, Dx, Dy) are set to
/// 0 at the zero mode when raised to a negative power: the operators are only
/// applied to zero-mean data and this pins the quotient convention.
enum class SymbolKind { Jeps, Yeps, Keps, A, B, Lambda1, Lambda2, LambdaDR, AbsD, BracketD, Dx, Dy };

struct SymbolSpec {
    SymbolKind kind = SymbolKind::Jeps;
    double power = 1.0;
    double eps = 0.0;
    double sigma = 0.0;                  // Jeps coefficient
    double c = 0.0, g = 0.0;             // Keps coefficients
    std::array<double, 7> coef{};        // a..g for LambdaDR
    bool aniso_y = false;                // LambdaDR: weight xi2^2 by eps

    Complex eval(double xi1, double xi2) const;

    static SymbolSpec jeps(double sigma, double eps, double power = 1.0);
    static SymbolSpec yeps(double eps, double power = 1.0);
    static SymbolSpec keps(double c, double g, double eps, double power = 1.0);
    static SymbolSpec a_op(double eps, double power = 1.0);
    static SymbolSpec b_op(double eps, double power = 1.0);
    static SymbolSpec lambda1(double eps, double power = 1.0);
    static SymbolSpec lambda2(double eps, double power = 1.0);
    static SymbolSpec lambda_dr(const std::array<double, 7>& abcdefg, double eps,
                                bool aniso_y, double power = 1.0);
    static SymbolSpec dx(double power = 1.0);
    static SymbolSpec dy(double power = 1.0);
    static SymbolSpec absd(double power = 1.0);
    static SymbolSpec bracketd(double power = 1.0);
};

/// Apply sym(D): spectrum-pointwise multiply.  Throws on non-finite symbol.
SpectralField apply_symbol(const SymbolSpec& sym, const SpectralField& f);
RealField apply_symbol(const SymbolSpec& sym, const RealField& f);

/// Low-level multiplier application with an arbitrary real symbol.
using RealSymbolFn = std::function<double(double, double)>;
SpectralField apply_multiplier(const SpectralField& f, const RealSymbolFn& sym);

SpectralField ddx(const SpectralField& f);
SpectralField ddy(const SpectralField& f);
RealField ddx(const RealField& f);
RealField ddy(const RealField& f);

/// Per-case multiplier bundle used by the symmetrization layer.  Case 1:
/// J = K = 1 + (eps/3)xi1^2, AB = A; Case 2: J = 1 + (eps/2)xi1^2,
/// Y = 1 + (eps/6)xi1^2, K = J/Y, AB = B.  Negative powers of AB and Lam
/// zero the (0,0) mode.
struct CaseOps {
    CaseTag tag;
    double eps;

    CaseOps(CaseTag t, double e);

    double J(double xi1) const;
    double Y(double xi1) const;
    double K(double xi1) const;
    double AB2(double xi1, double xi2) const;  // A^2 or B^2

    SpectralField j(const SpectralField& f, double pow) const;
    SpectralField y(const SpectralField& f, double pow) const;
    SpectralField k(const SpectralField& f, double pow) const;
    SpectralField ab(const SpectralField& f, double pow) const;
    SpectralField lam(const SpectralField& f, double pow) const;

    RealField j(const RealField& f, double pow) const;
    RealField y(const RealField& f, double pow) const;
    RealField k(const RealField& f, double pow) const;
    RealField ab(const RealField& f, double pow) const;
    RealField lam(const RealField& f, double pow) const;

    double lam_max(const GridSpec& g) const;  // max over the dealias band
};

}  // namespace wtbouss
