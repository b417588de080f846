#pragma once

#include "wtbouss/systems.hpp"

namespace wtbouss {

/// Truncation policy for the Neumann series behind (2 + (eps/2) zeta Y^-1)^-1.
struct ResolventConfig {
    int max_terms = 64;
    double tol = 1e-13;        // stop when |term|_L2 < tol * |f|_L2
    double norm_guard = 0.5;   // refuse when |(eps/4) zeta Y^-1 f| / |f| >= guard

    void validate() const {
        if (max_terms < 1) throw ArgumentError("ResolventConfig: max_terms >= 1");
        if (!(tol > 0.0)) throw ArgumentError("ResolventConfig: tol > 0");
        if (!(norm_guard > 0.0) || norm_guard >= 1.0)
            throw ArgumentError("ResolventConfig: norm_guard in (0,1)");
    }
};

struct GoodUnknowns {
    RealField p, theta;
    RealField p_tilde, theta_tilde;  // empty until to_tilde
    CaseTag case_tag = CaseTag::Case1;
};

/// p = v_x + K^-1 w_y (K = J in case 1), theta = Lambda(D) zeta.
/// theta has zero mean by construction (Lambda vanishes at xi = 0).
GoodUnknowns to_ptheta(CaseTag tag, const State& s, double eps);

/// Invert: case 1  V = -A^-2 J grad p, zeta = A^-1 J theta;
///         case 2  V = -grad B^-2 K p, zeta = K B^-1 theta.
/// The reconstruction is an exact gradient, so v_y = w_x to round-off.
/// Inputs must be zero-mean (mean flow is not representable in p).
State from_ptheta(CaseTag tag, const RealField& p, const RealField& theta, double eps);

/// Outcome of a resolvent/operator application, with the measured
/// contraction factor and the number of Neumann terms consumed.
struct ResolventStats {
    double contraction = 0.0;
    int terms = 0;
};

/// u = (2 + (eps/2) zeta Y_eps^-1)^-1 f  by the alternating Neumann series
/// u = (1/2) sum_n (-1)^n ((eps/4) zeta Y_eps^-1)^n f.
/// Operands are projected to the dealias band on entry (the class every
/// field in this library lives in), keeping the series products alias-free.
/// Throws GuardError when the measured contraction factor reaches the guard,
/// NumericalError when max_terms is hit before the tolerance.
RealField resolvent_apply(const RealField& zeta, const RealField& f, double eps,
                          const ResolventConfig& cfg, ResolventStats* stats = nullptr);

struct GammaPair {
    RealField Gamma;  // (2 + (eps/2) zeta Y^-1)^-1 (zeta f)
    RealField gamma;  // (1 + (eps/2) zeta Y^-1) Gamma
    ResolventStats stats;
};

/// Both Gamma_eps(zeta, Dx) f and gamma_eps(zeta, Dx) f.
/// Identity gamma f + Gamma f = zeta.f holds to the series tolerance;
/// both operators are self-adjoint on the discrete L2.
GammaPair gamma_apply(const RealField& zeta, const RealField& f, double eps,
                      const ResolventConfig& cfg);

/// Good unknowns (p_tilde, theta_tilde).  theta_tilde is zero-mean; on the
/// torus p_tilde carries an O(eps) mean which the homogeneous functionals
/// ignore.  Case 2 uses gamma_eps and is subject to the resolvent guard.
GoodUnknowns to_tilde(CaseTag tag, const State& s, double eps,
                      const ResolventConfig& cfg, ResolventStats* stats = nullptr);

}  // namespace wtbouss
