#pragma once

#include <array>

#include "wtbouss/params.hpp"

namespace wtbouss {

/// Which evolution system a right-hand side evaluates.
///
/// WTB1: original anisotropic scaling; y-derivatives carry eps^(1/2) factors
///       and the curl-free condition reads eps^(1/2) v_y = w_x.
/// WTB2: rescaled isotropic convention (general coefficients), curl-free
///       condition v_y = w_x, symmetric quadratic terms.
/// Case1/Case2: WTB2 at the two special coefficient sets.
enum class SystemId { WTB1, WTB2, Case1, Case2 };

CaseTag case_of(SystemId sys);
SystemId system_of_case(CaseTag tag);

/// Physical unknowns on a shared grid.
struct State {
    RealField v, w, zeta;
    double time = 0.0;

    State() = default;
    explicit State(const GridSpec& g) : v(g), w(g), zeta(g) {}
    const GridSpec& grid() const { return v.grid; }
};

struct Tendency {
    RealField dv, dw, dzeta;
};

/// Evaluate d/dt (v, w, zeta).  All spatial terms spectral, quadratic terms
/// dealiased; elliptic x-factors inverted exactly per mode.  With
/// linearized = true the quadratic terms are dropped.
Tendency rhs(SystemId sys, const State& s, const ModelParams& p, bool linearized = false);

/// zeta - (eps/4) zeta^2 (dealiased square).
RealField zeta_tilde(const RealField& zeta, double eps);

/// Invert zeta_tilde by fixed-point iteration (requires eps*|zeta|_inf < 1).
RealField zeta_from_tilde(const RealField& zt, double eps, double tol = 1e-12,
                          int max_iter = 200);

/// L2 norm of (eps^(1/2) v_y - w_x) when scaled==false ... see below.
/// scaled == false: the WTB1 convention  eps^(1/2) v_y - w_x;
/// scaled == true : the rescaled convention  v_y - w_x.
double curl_residual(const State& s, double eps, bool scaled);

/// H^N_eps norms of the three residuals obtained by substituting
/// (v, w, zeta_tilde) into the reduced system, with every time derivative
/// supplied analytically by rhs(WTB1, ...).
struct ConsistencyResidual {
    std::array<double, 3> per_equation{};
    double total = 0.0;  // sqrt of the sum of squares
    int n = 2;           // Sobolev index of the anisotropic norm
};
ConsistencyResidual consistency_residual(const State& s, const ModelParams& p, int n = 2);

}  // namespace wtbouss
