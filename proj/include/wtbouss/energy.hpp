#pragma once

#include "wtbouss/systems.hpp"

namespace wtbouss {

/// Spectral weight of the discrete Sobolev norms:
///   Inhomogeneous: (1 + |xi|^2)^s
///   Homogeneous:   |xi|^(2s), zero mode ignored
///   HsEps:         eps^(-1/2) (|xi1|^2 + eps |xi2|^2)^s
/// All norms use the lattice measure cell = lx*ly/(nx*ny), i.e.
/// ||f||^2 = parseval_factor * sum_k weight(xi_k) |f_hat(k)|^2.
enum class NormFlavor { Inhomogeneous, Homogeneous, HsEps };

double sobolev_norm(const RealField& f, double s, NormFlavor flavor, double eps = 0.0);
double sobolev_norm(const SpectralField& f, double s, NormFlavor flavor, double eps = 0.0);

/// parseval_factor * sum over the full spectrum of w(xi1, xi2) |f_hat|^2.
double spectral_weight_sum(const SpectralField& f,
                           const std::function<double(double, double)>& w);

/// ||J_eps^jpow f||_{H^s or Hdot^s} for the case's J_eps.
double weighted_norm(const SpectralField& f, CaseTag tag, double eps, double jpow,
                     double s, bool homogeneous);
double weighted_norm(const RealField& f, CaseTag tag, double eps, double jpow,
                     double s, bool homogeneous);

struct EnergyReport {
    double e_total = 0.0;
    double e_low = 0.0;
    double e_high = 0.0;
    double e_tilde_high = 0.0;  // filled by tilde_energy when requested
    double s = 4.0;
    double eps = 0.0;
    CaseTag case_tag = CaseTag::General;
    double time = 0.0;
};

/// The case energy functionals (squared norms, as defined):
/// Case 1: E_{s,l} = |J v|_{H^s}^2 + |J^{1/2} w|_{H^s}^2 + |J^{1/2} z|_{H^s}^2,
///         E_{s,h} = |(J^{1/2} v_x, v_y)|_{Hdot^s}^2 + |(w_x, J^{-1/2} w_y)|^2
///                 + |(z_x, J^{-1/2} z_y)|^2,   E_s = E_{s,l} + E_{s,h}.
/// Case 2: E_s = |J^{1/2} z|_{H^{s+1}}^2 + |J^{1/2} V|_{H^{s+1}}^2, with the
///         lower/highest split |J^{1/2}K^{1/2} v|^2 + ... and |J^{1/2} grad .|^2.
/// General systems reuse the Case-1 shape with J = 1 + b*eps*xi1^2.
EnergyReport energy(CaseTag tag, const State& s, double sobolev_s, double eps,
                    double j_sigma_general = 0.0);

/// Highest-order functional of the good unknowns:
/// |J^{1/2} p_tilde|_{Hdot^s}^2 + |J^{1/2} theta_tilde|_{Hdot^s}^2.
/// Inputs must be zero-mean.
double tilde_energy(const RealField& p_tilde, const RealField& theta_tilde,
                    CaseTag tag, double sobolev_s, double eps);

}  // namespace wtbouss
