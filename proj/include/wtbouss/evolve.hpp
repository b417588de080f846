#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "wtbouss/energy.hpp"
#include "wtbouss/unknowns.hpp"

namespace wtbouss {

enum class InitFamily { Gaussian, Trig, Random };

/// Everything a batch run needs.  Defaults are the documented config defaults.
struct RunConfig {
    SystemId system = SystemId::Case1;
    ModelParams params;                 // derived from system + eps unless general
    GridSpec grid;
    double dt = 0.0;                    // 0 => auto: cfl / max Lambda
    double cfl = 1.0;
    double t_end = 10.0;
    bool t_end_over_eps = false;        // t_end = t0 / eps
    double t0 = 1.0;
    int diag_every = 10;
    InitFamily init = InitFamily::Gaussian;
    double amplitude = 0.05;
    unsigned long long seed = 1;
    int band = 0;                       // random family band limit; 0 => nx/6
    double sobolev_s = 4.0;
    ResolventConfig resolvent;
    bool linearized = false;
    bool diag_consistency = false;      // WTB1 only
    bool diag_tilde = true;             // Case1/Case2 only
    std::string out_dir;

    double effective_t_end() const { return t_end_over_eps ? t0 / params.eps : t_end; }
};

struct DiagnosticsRecord {
    double time = 0.0;
    EnergyReport energy;  // e_tilde_high carries the tilde functional
    double curl_res = 0.0;
    double consistency_res = std::numeric_limits<double>::quiet_NaN();
    double guard_factor = std::numeric_limits<double>::quiet_NaN();
};

struct RunResult {
    std::vector<DiagnosticsRecord> records;
    State final_state;
    bool ok = true;
    std::string error;        // set when the run stopped early
    int error_code = 0;       // CLI exit code semantics (3 or 4)
};

using RhsFn = std::function<Tendency(const State&)>;

/// One classical RK4 step; deterministic, throws NumericalError on blow-up.
State step(const State& s, double dt, const RhsFn& f);

/// Stability-bound time step for the system's linearization on this grid.
double auto_dt(const RunConfig& cfg);

/// Build the configured curl-free initial data (exact gradient velocities).
State initial_state(const RunConfig& cfg);

/// Fixed smooth data for the consistency-rate experiment: a y-narrow bump
/// with v = phi_x, w = phi_y and no eps factor anywhere, so the profile is
/// genuinely identical across the eps sweep (the reduced system's residual
/// needs no curl-free condition, only the coefficient constraint).
State consistency_profile(const GridSpec& g, double amplitude);

/// March to t_end, emitting one record every diag_every steps (and at the
/// final time).  Blow-up or guard violation returns the partial series with
/// the error recorded instead of throwing.
RunResult integrate(const RunConfig& cfg);

struct SweepRow {
    double eps = 0.0;
    double t_end = 0.0;
    double e0 = 0.0;
    double e_max = 0.0;
    double growth_ratio = 0.0;   // max_t E(t)/E(0)
    double max_curl = 0.0;
    double max_guard = 0.0;
    bool ok = false;
    std::string error;
};

/// Rescale nothing but eps: same profile, same grid, t_end = t0/eps each.
/// Entries run in parallel, capped by WTBOUSS_THREADS.
std::vector<SweepRow> long_time_sweep(const RunConfig& base, const std::vector<double>& eps_list);

/// Deterministic normal deviates (xorshift-free: mt19937_64 + Box-Muller).
class Rng {
  public:
    explicit Rng(unsigned long long seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}
    double uniform();   // [0, 1)
    double gaussian();  // standard normal

  private:
    unsigned long long next_u64();
    unsigned long long state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Seeded random band-limited real field: i.i.d. complex Gaussian coefficients
/// for 0 < |k| <= band, Hermitian-symmetrized, normalized to unit max-abs.
RealField random_band_limited(const GridSpec& g, int band, Rng& rng);

}  // namespace wtbouss
