#include "wtbouss/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace wtbouss {

GridSpec::GridSpec(int nx_, int ny_, double lx_, double ly_, double df)
    : nx(nx_), ny(ny_), lx(lx_), ly(ly_), dealias_fraction(df) {
    if (nx < 16 || ny < 16 || nx % 2 != 0 || ny % 2 != 0)
        throw ArgumentError("GridSpec: nx, ny must be even and >= 16");
    if (!(lx > 0.0) || !(ly > 0.0))
        throw ArgumentError("GridSpec: lx, ly must be positive");
    if (!(df > 0.0) || df > 1.0)
        throw ArgumentError("GridSpec: dealias_fraction must be in (0,1]");
}

double GridSpec::xi1_of(int i) const {
    return 2.0 * std::numbers::pi * kx_of(i) / lx;
}

double GridSpec::xi2_of(int j) const {
    return 2.0 * std::numbers::pi * j / ly;
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where) {
    if (!(a == b)) throw ArgumentError(std::string(where) + ": grid mismatch");
}

RealField& RealField::operator+=(const RealField& o) {
    require_same_grid(grid, o.grid, "RealField::operator+=");
    for (size_t i = 0; i < v.size(); ++i) v[i] += o.v[i];
    return *this;
}
RealField& RealField::operator-=(const RealField& o) {
    require_same_grid(grid, o.grid, "RealField::operator-=");
    for (size_t i = 0; i < v.size(); ++i) v[i] -= o.v[i];
    return *this;
}
RealField& RealField::operator*=(double a) {
    for (double& x : v) x *= a;
    return *this;
}
RealField operator+(RealField a, const RealField& b) { a += b; return a; }
RealField operator-(RealField a, const RealField& b) { a -= b; return a; }
RealField operator*(double a, RealField f) { f *= a; return f; }
RealField operator-(RealField f) { f *= -1.0; return f; }

SpectralField& SpectralField::operator+=(const SpectralField& o) {
    require_same_grid(grid, o.grid, "SpectralField::operator+=");
    for (size_t i = 0; i < c.size(); ++i) c[i] += o.c[i];
    return *this;
}
SpectralField& SpectralField::operator-=(const SpectralField& o) {
    require_same_grid(grid, o.grid, "SpectralField::operator-=");
    for (size_t i = 0; i < c.size(); ++i) c[i] -= o.c[i];
    return *this;
}
SpectralField& SpectralField::operator*=(double a) {
    for (Complex& x : c) x *= a;
    return *this;
}
SpectralField operator+(SpectralField a, const SpectralField& b) { a += b; return a; }
SpectralField operator-(SpectralField a, const SpectralField& b) { a -= b; return a; }
SpectralField operator*(double a, SpectralField f) { f *= a; return f; }

Complex SpectralField::mode(int k1, int k2) const {
    const int nyh = grid.nyh();
    if (k2 >= 0) {
        int i = (k1 % grid.nx + grid.nx) % grid.nx;
        if (k2 >= nyh) throw ArgumentError("SpectralField::mode: k2 out of range");
        return at(i, k2);
    }
    int i = ((-k1) % grid.nx + grid.nx) % grid.nx;
    if (-k2 >= nyh) throw ArgumentError("SpectralField::mode: k2 out of range");
    return std::conj(at(i, -k2));
}

void SpectralField::add_mode(int k1, int k2, Complex amp) {
    if (k2 < 0) { k1 = -k1; k2 = -k2; amp = std::conj(amp); }
    int i = (k1 % grid.nx + grid.nx) % grid.nx;
    if (k2 >= grid.nyh()) throw ArgumentError("SpectralField::add_mode: k2 out of range");
    at(i, k2) += amp;
    // ky = 0 / Nyquist column: pairs (k1, 0) and (-k1, 0) live in the same
    // storage, keep them Hermitian explicitly.
    if ((k2 == 0 || 2 * k2 == grid.ny) && k1 != 0 && 2 * std::abs(k1) != grid.nx) {
        int im = ((-k1) % grid.nx + grid.nx) % grid.nx;
        at(im, k2) += std::conj(amp);
    }
}

namespace {

// Plan registry, one pair of plans per grid size.  Planned once with
// FFTW_ESTIMATE (deterministic) and executed through the new-array interface,
// which is safe for concurrent calls.
struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan inv = nullptr;
};

std::mutex g_plan_mutex;
std::map<std::pair<int, int>, PlanPair>& plan_cache() {
    static std::map<std::pair<int, int>, PlanPair> cache;
    return cache;
}

PlanPair plans_for(int nx, int ny) {
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    auto& cache = plan_cache();
    auto it = cache.find({nx, ny});
    if (it != cache.end()) return it->second;
    std::vector<double> rbuf(size_t(nx) * ny);
    std::vector<Complex> cbuf(size_t(nx) * (ny / 2 + 1));
    PlanPair p;
    p.fwd = fftw_plan_dft_r2c_2d(nx, ny, rbuf.data(),
                                 reinterpret_cast<fftw_complex*>(cbuf.data()),
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
    p.inv = fftw_plan_dft_c2r_2d(nx, ny, reinterpret_cast<fftw_complex*>(cbuf.data()),
                                 rbuf.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
    cache[{nx, ny}] = p;
    return p;
}

}  // namespace

SpectralField transform(const RealField& f) {
    if (int(f.v.size()) != f.grid.n())
        throw ArgumentError("transform: field size does not match grid");
    PlanPair p = plans_for(f.grid.nx, f.grid.ny);
    SpectralField out(f.grid);
    std::vector<double> in(f.v);  // r2c may scribble on its input
    fftw_execute_dft_r2c(p.fwd, in.data(), reinterpret_cast<fftw_complex*>(out.c.data()));
    return out;
}

RealField inverse_transform(const SpectralField& s) {
    if (int(s.c.size()) != s.grid.nspec())
        throw ArgumentError("inverse_transform: field size does not match grid");
    PlanPair p = plans_for(s.grid.nx, s.grid.ny);
    RealField out(s.grid);
    std::vector<Complex> in(s.c);  // c2r destroys its input
    fftw_execute_dft_c2r(p.inv, reinterpret_cast<fftw_complex*>(in.data()), out.v.data());
    const double scale = 1.0 / double(s.grid.n());
    for (double& x : out.v) x *= scale;
    return out;
}

void truncate_to_band(SpectralField& s) {
    const GridSpec& g = s.grid;
    const int cx = g.cutx(), cy = g.cuty();
    for (int i = 0; i < g.nx; ++i) {
        const bool kill_row = std::abs(g.kx_of(i)) > cx;
        for (int j = 0; j < g.nyh(); ++j)
            if (kill_row || j > cy) s.at(i, j) = Complex(0.0, 0.0);
    }
}

bool is_band_limited(const SpectralField& s, double tol) {
    const GridSpec& g = s.grid;
    const int cx = g.cutx(), cy = g.cuty();
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.nyh(); ++j)
            if ((std::abs(g.kx_of(i)) > cx || j > cy) && std::abs(s.at(i, j)) > tol)
                return false;
    return true;
}

RealField pmul(const RealField& f, const RealField& g) {
    require_same_grid(f.grid, g.grid, "pmul");
    RealField prod(f.grid);
    for (size_t i = 0; i < prod.v.size(); ++i) prod.v[i] = f.v[i] * g.v[i];
    SpectralField s = transform(prod);
    truncate_to_band(s);
    return inverse_transform(s);
}

RealField dealiased_product(const RealField& f, const RealField& g) {
    require_same_grid(f.grid, g.grid, "dealiased_product");
    SpectralField sf = transform(f);
    SpectralField sg = transform(g);
    truncate_to_band(sf);
    truncate_to_band(sg);
    return pmul(inverse_transform(sf), inverse_transform(sg));
}

RealField banded_pointwise(const std::function<double(double)>& fn, const RealField& f) {
    RealField out(f.grid);
    for (size_t i = 0; i < f.v.size(); ++i) out.v[i] = fn(f.v[i]);
    SpectralField s = transform(out);
    truncate_to_band(s);
    return inverse_transform(s);
}

double mean(const RealField& f) {
    double s = 0.0;
    for (double x : f.v) s += x;
    return s / double(f.grid.n());
}

RealField remove_mean(RealField f) {
    const double m = mean(f);
    for (double& x : f.v) x -= m;
    return f;
}

double max_abs(const RealField& f) {
    double m = 0.0;
    for (double x : f.v) m = std::max(m, std::abs(x));
    return m;
}

bool all_finite(const RealField& f) {
    for (double x : f.v)
        if (!std::isfinite(x)) return false;
    return true;
}

double l2_norm(const RealField& f) {
    double s = 0.0;
    for (double x : f.v) s += x * x;
    return std::sqrt(s * f.grid.cell_area());
}

double l2_norm(const SpectralField& s) {
    double acc = 0.0;
    for (int i = 0; i < s.grid.nx; ++i)
        for (int j = 0; j < s.grid.nyh(); ++j)
            acc += herm_weight(s.grid, j) * std::norm(s.at(i, j));
    return std::sqrt(acc * parseval_factor(s.grid));
}

}  // namespace wtbouss
