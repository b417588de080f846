#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "wtbouss/errors.hpp"

namespace wtbouss {

using Complex = std::complex<double>;

/// Periodic 2-D collocation grid. x is the dispersive direction.
///
/// Wavenumbers are xi1 = 2*pi*k1/lx with k1 in [-nx/2, nx/2) and likewise xi2.
/// Quadratic products are dealiased by truncation to |k1| <= floor(df*nx/2),
/// |k2| <= floor(df*ny/2) with df = dealias_fraction (default 2/3).
struct GridSpec {
    int nx = 64;
    int ny = 64;
    double lx = 6.283185307179586476925286766559;
    double ly = 6.283185307179586476925286766559;
    double dealias_fraction = 2.0 / 3.0;

    GridSpec() = default;
    GridSpec(int nx_, int ny_, double lx_, double ly_, double df = 2.0 / 3.0);

    int n() const { return nx * ny; }
    int nyh() const { return ny / 2 + 1; }   // r2c storage: ny/2+1 columns
    int nspec() const { return nx * nyh(); }

    /// integer wavenumber of spectral row i in [0,nx)
    int kx_of(int i) const { return i <= nx / 2 ? i : i - nx; }
    double xi1_of(int i) const;
    double xi2_of(int j) const;

    /// dealias band: |k1| <= cutx, k2 <= cuty
    int cutx() const { return static_cast<int>(dealias_fraction * (nx / 2) + 1e-12); }
    int cuty() const { return static_cast<int>(dealias_fraction * (ny / 2) + 1e-12); }

    double cell_area() const { return lx * ly / (double(nx) * double(ny)); }

    bool operator==(const GridSpec& o) const {
        return nx == o.nx && ny == o.ny && lx == o.lx && ly == o.ly &&
               dealias_fraction == o.dealias_fraction;
    }
};

/// Real samples at the uniform collocation points, row-major (x slow, y fast).
struct RealField {
    GridSpec grid;
    std::vector<double> v;

    RealField() = default;
    explicit RealField(const GridSpec& g) : grid(g), v(g.n(), 0.0) {}

    double& at(int ix, int iy) { return v[size_t(ix) * grid.ny + iy]; }
    double at(int ix, int iy) const { return v[size_t(ix) * grid.ny + iy]; }

    RealField& operator+=(const RealField& o);
    RealField& operator-=(const RealField& o);
    RealField& operator*=(double a);
};

RealField operator+(RealField a, const RealField& b);
RealField operator-(RealField a, const RealField& b);
RealField operator*(double a, RealField f);
RealField operator-(RealField f);

/// Complex Fourier coefficients in half-spectrum (r2c) layout:
/// index (i, j) -> i*(ny/2+1)+j, rows i carry kx via kx_of, columns j carry
/// ky = j >= 0.  Hermitian symmetry is implied by the storage.
struct SpectralField {
    GridSpec grid;
    std::vector<Complex> c;

    SpectralField() = default;
    explicit SpectralField(const GridSpec& g) : grid(g), c(g.nspec(), Complex(0.0, 0.0)) {}

    Complex& at(int i, int j) { return c[size_t(i) * grid.nyh() + j]; }
    Complex at(int i, int j) const { return c[size_t(i) * grid.nyh() + j]; }

    /// coefficient of the logical mode (k1, k2), any sign of k2
    Complex mode(int k1, int k2) const;
    /// add amplitude to the logical mode (k1, k2); keeps the data real
    void add_mode(int k1, int k2, Complex amp);

    SpectralField& operator+=(const SpectralField& o);
    SpectralField& operator-=(const SpectralField& o);
    SpectralField& operator*=(double a);
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double a, SpectralField f);

/// Forward transform, unnormalized: c_k = sum_x f(x) exp(-i k.x).
SpectralField transform(const RealField& f);
/// Inverse transform, divides by nx*ny; inverse_transform(transform(f)) == f.
RealField inverse_transform(const SpectralField& s);

/// Zero every coefficient outside the dealias band (in place).
void truncate_to_band(SpectralField& s);
bool is_band_limited(const SpectralField& s, double tol = 0.0);

/// Pointwise product followed by truncation to the dealias band.  Inputs are
/// truncated first, so content beyond the band never aliases back into it.
RealField dealiased_product(const RealField& f, const RealField& g);

/// Product for fields already inside the dealias band (the invariant kept by
/// every operation in this library): pointwise multiply, transform, truncate.
RealField pmul(const RealField& f, const RealField& g);

/// Evaluate fn pointwise on collocation values and truncate to the band.
/// For non-polynomial fn the pointwise evaluation is followed by truncation
/// so later pmul calls stay alias-free.
RealField banded_pointwise(const std::function<double(double)>& fn, const RealField& f);

double mean(const RealField& f);
RealField remove_mean(RealField f);
double max_abs(const RealField& f);
bool all_finite(const RealField& f);

/// sqrt( cell_area * sum f^2 )  — the discrete L2 norm with physical measure
double l2_norm(const RealField& f);
double l2_norm(const SpectralField& s);

/// Multiplicity of a stored half-spectrum coefficient in full-spectrum sums.
inline double herm_weight(const GridSpec& g, int j) {
    return (j == 0 || 2 * j == g.ny) ? 1.0 : 2.0;
}

/// cell_area / (nx*ny): ||f||_L2^2 == parseval_factor * sum_k(full) |c_k|^2
inline double parseval_factor(const GridSpec& g) {
    return g.lx * g.ly / (double(g.nx) * double(g.ny) * double(g.nx) * double(g.ny));
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where);

}  // namespace wtbouss
