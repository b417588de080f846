#pragma once

#include <cmath>
#include <functional>
#include <numbers>

#include "wtbouss/evolve.hpp"

namespace wtbouss::test {

inline GridSpec grid(int n = 64, double L = 2.0 * std::numbers::pi) {
    return GridSpec(n, n, L, L);
}

inline RealField field_from_fn(const GridSpec& g,
                               const std::function<double(double, double)>& fn) {
    RealField f(g);
    for (int i = 0; i < g.nx; ++i) {
        const double x = g.lx * i / g.nx;
        for (int j = 0; j < g.ny; ++j) f.at(i, j) = fn(x, g.ly * j / g.ny);
    }
    return f;
}

inline double rel_linf(const RealField& a, const RealField& b) {
    double scale = std::max(max_abs(b), 1e-300);
    return max_abs(a - b) / scale;
}

inline double data_scale(const State& s) {
    return std::max({max_abs(s.v), max_abs(s.w), max_abs(s.zeta)});
}

}  // namespace wtbouss::test
