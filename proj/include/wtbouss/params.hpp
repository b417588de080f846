#pragma once

#include <array>
#include <string>

#include "wtbouss/symbols.hpp"

namespace wtbouss {

/// The seven modeling coefficients, constrained by
///   a + b + c + d = 1/3,   d + e + f + g = 2/3.
struct ModelParams {
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0, e = 0.0, f = 0.0, g = 0.0;
    double eps = 0.1;
    CaseTag case_tag = CaseTag::General;

    std::array<double, 7> coef() const { return {a, b, c, d, e, f, g}; }

    static ModelParams case1(double eps);
    static ModelParams case2(double eps);
    static ModelParams general(const std::array<double, 7>& abcdefg, double eps);
};

/// Classification against the linear well-posedness families and the
/// curl-free propagation condition.
struct ParamsReport {
    double constraint_res1 = 0.0;  // a+b+c+d - 1/3
    double constraint_res2 = 0.0;  // d+e+f+g - 2/3
    bool constraint_ok = false;
    std::array<bool, 4> family{};  // (i)..(iv)
    bool any_family = false;
    bool curl_free_ok = false;     // b == e and a == f
    bool case_tag_ok = false;      // coefficients match the declared tag
    std::string summary() const;
};

ParamsReport validate_params(const ModelParams& p);

/// Throws ArgumentError listing the constraint residuals when violated.
void require_valid(const ModelParams& p);

}  // namespace wtbouss
