#include "wtbouss/params.hpp"

#include <cmath>
#include <sstream>

namespace wtbouss {

namespace {
constexpr double kConstraintTol = 1e-14;
constexpr double kEqTol = 1e-14;
}  // namespace

ModelParams ModelParams::case1(double eps) {
    ModelParams p;
    p.a = 0.0; p.b = 1.0 / 3.0; p.c = -1.0 / 3.0; p.d = 1.0 / 3.0;
    p.e = 1.0 / 3.0; p.f = 0.0; p.g = 0.0;
    p.eps = eps; p.case_tag = CaseTag::Case1;
    return p;
}

ModelParams ModelParams::case2(double eps) {
    ModelParams p;
    p.a = -1.0 / 6.0; p.b = 0.5; p.c = -0.5; p.d = 0.5;
    p.e = 0.5; p.f = -1.0 / 6.0; p.g = -1.0 / 6.0;
    p.eps = eps; p.case_tag = CaseTag::Case2;
    return p;
}

ModelParams ModelParams::general(const std::array<double, 7>& v, double eps) {
    ModelParams p;
    p.a = v[0]; p.b = v[1]; p.c = v[2]; p.d = v[3]; p.e = v[4]; p.f = v[5]; p.g = v[6];
    p.eps = eps; p.case_tag = CaseTag::General;
    return p;
}

ParamsReport validate_params(const ModelParams& p) {
    ParamsReport r;
    r.constraint_res1 = (p.a + p.b + p.c + p.d) - 1.0 / 3.0;
    r.constraint_res2 = (p.d + p.e + p.f + p.g) - 2.0 / 3.0;
    r.constraint_ok = std::abs(r.constraint_res1) <= kConstraintTol &&
                      std::abs(r.constraint_res2) <= kConstraintTol;

    const bool bde = p.b >= 0.0 && p.d >= 0.0 && p.e >= 0.0;
    const bool ac_neg = p.a <= 0.0 && p.c <= 0.0;
    const bool fg_neg = p.f <= 0.0 && p.g <= 0.0;
    const bool fg_eq = std::abs(p.f - p.g) <= kEqTol;
    const bool ac_eq = std::abs(p.a - p.c) <= kEqTol;
    r.family[0] = bde && ac_neg && fg_neg;
    r.family[1] = bde && ac_neg && fg_eq;
    r.family[2] = bde && ac_eq && fg_neg;
    r.family[3] = bde && ac_eq && fg_eq;
    r.any_family = r.family[0] || r.family[1] || r.family[2] || r.family[3];

    r.curl_free_ok = std::abs(p.b - p.e) <= kEqTol && p.b >= 0.0 &&
                     std::abs(p.a - p.f) <= kEqTol;

    switch (p.case_tag) {
        case CaseTag::Case1: {
            ModelParams ref = ModelParams::case1(p.eps);
            r.case_tag_ok = std::abs(p.a - ref.a) <= kEqTol && std::abs(p.b - ref.b) <= kEqTol &&
                            std::abs(p.c - ref.c) <= kEqTol && std::abs(p.d - ref.d) <= kEqTol &&
                            std::abs(p.e - ref.e) <= kEqTol && std::abs(p.f - ref.f) <= kEqTol &&
                            std::abs(p.g - ref.g) <= kEqTol;
            break;
        }
        case CaseTag::Case2: {
            ModelParams ref = ModelParams::case2(p.eps);
            r.case_tag_ok = std::abs(p.a - ref.a) <= kEqTol && std::abs(p.b - ref.b) <= kEqTol &&
                            std::abs(p.c - ref.c) <= kEqTol && std::abs(p.d - ref.d) <= kEqTol &&
                            std::abs(p.e - ref.e) <= kEqTol && std::abs(p.f - ref.f) <= kEqTol &&
                            std::abs(p.g - ref.g) <= kEqTol;
            break;
        }
        case CaseTag::General:
            r.case_tag_ok = true;
            break;
    }
    return r;
}

std::string ParamsReport::summary() const {
    std::ostringstream os;
    os << "constraint " << (constraint_ok ? "ok" : "violated")
       << " (res " << constraint_res1 << ", " << constraint_res2 << ");"
       << " families";
    const char* names[4] = {" (i)", " (ii)", " (iii)", " (iv)"};
    bool none = true;
    for (int i = 0; i < 4; ++i)
        if (family[i]) { os << names[i]; none = false; }
    if (none) os << " none";
    os << "; curl-free " << (curl_free_ok ? "ok" : "no")
       << "; case tag " << (case_tag_ok ? "ok" : "mismatch");
    return os.str();
}

void require_valid(const ModelParams& p) {
    if (!(p.eps > 0.0) || !(p.eps < 1.0))
        throw ArgumentError("ModelParams: eps must lie in (0,1)");
    ParamsReport r = validate_params(p);
    if (!r.constraint_ok) {
        std::ostringstream os;
        os << "ModelParams: constraint violated, residuals ("
           << r.constraint_res1 << ", " << r.constraint_res2 << ")";
        throw ArgumentError(os.str());
    }
    if (!r.case_tag_ok)
        throw ArgumentError("ModelParams: coefficients do not match the declared case tag");
}

}  // namespace wtbouss
