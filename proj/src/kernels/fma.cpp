#include "powmix/kernels/kernels.hpp"

#include <cmath>

// Lane-structured variant that mirrors the avx2 backend operation for
// operation: 4 compensated double lanes, 8 fused float lanes, identical tail
// handling and combine order, so the two must agree bitwise.

namespace powmix::kernels {

namespace {

inline void neumaier_update(double& s, double& c, double x) {
    double t = s + x;
    double as = std::abs(s), ax = std::abs(x);
    double big = as >= ax ? s : x;
    double small = as >= ax ? x : s;
    c += (big - t) + small;
    s = t;
}

double sum_comp_f64_impl(const double* x, std::size_t n) {
    double s[4] = {0, 0, 0, 0}, c[4] = {0, 0, 0, 0};
    std::size_t n4 = n - n % 4;
    for (std::size_t i = 0; i < n4; i += 4)
        for (int l = 0; l < 4; ++l) neumaier_update(s[l], c[l], x[i + l]);
    for (std::size_t j = 0; n4 + j < n; ++j) neumaier_update(s[j], c[j], x[n4 + j]);
    double ts = (s[0] + s[1]) + (s[2] + s[3]);
    double tc = (c[0] + c[1]) + (c[2] + c[3]);
    return ts + tc;
}

float wsum_u8_f32_impl(const std::uint8_t* counts, const float* rows, std::size_t n) {
    float a[8] = {0, 0, 0, 0, 0, 0, 0, 0};
    std::size_t n8 = n - n % 8;
    for (std::size_t i = 0; i < n8; i += 8)
        for (int l = 0; l < 8; ++l)
            a[l] = std::fmaf(static_cast<float>(counts[i + l]), rows[i + l], a[l]);
    for (std::size_t j = 0; n8 + j < n; ++j)
        a[j] = std::fmaf(static_cast<float>(counts[n8 + j]), rows[n8 + j], a[j]);
    return ((a[0] + a[1]) + (a[2] + a[3])) + ((a[4] + a[5]) + (a[6] + a[7]));
}

} // namespace

extern const Ops kFmaOps = {"fma", &sum_comp_f64_impl, &wsum_u8_f32_impl};

} // namespace powmix::kernels
