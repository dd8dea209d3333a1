#include "powmix/kernels/kernels.hpp"

#include <cmath>

namespace powmix::kernels {

namespace {

// single-accumulator Neumaier, the readable reference
double sum_comp_f64_impl(const double* x, std::size_t n) {
    double s = 0, c = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double t = s + x[i];
        if (std::abs(s) >= std::abs(x[i]))
            c += (s - t) + x[i];
        else
            c += (x[i] - t) + s;
        s = t;
    }
    return s + c;
}

// reference accumulates in double; vector backends keep float lanes
float wsum_u8_f32_impl(const std::uint8_t* counts, const float* rows, std::size_t n) {
    double acc = 0;
    for (std::size_t i = 0; i < n; ++i)
        acc += static_cast<double>(counts[i]) * static_cast<double>(rows[i]);
    return static_cast<float>(acc);
}

} // namespace

extern const Ops kScalarOps = {"scalar", &sum_comp_f64_impl, &wsum_u8_f32_impl};

} // namespace powmix::kernels
