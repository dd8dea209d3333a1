#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace powmix::kernels {

// Hot-loop primitives for the Monte Carlo verifier. Backends must agree with
// the scalar reference to float/double rounding, and the fma and avx2 pair is
// expected to match bitwise.
struct Ops {
    const char* name;
    // Compensated (Neumaier) sum of n doubles.
    double (*sum_comp_f64)(const double* x, std::size_t n);
    // Weighted row sum: sum_i counts[i] * rows[i], accumulated in float lanes
    // with fused multiply-add semantics per lane.
    float (*wsum_u8_f32)(const std::uint8_t* counts, const float* rows,
                         std::size_t n);
};

const Ops& active();                      // POWMIX_KERNELS env or auto-detect
const Ops* by_name(const std::string& n); // nullptr if unknown or unsupported
std::vector<std::string> available();

} // namespace powmix::kernels
