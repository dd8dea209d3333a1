#include "powmix/kernels/kernels.hpp"

#include <cmath>
#include <immintrin.h>

// AVX2 twin of the fma backend: same lane layout, same tail path, same
// combine order. Keep the two in lockstep or the bitwise test will object.

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
    const __m256d absmask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    __m256d vs = _mm256_setzero_pd(), vc = _mm256_setzero_pd();
    std::size_t n4 = n - n % 4;
    for (std::size_t i = 0; i < n4; i += 4) {
        __m256d xv = _mm256_loadu_pd(x + i);
        __m256d t = _mm256_add_pd(vs, xv);
        __m256d as = _mm256_and_pd(vs, absmask);
        __m256d ax = _mm256_and_pd(xv, absmask);
        __m256d ge = _mm256_cmp_pd(as, ax, _CMP_GE_OQ);
        __m256d big = _mm256_blendv_pd(xv, vs, ge);
        __m256d small = _mm256_blendv_pd(vs, xv, ge);
        vc = _mm256_add_pd(vc, _mm256_add_pd(_mm256_sub_pd(big, t), small));
        vs = t;
    }
    double s[4], c[4];
    _mm256_storeu_pd(s, vs);
    _mm256_storeu_pd(c, vc);
    for (std::size_t j = 0; n4 + j < n; ++j) neumaier_update(s[j], c[j], x[n4 + j]);
    double ts = (s[0] + s[1]) + (s[2] + s[3]);
    double tc = (c[0] + c[1]) + (c[2] + c[3]);
    return ts + tc;
}

float wsum_u8_f32_impl(const std::uint8_t* counts, const float* rows, std::size_t n) {
    __m256 acc = _mm256_setzero_ps();
    std::size_t n8 = n - n % 8;
    for (std::size_t i = 0; i < n8; i += 8) {
        __m128i bytes = _mm_loadl_epi64(reinterpret_cast<const __m128i*>(counts + i));
        __m256 cnt = _mm256_cvtepi32_ps(_mm256_cvtepu8_epi32(bytes));
        acc = _mm256_fmadd_ps(cnt, _mm256_loadu_ps(rows + i), acc);
    }
    float a[8];
    _mm256_storeu_ps(a, acc);
    for (std::size_t j = 0; n8 + j < n; ++j)
        a[j] = std::fmaf(static_cast<float>(counts[n8 + j]), rows[n8 + j], a[j]);
    return ((a[0] + a[1]) + (a[2] + a[3])) + ((a[4] + a[5]) + (a[6] + a[7]));
}

} // namespace

extern const Ops kAvx2Ops = {"avx2", &sum_comp_f64_impl, &wsum_u8_f32_impl};

} // namespace powmix::kernels
