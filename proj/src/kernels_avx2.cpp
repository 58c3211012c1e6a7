#include "semdistill/kernels.hpp"

#include <stdexcept>

#if defined(__x86_64__) && defined(__GNUC__)
#define SEMDISTILL_HAVE_AVX2_TARGET 1
#include <immintrin.h>
#else
#define SEMDISTILL_HAVE_AVX2_TARGET 0
#endif

namespace semdistill::kernels::detail {

#if SEMDISTILL_HAVE_AVX2_TARGET

namespace {

__attribute__((target("avx2,fma"))) inline double hsum_pd(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d swapped = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

}  // namespace

__attribute__((target("avx2,fma"))) double dot_avx2(const double* a, const double* b,
                                                    std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d va = _mm256_loadu_pd(a + i);
        const __m256d vb = _mm256_loadu_pd(b + i);
        acc = _mm256_fmadd_pd(va, vb, acc);
    }
    double total = hsum_pd(acc);
    for (; i < n; ++i) total += a[i] * b[i];
    return total;
}

__attribute__((target("avx2,fma"))) double squared_distance_avx2(const double* a,
                                                                 const double* b,
                                                                 std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d va = _mm256_loadu_pd(a + i);
        const __m256d vb = _mm256_loadu_pd(b + i);
        const __m256d d = _mm256_sub_pd(va, vb);
        acc = _mm256_fmadd_pd(d, d, acc);
    }
    double total = hsum_pd(acc);
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        total += d * d;
    }
    return total;
}

__attribute__((target("avx2,fma"))) double sum_avx2(const double* a, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
    double total = hsum_pd(acc);
    for (; i < n; ++i) total += a[i];
    return total;
}

__attribute__((target("avx2,fma"))) void scale_avx2(double* a, double factor,
                                                    std::size_t n) {
    const __m256d vf = _mm256_set1_pd(factor);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(a + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), vf));
    for (; i < n; ++i) a[i] *= factor;
}

#else

double dot_avx2(const double*, const double*, std::size_t) {
    throw std::runtime_error("AVX2 backend not compiled in");
}
double squared_distance_avx2(const double*, const double*, std::size_t) {
    throw std::runtime_error("AVX2 backend not compiled in");
}
double sum_avx2(const double*, std::size_t) {
    throw std::runtime_error("AVX2 backend not compiled in");
}
void scale_avx2(double*, double, std::size_t) {
    throw std::runtime_error("AVX2 backend not compiled in");
}

#endif

}  // namespace semdistill::kernels::detail
