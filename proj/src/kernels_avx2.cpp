// SPDX-License-Identifier: Apache-2.0
//
// AVX2+FMA kernels. A __m256d lane pair holds two std::complex<double>
// values as [re0, im0, re1, im1]; this matches the guaranteed layout of
// std::complex. This translation unit is compiled with -mavx2 -mfma and
// is only entered after the dispatcher has checked CPU support.

#include <immintrin.h>

#include <cassert>
#include <span>

#include "wpt/common.hpp"
#include "wpt/kernels.hpp"

namespace wpt::kernels::detail {

namespace {

const double* as_doubles(const cdouble* p) { return reinterpret_cast<const double*>(p); }
double* as_doubles(cdouble* p) { return reinterpret_cast<double*>(p); }

double sum_lanes(__m256d v) {
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, v);
    return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

double sum_lanes_alternating(__m256d v) {
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, v);
    return (lanes[0] - lanes[1]) + (lanes[2] - lanes[3]);
}

}  // namespace

cdouble dot_conj_avx2(std::span<const cdouble> a, std::span<const cdouble> b) {
    assert(a.size() == b.size());
    const double* pa = as_doubles(a.data());
    const double* pb = as_doubles(b.data());
    const std::size_t n = a.size();

    __m256d re0 = _mm256_setzero_pd();
    __m256d re1 = _mm256_setzero_pd();
    __m256d im0 = _mm256_setzero_pd();
    __m256d im1 = _mm256_setzero_pd();

    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d va0 = _mm256_loadu_pd(pa + 2 * i);
        const __m256d vb0 = _mm256_loadu_pd(pb + 2 * i);
        const __m256d va1 = _mm256_loadu_pd(pa + 2 * i + 4);
        const __m256d vb1 = _mm256_loadu_pd(pb + 2 * i + 4);
        re0 = _mm256_fmadd_pd(va0, vb0, re0);
        re1 = _mm256_fmadd_pd(va1, vb1, re1);
        im0 = _mm256_fmadd_pd(va0, _mm256_permute_pd(vb0, 0b0101), im0);
        im1 = _mm256_fmadd_pd(va1, _mm256_permute_pd(vb1, 0b0101), im1);
    }
    for (; i + 2 <= n; i += 2) {
        const __m256d va = _mm256_loadu_pd(pa + 2 * i);
        const __m256d vb = _mm256_loadu_pd(pb + 2 * i);
        re0 = _mm256_fmadd_pd(va, vb, re0);
        im0 = _mm256_fmadd_pd(va, _mm256_permute_pd(vb, 0b0101), im0);
    }

    double re = sum_lanes(re0) + sum_lanes(re1);
    double im = sum_lanes_alternating(im0) + sum_lanes_alternating(im1);
    for (; i < n; ++i) {
        const double ar = a[i].real();
        const double ai = a[i].imag();
        re += ar * b[i].real() + ai * b[i].imag();
        im += ar * b[i].imag() - ai * b[i].real();
    }
    return {re, im};
}

double sum_abs2_avx2(std::span<const cdouble> a) {
    const double* pa = as_doubles(a.data());
    const std::size_t n = a.size();

    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();

    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v0 = _mm256_loadu_pd(pa + 2 * i);
        const __m256d v1 = _mm256_loadu_pd(pa + 2 * i + 4);
        acc0 = _mm256_fmadd_pd(v0, v0, acc0);
        acc1 = _mm256_fmadd_pd(v1, v1, acc1);
    }
    for (; i + 2 <= n; i += 2) {
        const __m256d v = _mm256_loadu_pd(pa + 2 * i);
        acc0 = _mm256_fmadd_pd(v, v, acc0);
    }

    double acc = sum_lanes(acc0) + sum_lanes(acc1);
    for (; i < n; ++i) {
        acc += a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
    }
    return acc;
}

void add_scaled_conj_avx2(std::span<cdouble> acc, std::span<const cdouble> v, double scale) {
    assert(acc.size() == v.size());
    double* pacc = as_doubles(acc.data());
    const double* pv = as_doubles(v.data());
    const std::size_t n = v.size();
    const __m256d vs = _mm256_setr_pd(scale, -scale, scale, -scale);

    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d cur = _mm256_loadu_pd(pacc + 2 * i);
        const __m256d src = _mm256_loadu_pd(pv + 2 * i);
        _mm256_storeu_pd(pacc + 2 * i, _mm256_fmadd_pd(src, vs, cur));
    }
    for (; i < n; ++i) {
        acc[i] += cdouble{scale * v[i].real(), -scale * v[i].imag()};
    }
}

void scale_conj_avx2(std::span<cdouble> out, std::span<const cdouble> v, double scale) {
    assert(out.size() == v.size());
    double* pout = as_doubles(out.data());
    const double* pv = as_doubles(v.data());
    const std::size_t n = v.size();
    const __m256d vs = _mm256_setr_pd(scale, -scale, scale, -scale);

    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d src = _mm256_loadu_pd(pv + 2 * i);
        _mm256_storeu_pd(pout + 2 * i, _mm256_mul_pd(src, vs));
    }
    for (; i < n; ++i) {
        out[i] = cdouble{scale * v[i].real(), -scale * v[i].imag()};
    }
}

}  // namespace wpt::kernels::detail
