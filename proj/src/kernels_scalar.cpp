// SPDX-License-Identifier: Apache-2.0
//
// Reference kernels. Straightforward loops over std::complex<double>;
// every other backend must match these bit-for-bit up to reassociation
// of the reduction order.

#include <cassert>
#include <span>

#include "wpt/common.hpp"
#include "wpt/kernels.hpp"

namespace wpt::kernels::detail {

cdouble dot_conj_scalar(std::span<const cdouble> a, std::span<const cdouble> b) {
    assert(a.size() == b.size());
    double re = 0.0;
    double im = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double ar = a[i].real();
        const double ai = a[i].imag();
        const double br = b[i].real();
        const double bi = b[i].imag();
        re += ar * br + ai * bi;
        im += ar * bi - ai * br;
    }
    return {re, im};
}

double sum_abs2_scalar(std::span<const cdouble> a) {
    double acc = 0.0;
    for (const cdouble& v : a) {
        acc += v.real() * v.real() + v.imag() * v.imag();
    }
    return acc;
}

void add_scaled_conj_scalar(std::span<cdouble> acc, std::span<const cdouble> v, double scale) {
    assert(acc.size() == v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        acc[i] += cdouble{scale * v[i].real(), -scale * v[i].imag()};
    }
}

void scale_conj_scalar(std::span<cdouble> out, std::span<const cdouble> v, double scale) {
    assert(out.size() == v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = cdouble{scale * v[i].real(), -scale * v[i].imag()};
    }
}

}  // namespace wpt::kernels::detail
