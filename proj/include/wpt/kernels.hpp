// SPDX-License-Identifier: Apache-2.0
//
// Complex-vector kernels behind the link-level math: conjugated inner
// products, squared norms and weighted conjugate accumulation over the
// M_t-length antenna arrays. A scalar reference implementation always
// exists; an AVX2+FMA variant is selected at runtime when the CPU supports
// it. Both are exposed per-backend so equivalence tests can compare them.
#pragma once

#include <span>

#include "wpt/common.hpp"

namespace wpt::kernels {

enum class Backend { scalar, avx2 };

const char* backend_name(Backend backend);

/// True when the backend can run on this machine (scalar always can).
bool backend_available(Backend backend);

/// Currently selected backend. Resolved once on first use: the
/// WPTSIM_KERNEL_BACKEND environment variable ("scalar" or "avx2") wins,
/// otherwise the widest available backend is picked.
Backend active_backend();

/// Overrides the active backend (tests, reproducibility pinning).
/// Throws ValidationError when the backend is unavailable on this CPU.
void set_active_backend(Backend backend);

// Dispatched entry points (run on the active backend).

/// Conjugate-transpose inner product: sum_i conj(a[i]) * b[i].
cdouble dot_conj(std::span<const cdouble> a, std::span<const cdouble> b);

/// Squared Euclidean norm: sum_i |a[i]|^2.
double sum_abs2(std::span<const cdouble> a);

/// acc[i] += scale * conj(v[i]); scale is real.
void add_scaled_conj(std::span<cdouble> acc, std::span<const cdouble> v, double scale);

/// out[i] = scale * conj(v[i]); scale is real.
void scale_conj(std::span<cdouble> out, std::span<const cdouble> v, double scale);

// Per-backend variants for equivalence testing.
cdouble dot_conj(Backend backend, std::span<const cdouble> a, std::span<const cdouble> b);
double sum_abs2(Backend backend, std::span<const cdouble> a);
void add_scaled_conj(Backend backend, std::span<cdouble> acc, std::span<const cdouble> v,
                     double scale);
void scale_conj(Backend backend, std::span<cdouble> out, std::span<const cdouble> v,
                double scale);

}  // namespace wpt::kernels
