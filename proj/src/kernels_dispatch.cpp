// SPDX-License-Identifier: Apache-2.0
//
// Runtime backend selection. This translation unit is compiled without
// vector ISA flags; it probes the CPU once and routes every kernel call
// through a function table.

#include <atomic>
#include <cstdlib>
#include <mutex>
#include <span>
#include <string>

#include "wpt/common.hpp"
#include "wpt/kernels.hpp"

namespace wpt::kernels {

namespace detail {

cdouble dot_conj_scalar(std::span<const cdouble> a, std::span<const cdouble> b);
double sum_abs2_scalar(std::span<const cdouble> a);
void add_scaled_conj_scalar(std::span<cdouble> acc, std::span<const cdouble> v, double scale);
void scale_conj_scalar(std::span<cdouble> out, std::span<const cdouble> v, double scale);

cdouble dot_conj_avx2(std::span<const cdouble> a, std::span<const cdouble> b);
double sum_abs2_avx2(std::span<const cdouble> a);
void add_scaled_conj_avx2(std::span<cdouble> acc, std::span<const cdouble> v, double scale);
void scale_conj_avx2(std::span<cdouble> out, std::span<const cdouble> v, double scale);

}  // namespace detail

namespace {

struct KernelTable {
    cdouble (*dot_conj)(std::span<const cdouble>, std::span<const cdouble>);
    double (*sum_abs2)(std::span<const cdouble>);
    void (*add_scaled_conj)(std::span<cdouble>, std::span<const cdouble>, double);
    void (*scale_conj)(std::span<cdouble>, std::span<const cdouble>, double);
};

constexpr KernelTable kScalarTable{detail::dot_conj_scalar, detail::sum_abs2_scalar,
                                   detail::add_scaled_conj_scalar, detail::scale_conj_scalar};
constexpr KernelTable kAvx2Table{detail::dot_conj_avx2, detail::sum_abs2_avx2,
                                 detail::add_scaled_conj_avx2, detail::scale_conj_avx2};

bool cpu_has_avx2_fma() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const KernelTable& table_for(Backend backend) {
    return backend == Backend::avx2 ? kAvx2Table : kScalarTable;
}

std::atomic<Backend> g_active{Backend::scalar};
std::once_flag g_init_flag;

Backend pick_default_backend() {
    if (const char* env = std::getenv("WPTSIM_KERNEL_BACKEND")) {
        const std::string name(env);
        if (name == "scalar") {
            return Backend::scalar;
        }
        if (name == "avx2") {
            if (!backend_available(Backend::avx2)) {
                throw ValidationError(
                    "WPTSIM_KERNEL_BACKEND=avx2 but this CPU lacks AVX2/FMA support");
            }
            return Backend::avx2;
        }
        throw ValidationError("unknown WPTSIM_KERNEL_BACKEND value: " + name);
    }
    return backend_available(Backend::avx2) ? Backend::avx2 : Backend::scalar;
}

void ensure_initialized() {
    std::call_once(g_init_flag, [] { g_active.store(pick_default_backend()); });
}

}  // namespace

const char* backend_name(Backend backend) {
    return backend == Backend::avx2 ? "avx2" : "scalar";
}

bool backend_available(Backend backend) {
    if (backend == Backend::scalar) {
        return true;
    }
    static const bool has_avx2 = cpu_has_avx2_fma();
    return has_avx2;
}

Backend active_backend() {
    ensure_initialized();
    return g_active.load();
}

void set_active_backend(Backend backend) {
    if (!backend_available(backend)) {
        throw ValidationError(std::string("kernel backend unavailable on this CPU: ") +
                              backend_name(backend));
    }
    ensure_initialized();
    g_active.store(backend);
}

cdouble dot_conj(std::span<const cdouble> a, std::span<const cdouble> b) {
    return table_for(active_backend()).dot_conj(a, b);
}

double sum_abs2(std::span<const cdouble> a) { return table_for(active_backend()).sum_abs2(a); }

void add_scaled_conj(std::span<cdouble> acc, std::span<const cdouble> v, double scale) {
    table_for(active_backend()).add_scaled_conj(acc, v, scale);
}

void scale_conj(std::span<cdouble> out, std::span<const cdouble> v, double scale) {
    table_for(active_backend()).scale_conj(out, v, scale);
}

cdouble dot_conj(Backend backend, std::span<const cdouble> a, std::span<const cdouble> b) {
    return table_for(backend).dot_conj(a, b);
}

double sum_abs2(Backend backend, std::span<const cdouble> a) {
    return table_for(backend).sum_abs2(a);
}

void add_scaled_conj(Backend backend, std::span<cdouble> acc, std::span<const cdouble> v,
                     double scale) {
    table_for(backend).add_scaled_conj(acc, v, scale);
}

void scale_conj(Backend backend, std::span<cdouble> out, std::span<const cdouble> v,
                double scale) {
    table_for(backend).scale_conj(out, v, scale);
}

}  // namespace wpt::kernels
