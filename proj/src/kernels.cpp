#include "semdistill/kernels.hpp"

#include <atomic>
#include <cassert>

#include "semdistill/errors.hpp"

namespace semdistill::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) && defined(__GNUC__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Backend detect_backend() { return cpu_has_avx2() ? Backend::Avx2 : Backend::Scalar; }

std::atomic<Backend> g_backend{detect_backend()};

}  // namespace

Backend active_backend() { return g_backend.load(std::memory_order_relaxed); }

bool backend_supported(Backend b) {
    return b == Backend::Scalar || (b == Backend::Avx2 && cpu_has_avx2());
}

void set_backend(Backend b) {
    if (!backend_supported(b))
        throw ValidationError("kernel backend '" + backend_name(b) +
                              "' is not supported on this CPU");
    g_backend.store(b, std::memory_order_relaxed);
}

std::string backend_name(Backend b) {
    switch (b) {
        case Backend::Scalar: return "scalar";
        case Backend::Avx2: return "avx2";
    }
    return "unknown";
}

double dot(std::span<const double> a, std::span<const double> b) {
    assert(a.size() == b.size());
    if (active_backend() == Backend::Avx2)
        return detail::dot_avx2(a.data(), b.data(), a.size());
    return detail::dot_scalar(a.data(), b.data(), a.size());
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    assert(a.size() == b.size());
    if (active_backend() == Backend::Avx2)
        return detail::squared_distance_avx2(a.data(), b.data(), a.size());
    return detail::squared_distance_scalar(a.data(), b.data(), a.size());
}

double sum(std::span<const double> a) {
    if (active_backend() == Backend::Avx2) return detail::sum_avx2(a.data(), a.size());
    return detail::sum_scalar(a.data(), a.size());
}

void scale(std::span<double> a, double factor) {
    if (active_backend() == Backend::Avx2) {
        detail::scale_avx2(a.data(), factor, a.size());
        return;
    }
    detail::scale_scalar(a.data(), factor, a.size());
}

}  // namespace semdistill::kernels
