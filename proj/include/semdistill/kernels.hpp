#pragma once

#include <cstddef>
#include <span>
#include <string>

// Low-level dense arithmetic used by the ray / similarity-matrix code paths.
// Every operation has a scalar reference implementation and, on x86-64 with
// AVX2+FMA, a vectorised variant. The backend is picked once at startup from
// CPU capabilities; tests pin it explicitly to compare the two for
// equivalence. All variants preserve the left-to-right accumulation order
// within each SIMD lane, so a given backend is bit-deterministic run to run.

namespace semdistill::kernels {

enum class Backend { Scalar, Avx2 };

/// Backend currently used by the dispatching entry points below.
Backend active_backend();

/// True if `b` can run on this machine.
bool backend_supported(Backend b);

/// Pin the backend (tests, benchmarking). Throws ValidationError when the
/// requested backend is not supported by the CPU.
void set_backend(Backend b);

std::string backend_name(Backend b);

// Dispatching entry points. Spans must have equal length where two are taken.
double dot(std::span<const double> a, std::span<const double> b);
double squared_distance(std::span<const double> a, std::span<const double> b);
double sum(std::span<const double> a);
void scale(std::span<double> a, double factor);

namespace detail {
// Raw variants, exposed for the equivalence tests.
double dot_scalar(const double* a, const double* b, std::size_t n);
double squared_distance_scalar(const double* a, const double* b, std::size_t n);
double sum_scalar(const double* a, std::size_t n);
void scale_scalar(double* a, double factor, std::size_t n);

double dot_avx2(const double* a, const double* b, std::size_t n);
double squared_distance_avx2(const double* a, const double* b, std::size_t n);
double sum_avx2(const double* a, std::size_t n);
void scale_avx2(double* a, double factor, std::size_t n);
}  // namespace detail

}  // namespace semdistill::kernels
