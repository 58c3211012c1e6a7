#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "semdistill/kernels.hpp"

using namespace semdistill;

namespace {

// RAII backend pin so other tests keep the auto-selected one.
struct BackendGuard {
    kernels::Backend saved = kernels::active_backend();
    ~BackendGuard() { kernels::set_backend(saved); }
};

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

}  // namespace

TEST_CASE("scalar kernels: exact small cases") {
    const std::vector<double> a{1.0, 2.0, 3.0};
    const std::vector<double> b{4.0, -5.0, 6.0};
    CHECK(kernels::detail::dot_scalar(a.data(), b.data(), 3) == doctest::Approx(12.0));
    CHECK(kernels::detail::squared_distance_scalar(a.data(), b.data(), 3) ==
          doctest::Approx(9.0 + 49.0 + 9.0));
    CHECK(kernels::detail::sum_scalar(b.data(), 3) == doctest::Approx(5.0));
    CHECK(kernels::detail::dot_scalar(a.data(), b.data(), 0) == 0.0);
}

TEST_CASE("avx2 variants match scalar across lengths, including tails") {
    if (!kernels::backend_supported(kernels::Backend::Avx2)) {
        MESSAGE("AVX2 not available; skipping equivalence checks");
        return;
    }
    std::mt19937_64 rng(12345);
    for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u, 31u,
                          32u, 33u, 100u, 257u}) {
        const auto a = random_vec(rng, n);
        const auto b = random_vec(rng, n);

        double mag = 1.0;
        for (std::size_t i = 0; i < n; ++i) mag += std::abs(a[i] * b[i]);

        CHECK(std::abs(kernels::detail::dot_avx2(a.data(), b.data(), n) -
                       kernels::detail::dot_scalar(a.data(), b.data(), n)) <= 1e-12 * mag);
        CHECK(std::abs(kernels::detail::squared_distance_avx2(a.data(), b.data(), n) -
                       kernels::detail::squared_distance_scalar(a.data(), b.data(), n)) <=
              1e-12 * mag);
        CHECK(std::abs(kernels::detail::sum_avx2(a.data(), n) -
                       kernels::detail::sum_scalar(a.data(), n)) <= 1e-12 * mag);

        auto sa = a;
        auto sb = a;
        kernels::detail::scale_scalar(sa.data(), 0.37, n);
        kernels::detail::scale_avx2(sb.data(), 0.37, n);
        for (std::size_t i = 0; i < n; ++i) CHECK(sa[i] == sb[i]);  // same single multiply
    }
}

TEST_CASE("dispatch respects the pinned backend") {
    BackendGuard guard;
    const std::vector<double> a{1.0, 2.0, 3.0, 4.0, 5.0};

    kernels::set_backend(kernels::Backend::Scalar);
    CHECK(kernels::active_backend() == kernels::Backend::Scalar);
    const double s = kernels::sum({a.data(), a.size()});
    CHECK(s == doctest::Approx(15.0));

    if (kernels::backend_supported(kernels::Backend::Avx2)) {
        kernels::set_backend(kernels::Backend::Avx2);
        CHECK(kernels::active_backend() == kernels::Backend::Avx2);
        CHECK(kernels::sum({a.data(), a.size()}) == doctest::Approx(15.0));
    }
}

TEST_CASE("a backend is bit-deterministic across repeated calls") {
    std::mt19937_64 rng(99);
    const auto a = random_vec(rng, 53);
    const auto b = random_vec(rng, 53);
    const double first = kernels::dot({a.data(), a.size()}, {b.data(), b.size()});
    for (int i = 0; i < 10; ++i)
        CHECK(kernels::dot({a.data(), a.size()}, {b.data(), b.size()}) == first);
}
