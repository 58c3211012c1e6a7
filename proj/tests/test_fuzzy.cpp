#include <doctest.h>

#include <random>

#include "semdistill/errors.hpp"
#include "semdistill/fuzzy.hpp"

using namespace semdistill;

namespace {

Representation points_1d(const std::vector<double>& xs) {
    Representation r;
    r.coords.resize(static_cast<Eigen::Index>(xs.size()), 1);
    for (std::size_t i = 0; i < xs.size(); ++i) r.coords(static_cast<Eigen::Index>(i), 0) = xs[i];
    return r;
}

Representation points_2d(const std::vector<std::pair<double, double>>& ps) {
    Representation r;
    r.coords.resize(static_cast<Eigen::Index>(ps.size()), 2);
    for (std::size_t i = 0; i < ps.size(); ++i) {
        r.coords(static_cast<Eigen::Index>(i), 0) = ps[i].first;
        r.coords(static_cast<Eigen::Index>(i), 1) = ps[i].second;
    }
    return r;
}

}  // namespace

TEST_CASE("seed_centroids picks the farthest pair") {
    CHECK(seed_centroids(points_1d({0.0, 1.0, 5.0})) == std::pair<std::size_t, std::size_t>{0, 2});
    CHECK(seed_centroids(points_1d({3.0, -1.0})) == std::pair<std::size_t, std::size_t>{0, 1});
    // Unit square: both diagonals tie; the lexicographically first pair wins.
    CHECK(seed_centroids(points_2d({{0, 0}, {1, 0}, {0, 1}, {1, 1}})) ==
          std::pair<std::size_t, std::size_t>{0, 3});
    CHECK_THROWS_AS(seed_centroids(points_1d({1.0})), ValidationError);
}

TEST_CASE("membership examples: symmetry, singleton, closed form") {
    FcmConfig config;  // p = 2

    // Equidistant vertex: memberships (0.5, 0.5). Seeds at -1 and 1, the
    // middle point sits at 0; with only symmetric points the centroids stay
    // symmetric too.
    {
        const Representation r = points_1d({-1.0, 0.0, 1.0});
        const FuzzyMembership fm = fuzzy_two_means(r, {0, 2}, config);
        CHECK(fm.m(1, 1) == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(fm.m(1, 2) == doctest::Approx(0.5).epsilon(1e-9));
    }

    // A vertex coinciding with a centroid gets the singleton membership.
    {
        const Representation r = points_1d({0.0, 4.0});
        FcmConfig one;
        one.max_iter = 1;
        const FuzzyMembership fm = fuzzy_two_means(r, {0, 1}, one);
        CHECK(fm.m(0, 1) == 1.0);
        CHECK(fm.m(0, 2) == 0.0);
        CHECK(fm.m(1, 2) == 1.0);
    }

    // p = 2, distances (1, 2): m1 = 1/(1 + (1/2)^2) = 0.8. One update step
    // from centroids at 0 and 3 for a point at 1.
    {
        const Representation r = points_1d({0.0, 3.0, 1.0});
        FcmConfig one;
        one.max_iter = 1;
        const FuzzyMembership fm = fuzzy_two_means(r, {0, 1}, one);
        CHECK(fm.m(2, 1) == doctest::Approx(0.8).epsilon(1e-12));
        CHECK(fm.m(2, 2) == doctest::Approx(0.2).epsilon(1e-12));
    }
}

TEST_CASE("membership rows sum to 1 and the objective is nonincreasing") {
    std::mt19937_64 rng(89);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 5 + trial % 20;
        const std::size_t dim = 1 + trial % 2;
        Representation r;
        r.coords.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
        for (Eigen::Index i = 0; i < r.coords.rows(); ++i)
            for (Eigen::Index j = 0; j < r.coords.cols(); ++j) r.coords(i, j) = gauss(rng);

        FcmConfig config;
        config.fuzzifier = 1.5 + 0.25 * (trial % 5);
        const auto seeds = seed_centroids(r);
        const FuzzyMembership fm = fuzzy_two_means(r, seeds, config);

        for (Eigen::Index v = 0; v < r.coords.rows(); ++v)
            CHECK(fm.membership(v, 0) + fm.membership(v, 1) == doctest::Approx(1.0).epsilon(1e-9));

        REQUIRE(!fm.objective_trace.empty());
        for (std::size_t t = 1; t < fm.objective_trace.size(); ++t)
            CHECK(fm.objective_trace[t] <=
                  fm.objective_trace[t - 1] * (1.0 + 1e-12) + 1e-15);
    }
}

TEST_CASE("swapping the seeds swaps the memberships exactly") {
    std::mt19937_64 rng(97);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Representation r;
    r.coords.resize(12, 2);
    for (Eigen::Index i = 0; i < 12; ++i)
        for (Eigen::Index j = 0; j < 2; ++j) r.coords(i, j) = gauss(rng);

    FcmConfig config;
    const FuzzyMembership a = fuzzy_two_means(r, {0, 5}, config);
    const FuzzyMembership b = fuzzy_two_means(r, {5, 0}, config);
    for (Eigen::Index v = 0; v < 12; ++v) {
        CHECK(a.membership(v, 0) == b.membership(v, 1));
        CHECK(a.membership(v, 1) == b.membership(v, 0));
    }
}

TEST_CASE("determinism: identical inputs give bit-identical memberships") {
    std::mt19937_64 rng(101);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Representation r;
    r.coords.resize(20, 1);
    for (Eigen::Index i = 0; i < 20; ++i) r.coords(i, 0) = gauss(rng);
    FcmConfig config;
    const auto seeds = seed_centroids(r);
    const FuzzyMembership a = fuzzy_two_means(r, seeds, config);
    const FuzzyMembership b = fuzzy_two_means(r, seeds, config);
    CHECK(a.membership == b.membership);
    CHECK(a.objective_trace == b.objective_trace);
}

TEST_CASE("well-separated blobs are recovered exactly by majority membership") {
    std::mt19937_64 rng(103);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Representation r;
    const std::size_t per_blob = 25;
    r.coords.resize(2 * per_blob, 2);
    for (std::size_t i = 0; i < per_blob; ++i) {
        r.coords(static_cast<Eigen::Index>(i), 0) = gauss(rng);
        r.coords(static_cast<Eigen::Index>(i), 1) = gauss(rng);
        r.coords(static_cast<Eigen::Index>(per_blob + i), 0) = 12.0 + gauss(rng);  // >= 6 sd apart
        r.coords(static_cast<Eigen::Index>(per_blob + i), 1) = 12.0 + gauss(rng);
    }
    FcmConfig config;
    const auto seeds = seed_centroids(r);
    const FuzzyMembership fm = fuzzy_two_means(r, seeds, config);
    CHECK(fm.converged);

    // All of blob 0 on one side, all of blob 1 on the other.
    const bool blob0_in_1 = fm.m(0, 1) > fm.m(0, 2);
    for (std::size_t i = 0; i < per_blob; ++i) {
        CHECK((fm.m(i, 1) > fm.m(i, 2)) == blob0_in_1);
        CHECK((fm.m(per_blob + i, 1) > fm.m(per_blob + i, 2)) == !blob0_in_1);
    }
}

TEST_CASE("split_attributes applies the strict majority rule") {
    FuzzyMembership fm;
    fm.membership.resize(4, 2);
    fm.membership << 0.9, 0.1,  // doc (ignored by the split)
        0.9, 0.1,               // a -> left
        0.2, 0.8,               // b -> right
        0.5, 0.5;               // c -> right (strict inequality)
    const AttributeSplit s = split_attributes(fm, {"a", "b", "c"}, 1);
    CHECK(s.left == std::vector<std::string>{"a"});
    CHECK(s.right == std::vector<std::string>{"b", "c"});
    CHECK_FALSE(s.repaired);
}

TEST_CASE("split repair moves the weakest attribute to the empty side") {
    FuzzyMembership fm;
    fm.membership.resize(3, 2);
    fm.membership << 0.9, 0.1,  // strongly left
        0.7, 0.3,               // left
        0.55, 0.45;             // weakest left majority -> moved right
    const AttributeSplit s = split_attributes(fm, {"a", "b", "c"}, 0);
    CHECK(s.repaired);
    CHECK(s.left == std::vector<std::string>{"a", "b"});
    CHECK(s.right == std::vector<std::string>{"c"});

    FuzzyMembership fm2;
    fm2.membership.resize(2, 2);
    fm2.membership << 0.1, 0.9, 0.45, 0.55;
    const AttributeSplit s2 = split_attributes(fm2, {"a", "b"}, 0);
    CHECK(s2.repaired);
    CHECK(s2.left == std::vector<std::string>{"b"});  // weakest right majority
    CHECK(s2.right == std::vector<std::string>{"a"});
}

TEST_CASE("config validation") {
    const Representation r = points_1d({0.0, 1.0});
    FcmConfig bad;
    bad.fuzzifier = 1.0;
    CHECK_THROWS_AS(fuzzy_two_means(r, {0, 1}, bad), ValidationError);
    bad = FcmConfig{};
    bad.tol = 0.0;
    CHECK_THROWS_AS(fuzzy_two_means(r, {0, 1}, bad), ValidationError);
    bad = FcmConfig{};
    bad.max_iter = 0;
    CHECK_THROWS_AS(fuzzy_two_means(r, {0, 1}, bad), ValidationError);
    CHECK_THROWS_AS(fuzzy_two_means(r, {1, 1}, FcmConfig{}), ValidationError);
}
