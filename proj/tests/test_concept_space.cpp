#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "semdistill/concept_space.hpp"
#include "semdistill/errors.hpp"

using namespace semdistill;

namespace {

Dataset tiny() {
    return Dataset({"a", "b", "c"}, {"x", "y"}, {1, 0, 0, 1, 1, 1});
}

Dataset random_dataset(std::mt19937_64& rng, std::size_t docs, std::size_t attrs,
                       bool nonneg = false) {
    std::uniform_real_distribution<double> u(nonneg ? 0.05 : -5.0, 5.0);
    std::vector<double> values(docs * attrs);
    for (auto& v : values) v = u(rng);
    std::vector<std::string> ds, as;
    for (std::size_t i = 0; i < docs; ++i) ds.push_back("d" + std::to_string(i));
    for (std::size_t i = 0; i < attrs; ++i) as.push_back("a" + std::to_string(i));
    return Dataset(ds, as, values);
}

}  // namespace

TEST_CASE("build_space normalizes rows to rays") {
    const Dataset d({"p"}, {"x", "y"}, {3, 4});
    const ConceptSpace s = build_space(d, {"x", "y"});
    REQUIRE(s.document_rays().size() == 1);
    CHECK(s.document_rays()[0].coords[0] == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(s.document_rays()[0].coords[1] == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(s.witness_ray(0).coords == std::vector<double>{1.0, 0.0});
    CHECK(s.witness_ray(1).coords == std::vector<double>{0.0, 1.0});
    CHECK(s.n_vertices() == 3);
}

TEST_CASE("zero projection drops the document") {
    const Dataset d({"p", "q"}, {"x", "y"}, {1, 0, 1, 1});
    const ConceptSpace s = build_space(d, {"y"});
    CHECK(s.dropped_documents() == std::vector<std::string>{"p"});
    CHECK(s.document_ids() == std::vector<std::string>{"q"});
    CHECK(s.document_rays()[0].coords == std::vector<double>{1.0});
}

TEST_CASE("full subset equals plain normalization") {
    std::mt19937_64 rng(3);
    const Dataset d = random_dataset(rng, 6, 4);
    const ConceptSpace s = build_space(d, d.attributes());
    for (std::size_t i = 0; i < 6; ++i) {
        const auto row = d.row(i);
        double norm = 0.0;
        for (double v : row) norm += v * v;
        norm = std::sqrt(norm);
        for (std::size_t j = 0; j < 4; ++j)
            CHECK(s.document_rays()[i].coords[j] == doctest::Approx(row[j] / norm).epsilon(1e-12));
    }
}

TEST_CASE("build_space validates the subset") {
    const Dataset d = tiny();
    CHECK_THROWS_AS(build_space(d, {}), ValidationError);
    CHECK_THROWS_AS(build_space(d, {"nope"}), ValidationError);
    CHECK_THROWS_AS(build_space(d, {"x", "x"}), ValidationError);
}

TEST_CASE("subset order is canonicalized to dataset column order") {
    const Dataset d = tiny();
    const ConceptSpace s = build_space(d, {"y", "x"});
    CHECK(s.attribute_subset() == std::vector<std::string>{"x", "y"});
}

TEST_CASE("pseudo_distance: identical, orthogonal, and the 45-degree case") {
    const Ray e1{{1.0, 0.0}};
    const Ray e2{{0.0, 1.0}};
    const Ray diag = Ray::normalized({1.0, 1.0});
    CHECK(pseudo_distance(e1, e1) == 0.0);
    CHECK(pseudo_distance(e1, e2) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    // sqrt(2 - sqrt(2)) = 0.76536686...
    CHECK(pseudo_distance(diag, e1) == doctest::Approx(0.7653668647301795).epsilon(1e-12));
    CHECK_THROWS_AS(pseudo_distance(e1, Ray{{1.0, 0.0, 0.0}}), ValidationError);
}

TEST_CASE("pseudo_distance is a pseudo-metric on random triples") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t dim = 2 + trial % 5;
        auto make_ray = [&] {
            std::vector<double> v(dim);
            double norm2 = 0.0;
            do {
                norm2 = 0.0;
                for (auto& x : v) {
                    x = u(rng);
                    norm2 += x * x;
                }
            } while (norm2 < 1e-4);
            return Ray::normalized(std::move(v));
        };
        const Ray p = make_ray(), q = make_ray(), r = make_ray();
        CHECK(pseudo_distance(p, q) == pseudo_distance(q, p));
        CHECK(pseudo_distance(p, p) == 0.0);
        CHECK(pseudo_distance(p, r) <= pseudo_distance(p, q) + pseudo_distance(q, r) + 1e-9);
        CHECK(pseudo_distance(p, q) <= 2.0 + 1e-12);
    }
}

TEST_CASE("proportional rows give identical rays") {
    const Dataset d({"p", "q"}, {"x", "y", "z"}, {1, 2, 3, 10, 20, 30});
    const ConceptSpace s = build_space(d, d.attributes());
    CHECK(pseudo_distance(s.document_rays()[0], s.document_rays()[1]) ==
          doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("relevance probabilities are squared coordinates summing to 1") {
    const Dataset d({"p"}, {"x", "y"}, {3, 4});
    const ConceptSpace s = build_space(d, {"x", "y"});
    const Ray& ray = s.document_rays()[0];
    CHECK(s.relevance_probability(ray, "x") == doctest::Approx(0.36).epsilon(1e-12));
    CHECK(s.relevance_probability(ray, "y") == doctest::Approx(0.64).epsilon(1e-12));
    CHECK(s.relevance_probability(s.witness_ray(0), "x") == 1.0);
    CHECK_THROWS_AS(s.relevance_probability(ray, "z"), ValidationError);

    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        const Dataset rd = random_dataset(rng, 10, 3 + trial % 6);
        const ConceptSpace rs = build_space(rd, rd.attributes());
        for (const Ray& r : rs.document_rays()) {
            double total = 0.0;
            for (const auto& attr : rs.attribute_subset())
                total += rs.relevance_probability(r, attr);
            CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("projection consistency: restricting a space matches direct build") {
    std::mt19937_64 rng(31);
    const Dataset d = random_dataset(rng, 12, 6);
    const std::vector<std::string> s1{"a0", "a1", "a2", "a4"};
    const std::vector<std::string> s2{"a1", "a4"};

    const ConceptSpace big = build_space(d, s1);
    const ConceptSpace small = build_space(d, s2);

    for (std::size_t i = 0; i < big.document_ids().size(); ++i) {
        // Restrict the S1 ray to S2's coordinates and renormalize.
        std::vector<double> restricted;
        for (std::size_t j = 0; j < s1.size(); ++j)
            if (s1[j] == "a1" || s1[j] == "a4") restricted.push_back(big.document_rays()[i].coords[j]);
        double norm2 = 0.0;
        for (double v : restricted) norm2 += v * v;
        if (std::sqrt(norm2) < 1e-12) continue;  // dropped on this path
        for (auto& v : restricted) v /= std::sqrt(norm2);

        const auto& ids = small.document_ids();
        const auto it = std::find(ids.begin(), ids.end(), big.document_ids()[i]);
        if (it == ids.end()) continue;  // dropped in the direct path
        const Ray& direct = small.document_rays()[static_cast<std::size_t>(it - ids.begin())];
        for (std::size_t j = 0; j < restricted.size(); ++j)
            CHECK(restricted[j] == doctest::Approx(direct.coords[j]).epsilon(1e-9));
    }
}

TEST_CASE("positive scaling of a row leaves its ray unchanged") {
    std::mt19937_64 rng(37);
    const Dataset d = random_dataset(rng, 5, 4);
    std::vector<double> scaled = d.values();
    for (std::size_t a = 0; a < 4; ++a) scaled[2 * 4 + a] *= 17.5;
    const Dataset d2(d.documents(), d.attributes(), scaled);
    const ConceptSpace s1 = build_space(d, d.attributes());
    const ConceptSpace s2 = build_space(d2, d.attributes());
    CHECK(pseudo_distance(s1.document_rays()[2], s2.document_rays()[2]) ==
          doctest::Approx(0.0).epsilon(1e-12));
}
