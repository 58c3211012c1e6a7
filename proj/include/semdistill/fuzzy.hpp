#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "semdistill/spectral.hpp"

namespace semdistill {

struct FcmConfig {
    double fuzzifier = 2.0;  // p > 1
    double tol = 1e-7;       // stop when max membership change < tol
    int max_iter = 300;

    void validate() const;
};

/// Fuzzy memberships of every vertex in the two clusters, plus the optimizer
/// trace. Rows sum to 1 within 1e-9; objective_trace is nonincreasing.
struct FuzzyMembership {
    Eigen::MatrixXd membership;          // n_vertices x 2
    std::vector<double> objective_trace;  // F after each iteration
    Eigen::MatrixXd centroids;           // 2 x nu
    bool converged = true;

    double m(std::size_t vertex, int cluster) const {
        return membership(static_cast<Eigen::Index>(vertex), cluster - 1);
    }
};

/// Pair of vertices at maximal representation distance; ties broken by the
/// lexicographically smallest index pair. Needs >= 2 vertices.
std::pair<std::size_t, std::size_t> seed_centroids(const Representation& r);

/// Alternating optimization of F = sum_v sum_k m(v,k)^p ||r(v) - c_k||^2,
/// seeded at r(seeds.first), r(seeds.second). Memberships are computed for
/// every vertex. Non-convergence within max_iter is flagged, not an error.
FuzzyMembership fuzzy_two_means(const Representation& r,
                                std::pair<std::size_t, std::size_t> seeds,
                                const FcmConfig& config);

/// Attribute split induced by majority membership.
struct AttributeSplit {
    std::vector<std::string> left;   // m(.,1) > m(.,2)
    std::vector<std::string> right;  // the rest (ties go right)
    bool repaired = false;  // true when an attribute was moved to fix an empty side
};

/// `attrs` lists the attribute names; `attr_vertex_offset` is the vertex
/// index of attrs[0] inside `fm` (witnesses sit after the documents).
/// If a side comes out empty, the attribute with the weakest majority is
/// moved across and `repaired` is set.
AttributeSplit split_attributes(const FuzzyMembership& fm,
                                const std::vector<std::string>& attrs,
                                std::size_t attr_vertex_offset);

}  // namespace semdistill
