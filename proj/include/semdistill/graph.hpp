#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <string>
#include <vector>

#include "semdistill/concept_space.hpp"

namespace semdistill {

/// Similarity kernel choice. The cosine family maps the ray pseudo-distance
/// through sqrt(1 - d^2/2) (nonnegative data) or sqrt(1 - d^2/4) (general
/// data); the Gaussian kernel is exp(-d^2/tau).
struct SimilarityKind {
    enum class Family { CosHalf, CosQuarter, Gaussian };

    Family family = Family::CosHalf;
    double tau = 1.0;  // Gaussian only

    static SimilarityKind cos_half() { return {Family::CosHalf, 0.0}; }
    static SimilarityKind cos_quarter() { return {Family::CosQuarter, 0.0}; }
    static SimilarityKind gaussian(double tau);

    std::string name() const;
    bool operator==(const SimilarityKind&) const = default;
};

/// sigma(p, q) in [0, 1]. Throws ValidationError on dimension mismatch and a
/// domain error for CosHalf when d^2 > 2 + 1e-12 (signed data misuse).
double similarity(const Ray& p, const Ray& q, const SimilarityKind& kind);

/// Complete weighted graph over surviving documents plus witness vertices.
struct WeightedGraph {
    std::vector<std::string> vertices;  // documents first, then witnesses
    std::size_t n_documents = 0;
    Eigen::MatrixXd weights;  // symmetric, entries in [0,1], unit diagonal
    SimilarityKind kernel;
};

/// Build the graph with W_vv' = sigma(ray_v, ray_v'). Entries are pure
/// per-pair computations; row fill may run on `threads` workers and is
/// byte-identical to the sequential order. Throws ValidationError when the
/// space has fewer than 2 vertices.
WeightedGraph build_graph(const ConceptSpace& space, const SimilarityKind& kind,
                          unsigned threads = 0);

/// Experimental hard threshold: zero out off-diagonal weights < eps.
/// Can disconnect the graph, which the spectral stage then reports.
void apply_weight_threshold(WeightedGraph& g, double eps);

struct Laplacian {
    Eigen::MatrixXd matrix;             // D - W; rows sum to zero, PSD
    std::vector<std::string> vertices;  // order matching the source graph
};

Laplacian laplacian(const WeightedGraph& g);

/// Debug dump: square matrix as TSV, vertex identifiers as header row/column.
void write_matrix_tsv(const Eigen::MatrixXd& m, const std::vector<std::string>& vertices,
                      const std::filesystem::path& path);

}  // namespace semdistill
