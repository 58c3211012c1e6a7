#pragma once

#include <span>
#include <string>
#include <vector>

#include "semdistill/dataset.hpp"

namespace semdistill {

/// Unit-norm coordinate vector over the current attribute subset.
struct Ray {
    std::vector<double> coords;

    std::size_t dim() const { return coords.size(); }
    std::span<const double> span() const { return {coords.data(), coords.size()}; }

    /// Normalize `v` to unit length. Throws ValidationError when the norm is
    /// below `min_norm`.
    static Ray normalized(std::vector<double> v, double min_norm = 1e-12);
};

/// ||p - q||. Symmetric, triangle inequality, range [0, 2] on rays; zero for
/// proportional raw rows, so a pseudo-distance on documents.
double pseudo_distance(const Ray& p, const Ray& q);

/// Documents and attribute witnesses embedded as rays over an attribute
/// subset. Vertex order downstream is: surviving documents (dataset order)
/// followed by the subset's witnesses (dataset column order).
class ConceptSpace {
public:
    /// Restrict each document row to `subset` columns and renormalize.
    /// Documents whose restricted vector has norm < 1e-12 are recorded in
    /// dropped_documents instead of erroring. `subset` is canonicalized to
    /// dataset column order.
    ConceptSpace(const Dataset& d, const std::vector<std::string>& subset);

    const std::vector<std::string>& attribute_subset() const { return subset_; }
    std::size_t dim() const { return subset_.size(); }

    const std::vector<std::string>& document_ids() const { return document_ids_; }
    const std::vector<Ray>& document_rays() const { return document_rays_; }
    const std::vector<std::string>& dropped_documents() const { return dropped_; }

    /// Standard basis ray of the i-th subset attribute.
    const Ray& witness_ray(std::size_t i) const { return witness_rays_[i]; }
    const std::vector<Ray>& witness_rays() const { return witness_rays_; }

    std::size_t n_vertices() const { return document_rays_.size() + subset_.size(); }

    /// All vertex identifiers, documents first, then witness attributes.
    std::vector<std::string> vertex_ids() const;

    /// Ray of vertex `v` in the order above.
    const Ray& vertex_ray(std::size_t v) const;

    /// |<xi_b | a>|^2: squared coordinate of `b` at subset attribute `attr`.
    /// Throws ValidationError when `attr` is not in the subset or the ray
    /// dimension does not match.
    double relevance_probability(const Ray& b, const std::string& attr) const;

private:
    std::vector<std::string> subset_;
    std::vector<std::string> document_ids_;
    std::vector<Ray> document_rays_;
    std::vector<Ray> witness_rays_;
    std::vector<std::string> dropped_;
};

inline ConceptSpace build_space(const Dataset& d, const std::vector<std::string>& subset) {
    return ConceptSpace(d, subset);
}

}  // namespace semdistill
