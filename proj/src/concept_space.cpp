#include "semdistill/concept_space.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "semdistill/errors.hpp"
#include "semdistill/kernels.hpp"

namespace semdistill {

Ray Ray::normalized(std::vector<double> v, double min_norm) {
    const double norm = std::sqrt(kernels::dot({v.data(), v.size()}, {v.data(), v.size()}));
    if (norm < min_norm) throw ValidationError("cannot normalize a (near-)zero vector");
    kernels::scale({v.data(), v.size()}, 1.0 / norm);
    return Ray{std::move(v)};
}

double pseudo_distance(const Ray& p, const Ray& q) {
    if (p.dim() != q.dim())
        throw ValidationError("pseudo_distance: rays have different dimensions (" +
                              std::to_string(p.dim()) + " vs " + std::to_string(q.dim()) + ")");
    return std::sqrt(kernels::squared_distance(p.span(), q.span()));
}

ConceptSpace::ConceptSpace(const Dataset& d, const std::vector<std::string>& subset) {
    if (subset.empty()) throw ValidationError("attribute subset must be nonempty");

    std::unordered_map<std::string, std::size_t> attr_index;
    for (std::size_t i = 0; i < d.n_attributes(); ++i) attr_index.emplace(d.attributes()[i], i);

    std::vector<std::size_t> cols;
    cols.reserve(subset.size());
    for (const auto& name : subset) {
        const auto it = attr_index.find(name);
        if (it == attr_index.end())
            throw ValidationError("attribute '" + name + "' is not in the dataset");
        cols.push_back(it->second);
    }
    std::sort(cols.begin(), cols.end());
    if (std::adjacent_find(cols.begin(), cols.end()) != cols.end())
        throw ValidationError("attribute subset contains a duplicate");

    subset_.reserve(cols.size());
    for (std::size_t c : cols) subset_.push_back(d.attributes()[c]);

    const std::size_t m = cols.size();
    for (std::size_t doc = 0; doc < d.n_documents(); ++doc) {
        std::vector<double> projected(m);
        const auto row = d.row(doc);
        for (std::size_t i = 0; i < m; ++i) projected[i] = row[cols[i]];
        const double norm2 =
            kernels::dot({projected.data(), m}, {projected.data(), m});
        if (std::sqrt(norm2) < 1e-12) {
            dropped_.push_back(d.documents()[doc]);
            continue;
        }
        kernels::scale({projected.data(), m}, 1.0 / std::sqrt(norm2));
        document_ids_.push_back(d.documents()[doc]);
        document_rays_.push_back(Ray{std::move(projected)});
    }

    witness_rays_.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<double> basis(m, 0.0);
        basis[i] = 1.0;
        witness_rays_.push_back(Ray{std::move(basis)});
    }
}

std::vector<std::string> ConceptSpace::vertex_ids() const {
    std::vector<std::string> ids = document_ids_;
    ids.insert(ids.end(), subset_.begin(), subset_.end());
    return ids;
}

const Ray& ConceptSpace::vertex_ray(std::size_t v) const {
    if (v < document_rays_.size()) return document_rays_[v];
    return witness_rays_[v - document_rays_.size()];
}

double ConceptSpace::relevance_probability(const Ray& b, const std::string& attr) const {
    if (b.dim() != subset_.size())
        throw ValidationError("ray dimension does not match the attribute subset");
    const auto it = std::find(subset_.begin(), subset_.end(), attr);
    if (it == subset_.end())
        throw ValidationError("attribute '" + attr + "' is not in the current subset");
    const double c = b.coords[static_cast<std::size_t>(it - subset_.begin())];
    return c * c;
}

}  // namespace semdistill
