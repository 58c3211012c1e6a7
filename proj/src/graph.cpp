#include "semdistill/graph.hpp"

#include <cmath>
#include <fstream>

#include "semdistill/dataset.hpp"
#include "semdistill/errors.hpp"
#include "semdistill/kernels.hpp"
#include "semdistill/parallel.hpp"

namespace semdistill {

SimilarityKind SimilarityKind::gaussian(double tau) {
    if (!(tau > 0.0)) throw ValidationError("gaussian kernel requires tau > 0");
    return {Family::Gaussian, tau};
}

std::string SimilarityKind::name() const {
    switch (family) {
        case Family::CosHalf: return "cos-half";
        case Family::CosQuarter: return "cos-quarter";
        case Family::Gaussian: return "gaussian:" + format_double(tau);
    }
    return "unknown";
}

double similarity(const Ray& p, const Ray& q, const SimilarityKind& kind) {
    if (p.dim() != q.dim())
        throw ValidationError("similarity: rays have different dimensions");
    const double d2 = kernels::squared_distance(p.span(), q.span());
    switch (kind.family) {
        case SimilarityKind::Family::CosHalf: {
            if (d2 > 2.0 + 1e-12)
                throw ValidationError(
                    "cos-half similarity saw d^2 = " + format_double(d2) +
                    " > 2; this kernel is only valid on nonnegative data");
            return std::sqrt(std::max(0.0, 1.0 - 0.5 * d2));
        }
        case SimilarityKind::Family::CosQuarter:
            return std::sqrt(std::max(0.0, 1.0 - 0.25 * d2));
        case SimilarityKind::Family::Gaussian:
            return std::exp(-d2 / kind.tau);
    }
    return 0.0;
}

WeightedGraph build_graph(const ConceptSpace& space, const SimilarityKind& kind,
                          unsigned threads) {
    const std::size_t n = space.n_vertices();
    if (n < 2) throw ValidationError("graph needs at least 2 vertices, got " +
                                     std::to_string(n));

    WeightedGraph g;
    g.vertices = space.vertex_ids();
    g.n_documents = space.document_rays().size();
    g.kernel = kind;
    g.weights.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));

    // Upper triangle per row, mirrored; entries are independent so the
    // partition over threads cannot change any value.
    parallel_for(n, threads, [&](std::size_t v) {
        const Ray& rv = space.vertex_ray(v);
        g.weights(v, v) = 1.0;  // sigma(v, v), d = 0 for every kernel
        for (std::size_t w = v + 1; w < n; ++w) {
            const double s = similarity(rv, space.vertex_ray(w), kind);
            g.weights(v, w) = s;
            g.weights(w, v) = s;
        }
    });
    return g;
}

void apply_weight_threshold(WeightedGraph& g, double eps) {
    if (eps <= 0.0) return;
    const Eigen::Index n = g.weights.rows();
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            if (i != j && g.weights(i, j) < eps) g.weights(i, j) = 0.0;
}

Laplacian laplacian(const WeightedGraph& g) {
    const Eigen::Index n = g.weights.rows();
    Laplacian l;
    l.vertices = g.vertices;
    l.matrix = -g.weights;
    for (Eigen::Index v = 0; v < n; ++v) {
        // Row sum via the column (symmetric, column-major storage).
        const double degree =
            kernels::sum({g.weights.col(v).data(), static_cast<std::size_t>(n)});
        l.matrix(v, v) = degree - g.weights(v, v);
    }
    return l;
}

void write_matrix_tsv(const Eigen::MatrixXd& m, const std::vector<std::string>& vertices,
                      const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write to '" + path.string() + "'");
    out << "vertex";
    for (const auto& v : vertices) out << '\t' << v;
    out << '\n';
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        out << vertices[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < m.cols(); ++j) out << '\t' << format_double(m(i, j));
        out << '\n';
    }
}

}  // namespace semdistill
