#include "semdistill/spectral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "semdistill/dataset.hpp"
#include "semdistill/errors.hpp"

namespace semdistill {

namespace {

constexpr double kSignificant = 1e-10;
constexpr double kDegenerateGap = 1e-10;

std::size_t first_significant(const Eigen::VectorXd& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (std::abs(v(i)) > kSignificant) return static_cast<std::size_t>(i);
    return static_cast<std::size_t>(v.size());
}

void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) > kSignificant) {
            if (v(i) < 0.0) v = -v;
            return;
        }
    }
}

// Sign rule per column, then a canonical order inside each degenerate block:
// by index of first significant coordinate, ties by lexicographic coordinate
// comparison.
void canonicalize(Eigen::VectorXd& values, Eigen::MatrixXd& vectors) {
    const Eigen::Index n = values.size();
    for (Eigen::Index i = 0; i < n; ++i) fix_sign(vectors.col(i));

    Eigen::Index block_start = 0;
    while (block_start < n) {
        Eigen::Index block_end = block_start + 1;
        while (block_end < n &&
               values(block_end) - values(block_end - 1) <= kDegenerateGap)
            ++block_end;
        if (block_end - block_start > 1) {
            std::vector<Eigen::Index> order(static_cast<std::size_t>(block_end - block_start));
            std::iota(order.begin(), order.end(), block_start);
            std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
                const std::size_t fa = first_significant(vectors.col(a));
                const std::size_t fb = first_significant(vectors.col(b));
                if (fa != fb) return fa < fb;
                for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
                    if (vectors(r, a) != vectors(r, b)) return vectors(r, a) < vectors(r, b);
                }
                return false;
            });
            Eigen::MatrixXd tmp_vecs(vectors.rows(), block_end - block_start);
            Eigen::VectorXd tmp_vals(block_end - block_start);
            for (Eigen::Index i = 0; i < block_end - block_start; ++i) {
                tmp_vecs.col(i) = vectors.col(order[static_cast<std::size_t>(i)]);
                tmp_vals(i) = values(order[static_cast<std::size_t>(i)]);
            }
            vectors.middleCols(block_start, block_end - block_start) = tmp_vecs;
            values.segment(block_start, block_end - block_start) = tmp_vals;
        }
        block_start = block_end;
    }
}

}  // namespace

EigenSystem eigendecompose(const Laplacian& l) {
    const Eigen::Index n = l.matrix.rows();
    if (n < 2) throw ValidationError("eigendecompose needs at least a 2x2 Laplacian");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(l.matrix);
    if (solver.info() != Eigen::Success) {
        const double trace = l.matrix.trace();
        const double max_abs = l.matrix.cwiseAbs().maxCoeff();
        throw ComputationalError(
            "eigensolver failed to converge on a " + std::to_string(n) + "x" +
            std::to_string(n) + " Laplacian (trace " + format_double(trace) +
            ", max |entry| " + format_double(max_abs) + ")");
    }

    EigenSystem es;
    es.eigenvalues = solver.eigenvalues();
    es.eigenvectors = solver.eigenvectors();
    es.n_vertices = static_cast<std::size_t>(n);
    canonicalize(es.eigenvalues, es.eigenvectors);
    return es;
}

EigenSystem eigendecompose_partial(const Laplacian& l, std::size_t k,
                                   std::size_t max_iterations) {
    const Eigen::Index n = l.matrix.rows();
    if (n < 2) throw ValidationError("eigendecompose needs at least a 2x2 Laplacian");
    if (k < 1 || k > static_cast<std::size_t>(n))
        throw ValidationError("partial decomposition: k out of range");

    // Smallest eigenpairs of PSD L are the dominant pairs of c*I - L with
    // c above lambda_max (Gershgorin bound).
    double c = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        c = std::max(c, l.matrix(i, i) + l.matrix.row(i).cwiseAbs().sum() -
                            std::abs(l.matrix(i, i)));
    c = c * 1.01 + 1.0;

    Eigen::MatrixXd shifted = -l.matrix;
    shifted.diagonal().array() += c;

    EigenSystem es;
    es.n_vertices = static_cast<std::size_t>(n);
    es.eigenvalues.resize(static_cast<Eigen::Index>(k));
    es.eigenvectors.resize(n, static_cast<Eigen::Index>(k));

    const double scale = std::max(1.0, l.matrix.cwiseAbs().maxCoeff());
    for (std::size_t j = 0; j < k; ++j) {
        // Fixed generic start vector; deflate against converged pairs.
        Eigen::VectorXd x(n);
        for (Eigen::Index i = 0; i < n; ++i) x(i) = 1.0 / static_cast<double>(i + 2 + j);
        for (std::size_t p = 0; p < j; ++p)
            x -= es.eigenvectors.col(p).dot(x) * es.eigenvectors.col(p);
        x.normalize();

        bool converged = false;
        double lambda = 0.0;
        for (std::size_t it = 0; it < max_iterations; ++it) {
            Eigen::VectorXd y = shifted * x;
            for (std::size_t p = 0; p < j; ++p)
                y -= es.eigenvectors.col(p).dot(y) * es.eigenvectors.col(p);
            const double norm = y.norm();
            if (norm < 1e-300)
                throw ComputationalError("partial eigensolver: vector collapsed");
            y /= norm;
            x = y;
            const double theta = x.dot(shifted * x);
            lambda = c - theta;
            const double residual = (l.matrix * x - lambda * x).norm();
            if (residual <= 1e-9 * scale) {
                converged = true;
                break;
            }
        }
        if (!converged)
            throw ComputationalError(
                "partial eigensolver did not converge for pair " + std::to_string(j + 1) +
                " of " + std::to_string(k) +
                "; spectrum may be (near-)degenerate — use the full decomposition");
        es.eigenvalues(static_cast<Eigen::Index>(j)) = lambda;
        es.eigenvectors.col(static_cast<Eigen::Index>(j)) = x;
    }

    canonicalize(es.eigenvalues, es.eigenvectors);
    return es;
}

Representation representation(const EigenSystem& es, std::size_t nu) {
    const std::size_t n = es.n_vertices;
    if (nu < 1 || nu > n - 1)
        throw ValidationError("representation dimension nu must be in [1, N-1], got " +
                              std::to_string(nu));
    if (nu + 1 > es.n_pairs())
        throw ValidationError("eigen system holds only " + std::to_string(es.n_pairs()) +
                              " pairs; nu = " + std::to_string(nu) + " needs " +
                              std::to_string(nu + 1));
    if (es.eigenvalues(1) <= 1e-10)
        throw ComputationalError(
            "lambda_2 = " + format_double(es.eigenvalues(1)) +
            " <= 1e-10: the graph is disconnected, no balanced representation exists");

    Representation r;
    r.coords = es.eigenvectors.middleCols(1, static_cast<Eigen::Index>(nu));
    return r;
}

double energy(const WeightedGraph& g, const Representation& r) {
    const Eigen::Index n = g.weights.rows();
    if (static_cast<std::size_t>(n) != r.n_vertices())
        throw ValidationError("representation does not cover the graph's vertices");
    double total = 0.0;
    for (Eigen::Index v = 0; v < n; ++v)
        for (Eigen::Index w = 0; w < n; ++w) {
            const double diff2 = (r.coords.row(v) - r.coords.row(w)).squaredNorm();
            total += g.weights(v, w) * diff2;
        }
    return total;
}

}  // namespace semdistill
