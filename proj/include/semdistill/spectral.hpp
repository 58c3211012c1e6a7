#pragma once

#include <Eigen/Core>

#include "semdistill/graph.hpp"

namespace semdistill {

/// Eigenpairs of a weighted Laplacian, ascending. `eigenvectors` columns are
/// orthonormal and carry a deterministic sign: the first coordinate with
/// magnitude > 1e-10 is positive. Within a degenerate eigenvalue block
/// (gap <= 1e-10) columns are ordered by first significant coordinate.
struct EigenSystem {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;  // column i pairs with eigenvalue i
    std::size_t n_vertices = 0;    // matrix dimension; >= column count for partial runs

    std::size_t n_pairs() const { return static_cast<std::size_t>(eigenvalues.size()); }
};

/// Full decomposition of the dense symmetric Laplacian.
/// Throws ComputationalError with condition diagnostics on solver failure.
EigenSystem eigendecompose(const Laplacian& l);

/// First `k` eigenpairs only (ascending), via deflated power iteration on the
/// spectrally shifted matrix. Optional fast path; always validated against
/// eigendecompose() in tests. Throws ComputationalError when an eigenpair
/// fails to converge (e.g. nearly degenerate spectrum) — rerun with the full
/// decomposition in that case.
EigenSystem eigendecompose_partial(const Laplacian& l, std::size_t k,
                                   std::size_t max_iterations = 200000);

/// Balanced nontrivial map of vertices into R^nu, built from eigenvector
/// columns u^2 ... u^{nu+1}.
struct Representation {
    Eigen::MatrixXd coords;  // n_vertices x nu; row v = r(v)

    std::size_t dim() const { return static_cast<std::size_t>(coords.cols()); }
    std::size_t n_vertices() const { return static_cast<std::size_t>(coords.rows()); }

    Eigen::RowVectorXd point(std::size_t v) const { return coords.row(static_cast<Eigen::Index>(v)); }
};

/// Throws ValidationError when nu is out of [1, N-1] (or exceeds the pairs
/// available) and ComputationalError when lambda_2 <= 1e-10 (disconnected
/// graph).
Representation representation(const EigenSystem& es, std::size_t nu);

/// Weighed energy over ordered vertex pairs:
///   E_W(r) = sum_{v,v'} W_vv' ||r(v) - r(v')||^2.
/// For the eigen-representation this equals 2 * sum_{i=2}^{nu+1} lambda_i.
double energy(const WeightedGraph& g, const Representation& r);

}  // namespace semdistill
