#include "semdistill/fuzzy.hpp"

#include <cmath>
#include <limits>

#include "semdistill/errors.hpp"

namespace semdistill {

void FcmConfig::validate() const {
    if (!(fuzzifier > 1.0)) throw ValidationError("fuzzifier must be > 1");
    if (!(tol > 0.0)) throw ValidationError("fcm tolerance must be > 0");
    if (max_iter < 1) throw ValidationError("fcm max_iter must be >= 1");
}

std::pair<std::size_t, std::size_t> seed_centroids(const Representation& r) {
    const std::size_t n = r.n_vertices();
    if (n < 2) throw ValidationError("seeding needs at least 2 vertices");
    std::size_t best_i = 0, best_j = 1;
    double best = -1.0;
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d2 =
                (r.coords.row(static_cast<Eigen::Index>(i)) -
                 r.coords.row(static_cast<Eigen::Index>(j)))
                    .squaredNorm();
            if (d2 > best) {  // strict: first maximal pair in lex order wins
                best = d2;
                best_i = i;
                best_j = j;
            }
        }
    return {best_i, best_j};
}

namespace {

// Membership of one vertex given squared distances to the two centroids.
// Ratio form 1 / (1 + (d_k/d_j)^(1/(p-1))) on squared distances; overflow
// degrades gracefully to the 0/1 limits, and exact zero distance gets the
// singleton convention m = 1.
void membership_row(double d1_sq, double d2_sq, double exponent, double& m1, double& m2) {
    if (d1_sq == 0.0 && d2_sq == 0.0) {
        m1 = 0.5;
        m2 = 0.5;
        return;
    }
    if (d1_sq == 0.0) {
        m1 = 1.0;
        m2 = 0.0;
        return;
    }
    if (d2_sq == 0.0) {
        m1 = 0.0;
        m2 = 1.0;
        return;
    }
    m1 = 1.0 / (1.0 + std::pow(d1_sq / d2_sq, exponent));
    m2 = 1.0 / (1.0 + std::pow(d2_sq / d1_sq, exponent));
}

}  // namespace

FuzzyMembership fuzzy_two_means(const Representation& r,
                                std::pair<std::size_t, std::size_t> seeds,
                                const FcmConfig& config) {
    config.validate();
    const std::size_t n = r.n_vertices();
    if (seeds.first == seeds.second || seeds.first >= n || seeds.second >= n)
        throw ValidationError("fcm seeds must be two distinct vertex indices");

    const double p = config.fuzzifier;
    // The update uses (d^2)^(1/(p-1)) = (d^(2/(p-1))) directly.
    const double exponent = 1.0 / (p - 1.0);
    const Eigen::Index nu = r.coords.cols();

    FuzzyMembership out;
    out.centroids.resize(2, nu);
    out.centroids.row(0) = r.coords.row(static_cast<Eigen::Index>(seeds.first));
    out.centroids.row(1) = r.coords.row(static_cast<Eigen::Index>(seeds.second));
    out.membership.setZero(static_cast<Eigen::Index>(n), 2);
    out.converged = false;

    Eigen::MatrixXd previous = out.membership;
    for (int iter = 0; iter < config.max_iter; ++iter) {
        // Coincident centroids: reseed the second at the point farthest from
        // the first, so the update formula stays well-defined.
        if ((out.centroids.row(0) - out.centroids.row(1)).norm() < 1e-12) {
            std::size_t far = 0;
            double far_d = -1.0;
            for (std::size_t v = 0; v < n; ++v) {
                const double d = (r.coords.row(static_cast<Eigen::Index>(v)) -
                                  out.centroids.row(0))
                                     .squaredNorm();
                if (d > far_d) {
                    far_d = d;
                    far = v;
                }
            }
            if (far_d <= 0.0) {
                // Every point coincides with both centroids; no structure.
                out.membership.setConstant(0.5);
                out.objective_trace.push_back(0.0);
                out.converged = true;
                return out;
            }
            out.centroids.row(1) = r.coords.row(static_cast<Eigen::Index>(far));
        }

        double max_change = 0.0;
        for (std::size_t v = 0; v < n; ++v) {
            const Eigen::Index vi = static_cast<Eigen::Index>(v);
            const double d1 = (r.coords.row(vi) - out.centroids.row(0)).squaredNorm();
            const double d2 = (r.coords.row(vi) - out.centroids.row(1)).squaredNorm();
            double m1, m2;
            membership_row(d1, d2, exponent, m1, m2);
            max_change = std::max({max_change, std::abs(m1 - previous(vi, 0)),
                                   std::abs(m2 - previous(vi, 1))});
            out.membership(vi, 0) = m1;
            out.membership(vi, 1) = m2;
        }

        // Centroid update: weighted mean with weights m^p.
        for (int k = 0; k < 2; ++k) {
            Eigen::RowVectorXd num = Eigen::RowVectorXd::Zero(nu);
            double den = 0.0;
            for (std::size_t v = 0; v < n; ++v) {
                const Eigen::Index vi = static_cast<Eigen::Index>(v);
                const double w = std::pow(out.membership(vi, k), p);
                num += w * r.coords.row(vi);
                den += w;
            }
            if (den > 0.0) out.centroids.row(k) = num / den;
        }

        double objective = 0.0;
        for (std::size_t v = 0; v < n; ++v) {
            const Eigen::Index vi = static_cast<Eigen::Index>(v);
            objective +=
                std::pow(out.membership(vi, 0), p) *
                    (r.coords.row(vi) - out.centroids.row(0)).squaredNorm() +
                std::pow(out.membership(vi, 1), p) *
                    (r.coords.row(vi) - out.centroids.row(1)).squaredNorm();
        }
        out.objective_trace.push_back(objective);

        if (iter > 0 && max_change < config.tol) {
            out.converged = true;
            break;
        }
        previous = out.membership;
    }
    return out;
}

AttributeSplit split_attributes(const FuzzyMembership& fm,
                                const std::vector<std::string>& attrs,
                                std::size_t attr_vertex_offset) {
    if (attrs.size() < 2) throw ValidationError("split needs at least 2 attributes");

    AttributeSplit split;
    std::vector<bool> goes_left(attrs.size());
    for (std::size_t i = 0; i < attrs.size(); ++i) {
        const Eigen::Index v = static_cast<Eigen::Index>(attr_vertex_offset + i);
        goes_left[i] = fm.membership(v, 0) > fm.membership(v, 1);  // strict; ties go right
    }

    const auto majority = [&](std::size_t i, int k) {
        return fm.membership(static_cast<Eigen::Index>(attr_vertex_offset + i), k);
    };

    std::size_t left_count = 0;
    for (bool b : goes_left) left_count += b ? 1 : 0;
    if (left_count == 0) {
        // Move the attribute with the weakest right-majority (largest m1).
        std::size_t weakest = 0;
        for (std::size_t i = 1; i < attrs.size(); ++i)
            if (majority(i, 0) > majority(weakest, 0)) weakest = i;
        goes_left[weakest] = true;
        split.repaired = true;
    } else if (left_count == attrs.size()) {
        std::size_t weakest = 0;
        for (std::size_t i = 1; i < attrs.size(); ++i)
            if (majority(i, 1) > majority(weakest, 1)) weakest = i;
        goes_left[weakest] = false;
        split.repaired = true;
    }

    for (std::size_t i = 0; i < attrs.size(); ++i)
        (goes_left[i] ? split.left : split.right).push_back(attrs[i]);
    return split;
}

}  // namespace semdistill
