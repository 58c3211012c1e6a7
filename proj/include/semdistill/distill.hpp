#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "semdistill/config.hpp"
#include "semdistill/dataset.hpp"
#include "semdistill/fuzzy.hpp"

namespace semdistill {

/// Tree coordinates are words over {'1','2'}; the root is the empty word,
/// rendered as "()" in files and listings.
using BinaryWord = std::string;

std::string word_label(const BinaryWord& w);
BinaryWord parse_word_label(const std::string& label);

struct NodeRecord {
    std::vector<std::string> attributes;  // M_kappa, dataset column order
    bool is_leaf = false;

    // Internal nodes only.
    std::vector<std::string> vertices;  // V_kappa: documents then witnesses
    std::size_t n_documents = 0;
    Eigen::MatrixXd membership;  // |vertices| x 2
    bool fcm_converged = true;
    bool split_repaired = false;
    std::vector<std::string> dropped_documents;  // zero projection at this node
    std::string kernel;
    std::size_t nu = 0;
};

struct DistillationTree {
    std::map<BinaryWord, NodeRecord> nodes;
    std::vector<BinaryWord> leaves;  // sorted

    std::string kernel_name;
    std::size_t nu = 1;
    double fuzzifier = 2.0;
    double tol = 1e-7;
    int max_iter = 300;
    std::string dataset_hash;
};

struct RankEntry {
    std::string document;
    double score;  // in [0,1]
};

struct LeafRanking {
    std::string attribute;
    BinaryWord leaf;
    std::vector<RankEntry> entries;  // descending score, ties by document id
};

struct DropEvent {
    BinaryWord node;
    std::string document;
};

struct SpecificityReport {
    std::vector<LeafRanking> rankings;  // dataset attribute order
    std::vector<DropEvent> dropped;
    ScoreMode mode = ScoreMode::LastSplit;
};

struct DistillResult {
    DistillationTree tree;
    SpecificityReport report;
};

/// Recursive divisive pipeline: project the concept space onto the node's
/// attribute subset, rebuild the witness-augmented graph over all documents,
/// eigendecompose its Laplacian, run seeded fuzzy 2-means on the
/// nu-dimensional representation, and recurse on the attribute split until
/// every attribute is isolated. Deterministic given (dataset, config);
/// independent of the bookkeeping processing order.
DistillResult distill(const Dataset& d, const PipelineConfig& config);

void export_tree(const DistillationTree& t, const std::filesystem::path& path);
DistillationTree load_tree(const std::filesystem::path& path);

/// memberships.tsv: node, vertex, m1, m2 for every internal node.
void write_memberships_tsv(const DistillationTree& t, const std::filesystem::path& path);
std::string memberships_to_tsv(const DistillationTree& t);

struct NoiseSpec {
    enum class Kind { Additive, Multiplicative };
    Kind kind = Kind::Multiplicative;
    double magnitude = 0.1;  // mult: delta of U(1-delta,1+delta); add: sd as fraction of mean |entry|

    /// Parse "mult:<delta>" | "add:<frac>".
    static NoiseSpec parse(const std::string& text);
    std::string name() const;
};

/// Random perturbation of the dataset values; deterministic given the seed.
/// Nonnegative inputs stay nonnegative (additive noise is clamped at 0) so
/// the kernel regime is preserved.
Dataset perturb(const Dataset& d, const NoiseSpec& noise, std::uint64_t seed);

struct AttributeRobustness {
    std::string attribute;
    double topk_jaccard;
    double kendall_tau;
};

struct RobustnessReport {
    std::vector<AttributeRobustness> per_attribute;
    std::size_t top_k;
    NoiseSpec noise;
    std::uint64_t seed;
};

/// Distill the original and a perturbed copy, then compare the per-attribute
/// specificity rankings: Jaccard overlap of the top-k sets and Kendall tau
/// over the common documents.
RobustnessReport perturb_and_compare(const Dataset& d, const PipelineConfig& config,
                                     const NoiseSpec& noise, std::uint64_t seed,
                                     std::size_t top_k = 50);

}  // namespace semdistill
