#include "semdistill/distill.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "semdistill/errors.hpp"
#include "semdistill/spectral.hpp"

namespace semdistill {

using nlohmann::json;

std::string word_label(const BinaryWord& w) { return w.empty() ? "()" : w; }

BinaryWord parse_word_label(const std::string& label) {
    if (label == "()" || label.empty()) return {};
    for (char c : label)
        if (c != '1' && c != '2')
            throw ValidationError("bad tree word '" + label + "': letters must be 1 or 2");
    return label;
}

namespace {

// One recursion step: everything the spec's inner loop computes for a node
// with |M_kappa| > 1.
NodeRecord process_internal_node(const Dataset& d, const std::vector<std::string>& attrs,
                                 const BinaryWord& word, const SimilarityKind& kernel,
                                 const PipelineConfig& config,
                                 std::vector<std::string>& left_attrs,
                                 std::vector<std::string>& right_attrs) {
    NodeRecord node;
    node.attributes = attrs;
    node.kernel = kernel.name();
    node.nu = config.nu;

    const ConceptSpace space = build_space(d, attrs);
    node.dropped_documents = space.dropped_documents();
    node.n_documents = space.document_rays().size();

    WeightedGraph graph = build_graph(space, kernel, config.threads);
    if (config.weight_threshold > 0.0) apply_weight_threshold(graph, config.weight_threshold);
    const Laplacian lap = laplacian(graph);

    const std::size_t n = graph.vertices.size();
    if (config.nu + 2 > n)
        throw ValidationError("node " + word_label(word) + ": nu = " +
                              std::to_string(config.nu) + " needs |V| >= nu + 2, got |V| = " +
                              std::to_string(n));

    EigenSystem es;
    Representation rep;
    try {
        es = config.partial_eigensolver ? eigendecompose_partial(lap, config.nu + 1)
                                        : eigendecompose(lap);
        rep = representation(es, config.nu);
    } catch (const ComputationalError& e) {
        throw ComputationalError("node " + word_label(word) + " (|V| = " +
                                 std::to_string(n) + ", kernel " + kernel.name() +
                                 "): " + e.what());
    }

    if (!config.debug_dir.empty()) {
        const std::filesystem::path dir(config.debug_dir);
        std::filesystem::create_directories(dir);
        const std::string stem = word.empty() ? "root" : word;
        write_matrix_tsv(graph.weights, graph.vertices, dir / (stem + "_W.tsv"));
        write_matrix_tsv(lap.matrix, lap.vertices, dir / (stem + "_Lambda.tsv"));
        std::ofstream ev(dir / (stem + "_eigenvalues.tsv"), std::ios::binary);
        ev << "index\teigenvalue\n";
        for (Eigen::Index i = 0; i < es.eigenvalues.size(); ++i)
            ev << (i + 1) << '\t' << format_double(es.eigenvalues(i)) << '\n';
    }

    const auto seeds = seed_centroids(rep);
    FcmConfig fcm;
    fcm.fuzzifier = config.fuzzifier;
    fcm.tol = config.tol;
    fcm.max_iter = config.max_iter;
    const FuzzyMembership fm = fuzzy_two_means(rep, seeds, fcm);

    const AttributeSplit split = split_attributes(fm, attrs, node.n_documents);
    left_attrs = split.left;
    right_attrs = split.right;

    node.vertices = graph.vertices;
    node.membership = fm.membership;
    node.fcm_converged = fm.converged;
    node.split_repaired = split.repaired;
    return node;
}

}  // namespace

DistillResult distill(const Dataset& d, const PipelineConfig& config) {
    config.validate();
    const SimilarityKind kernel = config.kernel.resolve(d.nonnegative());

    DistillationTree tree;
    tree.kernel_name = kernel.name();
    tree.nu = config.nu;
    tree.fuzzifier = config.fuzzifier;
    tree.tol = config.tol;
    tree.max_iter = config.max_iter;
    tree.dataset_hash = d.content_hash();

    std::map<BinaryWord, std::vector<std::string>> pending_attrs;
    pending_attrs.emplace(BinaryWord{}, d.attributes());

    std::deque<BinaryWord> bookkeeping{BinaryWord{}};
    while (!bookkeeping.empty()) {
        BinaryWord word;
        if (config.order == ProcessingOrder::DepthFirst) {
            word = bookkeeping.back();
            bookkeeping.pop_back();
        } else {
            word = bookkeeping.front();
            bookkeeping.pop_front();
        }
        std::vector<std::string> attrs = std::move(pending_attrs.at(word));
        pending_attrs.erase(word);

        if (attrs.size() == 1) {
            NodeRecord leaf;
            leaf.attributes = std::move(attrs);
            leaf.is_leaf = true;
            tree.nodes.emplace(word, std::move(leaf));
            tree.leaves.push_back(word);
            continue;
        }

        std::vector<std::string> left, right;
        NodeRecord node = process_internal_node(d, attrs, word, kernel, config, left, right);
        tree.nodes.emplace(word, std::move(node));

        pending_attrs.emplace(word + '1', std::move(left));
        pending_attrs.emplace(word + '2', std::move(right));
        if (config.order == ProcessingOrder::DepthFirst) {
            // Pop order: child 1 first.
            bookkeeping.push_back(word + '2');
            bookkeeping.push_back(word + '1');
        } else {
            bookkeeping.push_back(word + '1');
            bookkeeping.push_back(word + '2');
        }
    }
    std::sort(tree.leaves.begin(), tree.leaves.end());

    // Assemble the per-leaf specificity rankings.
    SpecificityReport report;
    report.mode = config.score_mode;

    std::set<std::pair<BinaryWord, std::string>> drop_events;
    for (const auto& [word, node] : tree.nodes)
        for (const auto& doc : node.dropped_documents) drop_events.emplace(word, doc);
    for (const auto& [word, doc] : drop_events) report.dropped.push_back({word, doc});

    std::map<std::string, BinaryWord> leaf_of_attribute;
    for (const auto& leaf : tree.leaves)
        leaf_of_attribute.emplace(tree.nodes.at(leaf).attributes.front(), leaf);

    for (const auto& attr : d.attributes()) {
        const BinaryWord leaf = leaf_of_attribute.at(attr);
        LeafRanking ranking;
        ranking.attribute = attr;
        ranking.leaf = leaf;

        if (leaf.empty()) {
            // |A| = 1: no split was ever made; every document is trivially
            // specific to the only attribute.
            for (const auto& doc : d.documents()) ranking.entries.push_back({doc, 1.0});
            std::sort(ranking.entries.begin(), ranking.entries.end(),
                      [](const RankEntry& a, const RankEntry& b) { return a.document < b.document; });
            report.rankings.push_back(std::move(ranking));
            continue;
        }

        // Documents dropped anywhere on the root-to-leaf path are excluded.
        std::unordered_set<std::string> excluded;
        for (std::size_t depth = 0; depth < leaf.size(); ++depth) {
            const NodeRecord& n = tree.nodes.at(leaf.substr(0, depth));
            for (const auto& doc : n.dropped_documents) excluded.insert(doc);
        }

        const NodeRecord& parent = tree.nodes.at(leaf.substr(0, leaf.size() - 1));
        const int last_cluster = leaf.back() == '1' ? 0 : 1;

        std::unordered_map<std::string, double> scores;
        if (config.score_mode == ScoreMode::LastSplit) {
            for (std::size_t v = 0; v < parent.n_documents; ++v)
                if (!excluded.count(parent.vertices[v]))
                    scores.emplace(parent.vertices[v],
                                   parent.membership(static_cast<Eigen::Index>(v), last_cluster));
        } else {
            for (const auto& doc : d.documents()) {
                if (excluded.count(doc)) continue;
                double product = 1.0;
                bool present = true;
                for (std::size_t depth = 0; depth < leaf.size(); ++depth) {
                    const NodeRecord& n = tree.nodes.at(leaf.substr(0, depth));
                    const int cluster = leaf[depth] == '1' ? 0 : 1;
                    const auto it =
                        std::find(n.vertices.begin(), n.vertices.begin() + n.n_documents, doc);
                    if (it == n.vertices.begin() + n.n_documents) {
                        present = false;
                        break;
                    }
                    const Eigen::Index row = it - n.vertices.begin();
                    product *= n.membership(row, cluster);
                }
                if (present) scores.emplace(doc, product);
            }
        }

        ranking.entries.reserve(scores.size());
        for (const auto& [doc, score] : scores) ranking.entries.push_back({doc, score});
        std::sort(ranking.entries.begin(), ranking.entries.end(),
                  [](const RankEntry& a, const RankEntry& b) {
                      if (a.score != b.score) return a.score > b.score;
                      return a.document < b.document;
                  });
        report.rankings.push_back(std::move(ranking));
    }

    return {std::move(tree), std::move(report)};
}

void export_tree(const DistillationTree& t, const std::filesystem::path& path) {
    json meta;
    meta["kernel"] = t.kernel_name;
    meta["nu"] = t.nu;
    meta["fuzzifier"] = t.fuzzifier;
    meta["tol"] = t.tol;
    meta["max_iter"] = t.max_iter;
    meta["dataset_hash"] = t.dataset_hash;

    json nodes(json::value_t::object);
    for (const auto& [word, node] : t.nodes) {
        json rec;
        rec["attributes"] = node.attributes;
        if (node.is_leaf)
            rec["children"] = nullptr;
        else
            rec["children"] = {word_label(word + '1'), word_label(word + '2')};
        rec["dropped_documents"] = node.dropped_documents;
        nodes[word_label(word)] = std::move(rec);
    }

    json doc;
    doc["meta"] = std::move(meta);
    doc["nodes"] = std::move(nodes);

    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write to '" + path.string() + "'");
    out << doc.dump(2) << '\n';
}

DistillationTree load_tree(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open tree file '" + path.string() + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ValidationError("bad tree file '" + path.string() + "': " + e.what());
    }

    DistillationTree t;
    try {
        const json& meta = doc.at("meta");
        t.kernel_name = meta.at("kernel").get<std::string>();
        t.nu = meta.at("nu").get<std::size_t>();
        t.fuzzifier = meta.at("fuzzifier").get<double>();
        t.tol = meta.at("tol").get<double>();
        t.max_iter = meta.at("max_iter").get<int>();
        t.dataset_hash = meta.at("dataset_hash").get<std::string>();

        for (const auto& [label, rec] : doc.at("nodes").items()) {
            NodeRecord node;
            node.attributes = rec.at("attributes").get<std::vector<std::string>>();
            node.is_leaf = rec.at("children").is_null();
            node.dropped_documents =
                rec.at("dropped_documents").get<std::vector<std::string>>();
            const BinaryWord word = parse_word_label(label);
            if (node.is_leaf) t.leaves.push_back(word);
            t.nodes.emplace(word, std::move(node));
        }
    } catch (const json::exception& e) {
        throw ValidationError("tree file '" + path.string() +
                              "' does not match the schema: " + e.what());
    }
    std::sort(t.leaves.begin(), t.leaves.end());
    return t;
}

std::string memberships_to_tsv(const DistillationTree& t) {
    std::ostringstream out;
    out << "node\tvertex\tm1\tm2\n";
    for (const auto& [word, node] : t.nodes) {
        if (node.is_leaf) continue;
        for (std::size_t v = 0; v < node.vertices.size(); ++v) {
            const Eigen::Index vi = static_cast<Eigen::Index>(v);
            out << word_label(word) << '\t' << node.vertices[v] << '\t'
                << format_double(node.membership(vi, 0)) << '\t'
                << format_double(node.membership(vi, 1)) << '\n';
        }
    }
    return out.str();
}

void write_memberships_tsv(const DistillationTree& t, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write to '" + path.string() + "'");
    out << memberships_to_tsv(t);
}

NoiseSpec NoiseSpec::parse(const std::string& text) {
    NoiseSpec spec;
    std::string arg;
    if (text.rfind("mult:", 0) == 0) {
        spec.kind = Kind::Multiplicative;
        arg = text.substr(5);
    } else if (text.rfind("add:", 0) == 0) {
        spec.kind = Kind::Additive;
        arg = text.substr(4);
    } else {
        throw ValidationError("bad noise spec '" + text +
                              "'; expected mult:<delta> or add:<sd-fraction>");
    }
    const auto [ptr, ec] =
        std::from_chars(arg.data(), arg.data() + arg.size(), spec.magnitude);
    if (ec != std::errc() || ptr != arg.data() + arg.size() || spec.magnitude < 0.0)
        throw ValidationError("bad noise magnitude in '" + text + "'");
    if (spec.kind == Kind::Multiplicative && spec.magnitude >= 1.0)
        throw ValidationError("multiplicative noise delta must be < 1");
    return spec;
}

std::string NoiseSpec::name() const {
    return (kind == Kind::Multiplicative ? "mult:" : "add:") + format_double(magnitude);
}

Dataset perturb(const Dataset& d, const NoiseSpec& noise, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<double> values(d.values());

    if (noise.kind == NoiseSpec::Kind::Multiplicative) {
        std::uniform_real_distribution<double> factor(1.0 - noise.magnitude,
                                                      1.0 + noise.magnitude);
        for (double& v : values) v *= factor(rng);
    } else {
        double scale = 0.0;
        for (double v : values) scale += std::abs(v);
        scale /= static_cast<double>(values.size());
        std::normal_distribution<double> delta(0.0, noise.magnitude * scale);
        for (double& v : values) v += delta(rng);
    }
    if (d.nonnegative())
        for (double& v : values) v = std::max(0.0, v);
    return Dataset(d.documents(), d.attributes(), std::move(values));
}

namespace {

double topk_jaccard(const LeafRanking& a, const LeafRanking& b, std::size_t k) {
    std::set<std::string> sa, sb, all;
    for (std::size_t i = 0; i < std::min(k, a.entries.size()); ++i) sa.insert(a.entries[i].document);
    for (std::size_t i = 0; i < std::min(k, b.entries.size()); ++i) sb.insert(b.entries[i].document);
    all = sa;
    all.insert(sb.begin(), sb.end());
    if (all.empty()) return 1.0;
    std::size_t inter = 0;
    for (const auto& doc : sa) inter += sb.count(doc);
    return static_cast<double>(inter) / static_cast<double>(all.size());
}

// Kendall tau-a between the two orderings, restricted to common documents.
double kendall_tau(const LeafRanking& a, const LeafRanking& b) {
    std::unordered_map<std::string, std::size_t> pos_b;
    for (std::size_t i = 0; i < b.entries.size(); ++i) pos_b.emplace(b.entries[i].document, i);

    std::vector<std::size_t> ranks;  // b-positions in a-order
    ranks.reserve(a.entries.size());
    for (const auto& e : a.entries) {
        const auto it = pos_b.find(e.document);
        if (it != pos_b.end()) ranks.push_back(it->second);
    }
    const std::size_t n = ranks.size();
    if (n < 2) return 1.0;

    long long concordant = 0, discordant = 0;
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            (ranks[i] < ranks[j] ? concordant : discordant) += 1;
    return static_cast<double>(concordant - discordant) /
           (0.5 * static_cast<double>(n) * static_cast<double>(n - 1));
}

}  // namespace

RobustnessReport perturb_and_compare(const Dataset& d, const PipelineConfig& config,
                                     const NoiseSpec& noise, std::uint64_t seed,
                                     std::size_t top_k) {
    if (top_k < 1) throw ValidationError("top_k must be >= 1");
    const DistillResult original = distill(d, config);
    const DistillResult noisy = distill(perturb(d, noise, seed), config);

    RobustnessReport report;
    report.top_k = top_k;
    report.noise = noise;
    report.seed = seed;
    for (std::size_t i = 0; i < original.report.rankings.size(); ++i) {
        const LeafRanking& ra = original.report.rankings[i];
        const LeafRanking& rb = noisy.report.rankings[i];
        report.per_attribute.push_back(
            {ra.attribute, topk_jaccard(ra, rb, top_k), kendall_tau(ra, rb)});
    }
    return report;
}

}  // namespace semdistill
