// Command-line front end: dataset synthesis, the distillation pipeline,
// robustness measurement, and tree inspection.

#include <CLI11.hpp>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "semdistill/distill.hpp"
#include "semdistill/errors.hpp"
#include "semdistill/kernels.hpp"
#include "semdistill/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace semdistill;

namespace {

struct CommonOptions {
    PipelineConfig config;
    std::string kernel_text = "auto";
    std::string score_text = "last-split";
    std::string order_text = "dfs";
    bool apply_log = false;
    double log_offset = 1.0;
    std::string out_dir = "results";
    bool emit_expression = false;
    bool dump_matrices = false;
};

void add_pipeline_flags(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--nu", opt.config.nu, "Representation dimension (default 1)");
    cmd->add_option("--kernel", opt.kernel_text,
                    "auto | cos-half | cos-quarter | gaussian:<tau>");
    cmd->add_option("--fuzzifier", opt.config.fuzzifier, "FCM fuzzifier p > 1");
    cmd->add_option("--tol", opt.config.tol, "FCM membership-change tolerance");
    cmd->add_option("--max-iter", opt.config.max_iter, "FCM iteration cap");
    cmd->add_flag("--log", opt.apply_log, "Apply ln(x + offset) to every entry");
    cmd->add_option("--log-offset", opt.log_offset, "Offset for --log (default 1)");
    cmd->add_option("--score", opt.score_text, "last-split | path-product");
    cmd->add_option("--order", opt.order_text, "Node processing order: dfs | bfs");
    cmd->add_option("--threshold", opt.config.weight_threshold,
                    "Experimental: zero out weights below this value");
    cmd->add_flag("--partial-eig", opt.config.partial_eigensolver,
                  "Use the partial eigensolver fast path");
    cmd->add_option("--threads", opt.config.threads,
                    "Worker threads (0 = auto, SEMDISTILL_THREADS honored)");
}

void finalize_config(CommonOptions& opt) {
    opt.config.kernel = KernelChoice::parse(opt.kernel_text);
    if (opt.score_text == "last-split")
        opt.config.score_mode = ScoreMode::LastSplit;
    else if (opt.score_text == "path-product")
        opt.config.score_mode = ScoreMode::PathProduct;
    else
        throw ValidationError("unknown score mode '" + opt.score_text + "'");
    if (opt.order_text == "dfs")
        opt.config.order = ProcessingOrder::DepthFirst;
    else if (opt.order_text == "bfs")
        opt.config.order = ProcessingOrder::BreadthFirst;
    else
        throw ValidationError("unknown processing order '" + opt.order_text + "'");
    opt.config.validate();
}

json config_json(const CommonOptions& opt, const Dataset& d) {
    json j;
    j["nu"] = opt.config.nu;
    j["kernel"] = opt.config.kernel.name();
    j["kernel_used"] = opt.config.kernel.resolve(d.nonnegative()).name();
    j["fuzzifier"] = opt.config.fuzzifier;
    j["tol"] = opt.config.tol;
    j["max_iter"] = opt.config.max_iter;
    j["log"] = opt.apply_log;
    if (opt.apply_log) j["log_offset"] = opt.log_offset;
    j["score"] = score_mode_name(opt.config.score_mode);
    j["order"] = processing_order_name(opt.config.order);
    j["weight_threshold"] = opt.config.weight_threshold;
    j["partial_eigensolver"] = opt.config.partial_eigensolver;
    j["simd_backend"] = kernels::backend_name(kernels::active_backend());
    j["input_hash"] = d.content_hash();
    return j;
}

void write_json(const json& j, const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write to '" + path.string() + "'");
    out << j.dump(2) << '\n';
}

// Attribute names become directory names; anything outside [A-Za-z0-9._-]
// is replaced and collisions are disambiguated with the column index.
std::string sanitize_dirname(const std::string& name) {
    std::string safe;
    for (char c : name)
        safe += (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' || c == '-')
                    ? c
                    : '_';
    if (safe.empty() || safe == "." || safe == "..") safe = "_";
    return safe;
}

Dataset load_input(const std::string& path, const CommonOptions& opt) {
    IngestOptions ingest;
    ingest.apply_log = opt.apply_log;
    ingest.log_offset = opt.log_offset;
    return load_matrix(fs::path(path), ingest);
}

int run_distill(const std::string& input, CommonOptions& opt) {
    finalize_config(opt);
    const fs::path out(opt.out_dir);
    fs::create_directories(out);
    if (opt.dump_matrices) opt.config.debug_dir = (out / "debug").string();

    const Dataset d = load_input(input, opt);
    const DistillResult result = distill(d, opt.config);

    export_tree(result.tree, out / "tree.json");
    write_memberships_tsv(result.tree, out / "memberships.tsv");

    std::map<std::string, std::size_t> attr_column;
    for (std::size_t a = 0; a < d.n_attributes(); ++a) attr_column.emplace(d.attributes()[a], a);
    std::map<std::string, std::size_t> doc_row;
    for (std::size_t i = 0; i < d.n_documents(); ++i) doc_row.emplace(d.documents()[i], i);

    std::set<std::string> used_dirs;
    for (const auto& ranking : result.report.rankings) {
        std::string dir_name = sanitize_dirname(ranking.attribute);
        if (!used_dirs.insert(dir_name).second) {
            dir_name += "_" + std::to_string(attr_column.at(ranking.attribute));
            used_dirs.insert(dir_name);
        }
        const fs::path leaf_dir = out / "leaves" / dir_name;
        fs::create_directories(leaf_dir);
        std::ofstream rank_out(leaf_dir / "ranking.tsv", std::ios::binary);
        rank_out << "rank\tdocument\tscore";
        if (opt.emit_expression) rank_out << "\texpression";
        rank_out << '\n';
        for (std::size_t i = 0; i < ranking.entries.size(); ++i) {
            const RankEntry& e = ranking.entries[i];
            rank_out << (i + 1) << '\t' << e.document << '\t' << format_double(e.score);
            if (opt.emit_expression)
                rank_out << '\t'
                         << format_double(d.value(doc_row.at(e.document),
                                                  attr_column.at(ranking.attribute)));
            rank_out << '\n';
        }
    }

    json meta = config_json(opt, d);
    meta["dropped_documents"] = json::array();
    for (const auto& ev : result.report.dropped)
        meta["dropped_documents"].push_back({{"node", word_label(ev.node)},
                                             {"document", ev.document}});
    write_json(meta, out / "meta.json");

    std::cout << "distilled " << d.n_documents() << " documents x " << d.n_attributes()
              << " attributes -> " << result.tree.leaves.size() << " leaves ("
              << result.tree.kernel_name << ", nu=" << result.tree.nu << ")\n"
              << "outputs in " << out.string() << "/\n";
    for (const auto& [word, node] : result.tree.nodes)
        if (!node.is_leaf && node.split_repaired)
            std::cerr << "note: node " << word_label(word)
                      << ": empty cluster repaired by moving the weakest attribute\n";
    return 0;
}

int run_synth(const PlantedSpec& spec, const std::string& out_path) {
    const SynthResult r = generate(spec);
    const fs::path data_path(out_path);
    if (data_path.has_parent_path()) fs::create_directories(data_path.parent_path());
    write_tsv(r.dataset, data_path);
    fs::path truth_path = data_path;
    truth_path.replace_filename("truth.tsv");
    write_truth_tsv(r, truth_path);
    std::cout << "wrote " << r.dataset.n_documents() << " x " << r.dataset.n_attributes()
              << " matrix to " << data_path.string() << " (truth: " << truth_path.string()
              << ")\n";
    return 0;
}

int run_robust(const std::string& input, CommonOptions& opt, const std::string& noise_text,
               std::uint64_t seed, std::size_t top_k) {
    finalize_config(opt);
    const NoiseSpec noise = NoiseSpec::parse(noise_text);
    const Dataset d = load_input(input, opt);
    const RobustnessReport report = perturb_and_compare(d, opt.config, noise, seed, top_k);

    std::ostringstream table;
    table << "attribute\ttopk_jaccard\tkendall_tau\n";
    for (const auto& row : report.per_attribute)
        table << row.attribute << '\t' << format_double(row.topk_jaccard) << '\t'
              << format_double(row.kendall_tau) << '\n';
    std::cout << table.str();

    const fs::path out(opt.out_dir);
    fs::create_directories(out);
    std::ofstream file(out / "robustness.tsv", std::ios::binary);
    file << table.str();

    json meta = config_json(opt, d);
    meta["noise"] = noise.name();
    meta["seed"] = seed;
    meta["top_k"] = top_k;
    write_json(meta, out / "meta.json");
    return 0;
}

int run_inspect(const std::string& tree_path) {
    const DistillationTree t = load_tree(fs::path(tree_path));
    std::cout << "tree: " << t.nodes.size() << " nodes, " << t.leaves.size()
              << " leaves (kernel " << t.kernel_name << ", nu=" << t.nu
              << ", fuzzifier=" << t.fuzzifier << ")\n";
    std::cout << "dataset hash: " << t.dataset_hash << "\n\n";

    // Depth-first listing, child 1 before child 2.
    std::vector<BinaryWord> stack{BinaryWord{}};
    while (!stack.empty()) {
        const BinaryWord word = stack.back();
        stack.pop_back();
        const auto it = t.nodes.find(word);
        if (it == t.nodes.end()) continue;
        const NodeRecord& node = it->second;
        std::cout << std::string(2 * word.size(), ' ') << word_label(word);
        if (node.is_leaf) {
            std::cout << "  leaf: " << node.attributes.front();
        } else {
            std::cout << "  |M| = " << node.attributes.size();
            if (node.attributes.size() <= 6) {
                std::cout << " {";
                for (std::size_t i = 0; i < node.attributes.size(); ++i)
                    std::cout << (i ? ", " : "") << node.attributes[i];
                std::cout << "}";
            }
        }
        if (!node.dropped_documents.empty())
            std::cout << "  (dropped " << node.dropped_documents.size() << " documents)";
        std::cout << '\n';
        if (!node.is_leaf) {
            stack.push_back(word + '2');
            stack.push_back(word + '1');
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"semdistill: divisive spectral-fuzzy specificity analysis of "
                 "object x attribute matrices"};
    app.require_subcommand(1);

    CommonOptions opt;
    std::string input;
    std::string tree_path;

    auto* distill_cmd =
        app.add_subcommand("distill", "Run the pipeline and write tree + rankings");
    distill_cmd->add_option("input", input, "Input TSV matrix")->required();
    add_pipeline_flags(distill_cmd, opt);
    distill_cmd->add_option("--out", opt.out_dir, "Output directory (default results/)");
    distill_cmd->add_flag("--emit-expression", opt.emit_expression,
                          "Add the raw expression column to ranking.tsv");
    distill_cmd->add_flag("--dump-matrices", opt.dump_matrices,
                          "Dump per-node W, Laplacian and eigenvalues under <out>/debug/");

    PlantedSpec spec;
    std::string synth_out = "synthetic.tsv";
    auto* synth_cmd = app.add_subcommand("synth", "Generate a planted-specificity dataset");
    synth_cmd->add_option("--attrs", spec.n_attributes, "Number of attributes");
    synth_cmd->add_option("--docs-per", spec.docs_per_attribute, "Documents per attribute");
    synth_cmd->add_option("--signal", spec.signal_level, "Mean of the specific entry");
    synth_cmd->add_option("--background", spec.background_level, "Mean of nonspecific entries");
    synth_cmd->add_option("--noise", spec.noise_sd, "Gaussian noise sd (clamped at 0)");
    synth_cmd->add_option("--seed", spec.seed, "RNG seed");
    synth_cmd->add_option("--out", synth_out, "Output TSV path (truth.tsv written alongside)");

    std::string noise_text = "mult:0.1";
    std::uint64_t robust_seed = 0;
    std::size_t top_k = 50;
    auto* robust_cmd =
        app.add_subcommand("robust", "Measure ranking stability under random perturbation");
    robust_cmd->add_option("input", input, "Input TSV matrix")->required();
    robust_cmd->add_option("--noise", noise_text, "mult:<delta> | add:<sd-fraction>")->required();
    robust_cmd->add_option("--seed", robust_seed, "Perturbation RNG seed");
    robust_cmd->add_option("--topk", top_k, "Top-k size for the overlap measure");
    add_pipeline_flags(robust_cmd, opt);
    robust_cmd->add_option("--out", opt.out_dir, "Output directory (default results/)");

    auto* inspect_cmd = app.add_subcommand("inspect", "Print a tree.json summary");
    inspect_cmd->add_option("tree", tree_path, "tree.json produced by distill")->required();

    try {
        app.parse(argc, argv);
        if (distill_cmd->parsed()) return run_distill(input, opt);
        if (synth_cmd->parsed()) return run_synth(spec, synth_out);
        if (robust_cmd->parsed()) return run_robust(input, opt, noise_text, robust_seed, top_k);
        if (inspect_cmd->parsed()) return run_inspect(tree_path);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);  // prints help or the usage error
        return code == 0 ? 0 : 1;
    } catch (const ComputationalError& e) {
        std::cerr << "computational error: " << e.what() << '\n';
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
