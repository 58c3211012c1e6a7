#pragma once

#include <string>

#include "semdistill/graph.hpp"

namespace semdistill {

/// Kernel selection: Auto resolves to cos-half on nonnegative data and
/// cos-quarter otherwise (the quarter factor keeps the root argument
/// nonnegative on signed data).
struct KernelChoice {
    enum class Mode { Auto, CosHalf, CosQuarter, Gaussian };

    Mode mode = Mode::Auto;
    double tau = 1.0;

    SimilarityKind resolve(bool data_nonnegative) const;

    /// Parse "auto" | "cos-half" | "cos-quarter" | "gaussian:<tau>".
    static KernelChoice parse(const std::string& text);
    std::string name() const;
};

enum class ScoreMode { LastSplit, PathProduct };
enum class ProcessingOrder { DepthFirst, BreadthFirst };

std::string score_mode_name(ScoreMode m);
std::string processing_order_name(ProcessingOrder o);

struct PipelineConfig {
    std::size_t nu = 1;
    KernelChoice kernel;
    double fuzzifier = 2.0;
    double tol = 1e-7;
    int max_iter = 300;
    ScoreMode score_mode = ScoreMode::LastSplit;
    ProcessingOrder order = ProcessingOrder::DepthFirst;
    double weight_threshold = 0.0;  // experimental post-filter, 0 = off
    bool partial_eigensolver = false;
    unsigned threads = 0;           // 0 = auto (SEMDISTILL_THREADS, then hardware)
    std::string debug_dir;          // when set, per-node W / Laplacian / spectrum dumps

    void validate() const;
};

}  // namespace semdistill
