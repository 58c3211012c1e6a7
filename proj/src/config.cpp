#include "semdistill/config.hpp"

#include <charconv>

#include "semdistill/errors.hpp"

namespace semdistill {

SimilarityKind KernelChoice::resolve(bool data_nonnegative) const {
    switch (mode) {
        case Mode::Auto:
            return data_nonnegative ? SimilarityKind::cos_half()
                                    : SimilarityKind::cos_quarter();
        case Mode::CosHalf: return SimilarityKind::cos_half();
        case Mode::CosQuarter: return SimilarityKind::cos_quarter();
        case Mode::Gaussian: return SimilarityKind::gaussian(tau);
    }
    return SimilarityKind::cos_half();
}

KernelChoice KernelChoice::parse(const std::string& text) {
    if (text == "auto") return {Mode::Auto, 1.0};
    if (text == "cos-half") return {Mode::CosHalf, 1.0};
    if (text == "cos-quarter") return {Mode::CosQuarter, 1.0};
    if (text.rfind("gaussian:", 0) == 0) {
        const std::string arg = text.substr(9);
        double tau = 0.0;
        const auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), tau);
        if (ec != std::errc() || ptr != arg.data() + arg.size() || !(tau > 0.0))
            throw ValidationError("bad gaussian kernel spec '" + text +
                                  "'; expected gaussian:<tau> with tau > 0");
        return {Mode::Gaussian, tau};
    }
    throw ValidationError("unknown kernel '" + text +
                          "'; expected auto | cos-half | cos-quarter | gaussian:<tau>");
}

std::string KernelChoice::name() const {
    switch (mode) {
        case Mode::Auto: return "auto";
        case Mode::CosHalf: return "cos-half";
        case Mode::CosQuarter: return "cos-quarter";
        case Mode::Gaussian: return SimilarityKind::gaussian(tau).name();
    }
    return "unknown";
}

std::string score_mode_name(ScoreMode m) {
    return m == ScoreMode::LastSplit ? "last-split" : "path-product";
}

std::string processing_order_name(ProcessingOrder o) {
    return o == ProcessingOrder::DepthFirst ? "dfs" : "bfs";
}

void PipelineConfig::validate() const {
    if (nu < 1) throw ValidationError("nu must be >= 1");
    if (!(fuzzifier > 1.0)) throw ValidationError("fuzzifier must be > 1");
    if (!(tol > 0.0)) throw ValidationError("tol must be > 0");
    if (max_iter < 1) throw ValidationError("max_iter must be >= 1");
    if (weight_threshold < 0.0 || weight_threshold >= 1.0)
        throw ValidationError("weight threshold must be in [0, 1)");
    if (kernel.mode == KernelChoice::Mode::Gaussian && !(kernel.tau > 0.0))
        throw ValidationError("gaussian kernel requires tau > 0");
}

}  // namespace semdistill
