#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "semdistill/dataset.hpp"

namespace semdistill {

/// Planted-specificity generator spec. Document i is assigned attribute
/// (i mod n_attributes); its value there is signal_level + noise, elsewhere
/// background_level + noise. Entries are clamped at 0.
struct PlantedSpec {
    std::size_t n_attributes = 4;
    std::size_t docs_per_attribute = 50;
    double background_level = 1.0;
    double signal_level = 5.0;
    double noise_sd = 0.0;
    std::uint64_t seed = 0;

    void validate() const;
};

struct SynthResult {
    Dataset dataset;
    std::map<std::string, std::string> ground_truth;  // document -> planted attribute
};

/// Deterministic given the seed.
SynthResult generate(const PlantedSpec& spec);

/// `truth.tsv` sidecar: `document<TAB>attribute`, one row per document.
void write_truth_tsv(const SynthResult& r, const std::filesystem::path& path);

}  // namespace semdistill
