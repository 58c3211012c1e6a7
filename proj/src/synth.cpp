#include "semdistill/synth.hpp"

#include <algorithm>
#include <fstream>
#include <random>

#include "semdistill/errors.hpp"

namespace semdistill {

void PlantedSpec::validate() const {
    if (n_attributes < 1) throw ValidationError("synth: need at least 1 attribute");
    if (docs_per_attribute < 1) throw ValidationError("synth: need at least 1 document per attribute");
    if (!(background_level >= 0.0)) throw ValidationError("synth: background level must be >= 0");
    if (!(signal_level > background_level))
        throw ValidationError("synth: signal level must exceed the background level");
    if (noise_sd < 0.0) throw ValidationError("synth: noise sd must be >= 0");
    if (signal_level == 0.0 && background_level == 0.0)
        throw ValidationError("synth: all-zero rows (signal and background both 0)");
}

SynthResult generate(const PlantedSpec& spec) {
    spec.validate();
    const std::size_t n_docs = spec.n_attributes * spec.docs_per_attribute;

    std::vector<std::string> attributes;
    attributes.reserve(spec.n_attributes);
    const int attr_width = std::max<int>(1, std::to_string(spec.n_attributes - 1).size());
    for (std::size_t a = 0; a < spec.n_attributes; ++a) {
        std::string num = std::to_string(a);
        attributes.push_back("attr_" + std::string(attr_width - num.size(), '0') + num);
    }

    std::vector<std::string> documents;
    documents.reserve(n_docs);
    const int doc_width = std::max<int>(1, std::to_string(n_docs - 1).size());
    for (std::size_t i = 0; i < n_docs; ++i) {
        std::string num = std::to_string(i);
        documents.push_back("doc_" + std::string(doc_width - num.size(), '0') + num);
    }

    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> noise(0.0, spec.noise_sd);

    std::vector<double> values(n_docs * spec.n_attributes);
    std::map<std::string, std::string> truth;
    for (std::size_t i = 0; i < n_docs; ++i) {
        const std::size_t planted = i % spec.n_attributes;
        truth.emplace(documents[i], attributes[planted]);
        for (std::size_t a = 0; a < spec.n_attributes; ++a) {
            double v = (a == planted) ? spec.signal_level : spec.background_level;
            if (spec.noise_sd > 0.0) v += noise(rng);
            values[i * spec.n_attributes + a] = std::max(0.0, v);
        }
    }

    return SynthResult{Dataset(std::move(documents), std::move(attributes), std::move(values)),
                       std::move(truth)};
}

void write_truth_tsv(const SynthResult& r, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write to '" + path.string() + "'");
    out << "document\tattribute\n";
    for (const auto& doc : r.dataset.documents()) out << doc << '\t' << r.ground_truth.at(doc) << '\n';
}

}  // namespace semdistill
