#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace semdistill {

struct IngestOptions {
    bool apply_log = false;  // replace every entry x by ln(x + log_offset)
    double log_offset = 0.0;
};

/// Immutable object-by-attribute measurement matrix. Rows are documents
/// (objects), columns are attributes (contexts). Values are stored row-major.
class Dataset {
public:
    Dataset(std::vector<std::string> documents, std::vector<std::string> attributes,
            std::vector<double> values);

    std::size_t n_documents() const { return documents_.size(); }
    std::size_t n_attributes() const { return attributes_.size(); }

    const std::vector<std::string>& documents() const { return documents_; }
    const std::vector<std::string>& attributes() const { return attributes_; }

    double value(std::size_t doc, std::size_t attr) const {
        return values_[doc * attributes_.size() + attr];
    }
    std::span<const double> row(std::size_t doc) const {
        return {values_.data() + doc * attributes_.size(), attributes_.size()};
    }
    const std::vector<double>& values() const { return values_; }

    /// True when every entry is >= 0. Downstream kernel auto-selection keys
    /// off this: the cos-half similarity is only valid on nonnegative data.
    bool nonnegative() const { return nonnegative_; }

    /// FNV-1a 64 over the canonical TSV serialization, as a hex string.
    std::string content_hash() const;

private:
    std::vector<std::string> documents_;
    std::vector<std::string> attributes_;
    std::vector<double> values_;
    bool nonnegative_ = false;
};

/// Parse a TSV file: header `id<TAB>attr...`, one row per document.
/// Accepts LF and CRLF endings. Throws ParseError / ValidationError on
/// malformed input (wrong row length, duplicate ids, non-numeric cells,
/// all-zero rows).
Dataset load_matrix(const std::filesystem::path& path, const IngestOptions& options = {});

/// Same parser over an already-open stream; `source` names it in errors.
Dataset load_matrix(std::istream& in, const IngestOptions& options = {},
                    const std::string& source = "<stream>");

/// Entry-wise x -> ln(x + offset). Throws ValidationError naming the first
/// offending cell when x + offset <= 0.
Dataset log_transform(const Dataset& d, double offset);

/// Canonical TSV form: shortest round-trip decimal for every value, LF line
/// endings. load_matrix(write_tsv(d)) reproduces d bit-exactly.
void write_tsv(const Dataset& d, const std::filesystem::path& path);
std::string to_tsv(const Dataset& d);

/// Shortest decimal string that parses back to exactly `x`.
std::string format_double(double x);

}  // namespace semdistill
