#include "semdistill/dataset.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "semdistill/errors.hpp"

namespace semdistill {

namespace {

// Splits one line on tabs. A trailing '\r' (CRLF input) is stripped first.
std::vector<std::string> split_tsv_line(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return fields;
}

double parse_cell(const std::string& text, std::size_t line, std::size_t column) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        throw ParseError("non-numeric cell '" + text + "'", line, column);
    if (!std::isfinite(value))
        throw ParseError("non-finite cell '" + text + "'", line, column);
    return value;
}

}  // namespace

Dataset::Dataset(std::vector<std::string> documents, std::vector<std::string> attributes,
                 std::vector<double> values)
    : documents_(std::move(documents)),
      attributes_(std::move(attributes)),
      values_(std::move(values)) {
    if (documents_.empty()) throw ValidationError("dataset has no documents");
    if (attributes_.empty()) throw ValidationError("dataset has no attributes");
    if (values_.size() != documents_.size() * attributes_.size())
        throw ValidationError("dataset value count does not match dimensions");

    std::unordered_set<std::string> seen;
    for (const auto& id : documents_)
        if (!seen.insert(id).second)
            throw ValidationError("duplicate document id '" + id + "'");
    for (const auto& id : attributes_)
        if (!seen.insert(id).second)
            throw ValidationError("attribute id '" + id +
                                  "' collides with another identifier");

    nonnegative_ = true;
    for (double v : values_) {
        if (!std::isfinite(v)) throw ValidationError("dataset contains a non-finite value");
        if (v < 0.0) nonnegative_ = false;
    }
    for (std::size_t d = 0; d < documents_.size(); ++d) {
        bool all_zero = true;
        for (std::size_t a = 0; a < attributes_.size(); ++a)
            if (value(d, a) != 0.0) {
                all_zero = false;
                break;
            }
        if (all_zero)
            throw ValidationError("document '" + documents_[d] +
                                  "' has an all-zero row; it cannot be normalized");
    }
}

std::string Dataset::content_hash() const {
    const std::string bytes = to_tsv(*this);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    static const char* hex = "0123456789abcdef";
    for (int i = 15; i >= 0; --i) {
        buf[i] = hex[h & 0xf];
        h >>= 4;
    }
    buf[16] = '\0';
    return std::string(buf);
}

Dataset load_matrix(const std::filesystem::path& path, const IngestOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open input file '" + path.string() + "'");
    return load_matrix(in, options, path.string());
}

Dataset load_matrix(std::istream& in, const IngestOptions& options,
                    const std::string& source) {
    std::string line;
    if (!std::getline(in, line))
        throw ValidationError("empty input '" + source + "'");

    const std::vector<std::string> header = split_tsv_line(line);
    if (header.size() < 2)
        throw ParseError("header must contain an id column and at least one attribute", 1, 1);
    std::vector<std::string> attributes(header.begin() + 1, header.end());
    for (std::size_t i = 0; i < attributes.size(); ++i)
        if (attributes[i].empty())
            throw ParseError("empty attribute name", 1, i + 2);

    std::vector<std::string> documents;
    std::vector<double> values;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;  // tolerate a trailing blank line
        const std::vector<std::string> fields = split_tsv_line(line);
        if (fields.size() != header.size())
            throw ParseError("row has " + std::to_string(fields.size()) +
                                 " fields, expected " + std::to_string(header.size()),
                             line_no, 1);
        if (fields[0].empty()) throw ParseError("empty document id", line_no, 1);
        documents.push_back(fields[0]);
        for (std::size_t i = 1; i < fields.size(); ++i)
            values.push_back(parse_cell(fields[i], line_no, i + 1));
    }
    if (documents.empty())
        throw ValidationError("input '" + source + "' contains no data rows");

    Dataset d(std::move(documents), std::move(attributes), std::move(values));
    if (options.apply_log) return log_transform(d, options.log_offset);
    return d;
}

Dataset log_transform(const Dataset& d, double offset) {
    if (offset < 0.0) throw ValidationError("log offset must be nonnegative");
    std::vector<double> values(d.values().size());
    for (std::size_t doc = 0; doc < d.n_documents(); ++doc) {
        for (std::size_t attr = 0; attr < d.n_attributes(); ++attr) {
            const double shifted = d.value(doc, attr) + offset;
            if (shifted <= 0.0)
                throw ValidationError("log transform undefined for cell (" +
                                      d.documents()[doc] + ", " + d.attributes()[attr] +
                                      ") = " + format_double(d.value(doc, attr)) +
                                      " with offset " + format_double(offset));
            values[doc * d.n_attributes() + attr] = std::log(shifted);
        }
    }
    return Dataset(d.documents(), d.attributes(), std::move(values));
}

std::string format_double(double x) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    (void)ec;
    return std::string(buf, ptr);
}

std::string to_tsv(const Dataset& d) {
    std::ostringstream out;
    out << "id";
    for (const auto& a : d.attributes()) out << '\t' << a;
    out << '\n';
    for (std::size_t doc = 0; doc < d.n_documents(); ++doc) {
        out << d.documents()[doc];
        for (std::size_t attr = 0; attr < d.n_attributes(); ++attr)
            out << '\t' << format_double(d.value(doc, attr));
        out << '\n';
    }
    return out.str();
}

void write_tsv(const Dataset& d, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write to '" + path.string() + "'");
    out << to_tsv(d);
    if (!out) throw ValidationError("write failed for '" + path.string() + "'");
}

}  // namespace semdistill
