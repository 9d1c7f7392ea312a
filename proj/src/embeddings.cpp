#include "scalegraph/embeddings.hpp"

#include "scalegraph/errors.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace scalegraph {

namespace {

bool parse_double(const std::string& s, double& out) {
    const char* begin = s.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    return end == begin + s.size() && !s.empty() && std::isfinite(out);
}

bool parse_count_dim_header(const std::string& line, long& count, long& dim) {
    std::istringstream ss(line);
    std::string a, b, rest;
    if (!(ss >> a >> b) || (ss >> rest)) return false;
    char* end = nullptr;
    count = std::strtol(a.c_str(), &end, 10);
    if (end != a.c_str() + a.size() || count <= 0) return false;
    dim = std::strtol(b.c_str(), &end, 10);
    return end == b.c_str() + b.size() && dim > 0;
}

} // namespace

EmbeddingTable load_embeddings(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot read embeddings file: " + path.string());

    EmbeddingTable table;
    std::string line;
    std::size_t lineno = 0;
    long header_count = -1, header_dim = -1;
    std::size_t body_lines = 0;

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        if (lineno == 1 && parse_count_dim_header(line, header_count, header_dim)) continue;

        const std::string where = path.string() + ":" + std::to_string(lineno);
        std::istringstream ss(line);
        std::string word;
        ss >> word;
        std::vector<double> values;
        std::string field;
        while (ss >> field) {
            double v = 0.0;
            if (!parse_double(field, v))
                throw FormatError(where + ": non-numeric component '" + field + "'");
            values.push_back(v);
        }
        if (values.empty()) throw FormatError(where + ": no vector components");

        if (table.dim == 0) {
            if (header_dim > 0 && static_cast<long>(values.size()) != header_dim)
                throw FormatError(where + ": dimension " + std::to_string(values.size()) +
                                  " disagrees with header " + std::to_string(header_dim));
            table.dim = static_cast<int>(values.size());
        } else if (static_cast<int>(values.size()) != table.dim) {
            throw FormatError(where + ": dimension " + std::to_string(values.size()) +
                              " disagrees with " + std::to_string(table.dim));
        }
        ++body_lines;
        if (!table.entries.count(word))
            table.entries.emplace(word, Eigen::Map<Eigen::VectorXd>(values.data(),
                                                                    static_cast<long>(values.size())));
    }

    if (table.entries.empty()) throw FormatError("empty embeddings file: " + path.string());
    if (header_count > 0 && static_cast<long>(body_lines) != header_count)
        throw FormatError(path.string() + ": header announces " + std::to_string(header_count) +
                          " entries but body has " + std::to_string(body_lines));
    return table;
}

const Eigen::VectorXd* lookup(const EmbeddingTable& table, const std::string& word) {
    auto it = table.entries.find(word);
    if (it != table.entries.end()) return &it->second;
    const std::string lower = lowercase(word);
    if (lower != word) {
        it = table.entries.find(lower);
        if (it != table.entries.end()) return &it->second;
    }
    return nullptr;
}

CoverageReport coverage(const EmbeddingTable& table, const Corpus& corpus, double threshold) {
    CoverageReport report;
    report.threshold = threshold;
    for (const auto& doc : corpus.documents) {
        std::set<std::string> types;
        for (const auto& tok : doc.tokens) types.insert(tok.surface);
        DocCoverage cov;
        cov.doc_id = doc.id;
        cov.types = types.size();
        for (const auto& t : types)
            if (lookup(table, t) != nullptr) ++cov.hits;
        cov.ratio = cov.types == 0 ? 0.0
                                   : static_cast<double>(cov.hits) / static_cast<double>(cov.types);
        cov.flagged = cov.ratio < threshold;
        report.docs.push_back(std::move(cov));
    }
    return report;
}

} // namespace scalegraph
