#pragma once

#include "scalegraph/corpus.hpp"

#include <Eigen/Core>

#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

namespace scalegraph {

struct EmbeddingTable {
    int dim = 0;
    std::unordered_map<std::string, Eigen::VectorXd> entries;
};

// Word2vec text format: optional "count dim" header, then one
// "word v1 ... v_dim" line per entry. Duplicates keep the first vector.
EmbeddingTable load_embeddings(const std::filesystem::path& path);

// Exact match, then lowercase fallback, else nullptr.
const Eigen::VectorXd* lookup(const EmbeddingTable& table, const std::string& word);

struct DocCoverage {
    std::string doc_id;
    std::size_t types = 0;  // unique surface forms
    std::size_t hits = 0;   // types with an embedding
    double ratio = 0.0;
    bool flagged = false;
};

struct CoverageReport {
    double threshold = 0.0;
    std::vector<DocCoverage> docs;  // corpus order
};

CoverageReport coverage(const EmbeddingTable& table, const Corpus& corpus,
                        double threshold = 0.5);

} // namespace scalegraph
