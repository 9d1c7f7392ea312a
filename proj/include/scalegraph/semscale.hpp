#pragma once

#include "scalegraph/corpus.hpp"
#include "scalegraph/embeddings.hpp"

#include <Eigen/Core>

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace scalegraph {

struct DocVector {
    std::string doc_id;
    Eigen::VectorXd vector;
    std::size_t used_types = 0;     // unique types that contributed
    std::size_t skipped_types = 0;  // unique types without an embedding
};

// Fully connected graph over documents; weights(i,j) is the cosine of the
// document vectors, symmetric with a zero diagonal.
struct SimilarityGraph {
    std::vector<std::string> ids;
    Eigen::MatrixXd weights;
};

enum class Normalization { Raw, ZScore, UnitInterval };

Normalization normalization_from_name(const std::string& name);  // raw|zscore|unit
std::string normalization_name(Normalization mode);

struct ScalingResult {
    std::map<std::string, double> positions;
    std::string pivot_low;   // labeled -1
    std::string pivot_high;  // labeled +1
    Normalization normalization = Normalization::Raw;
    std::string algorithm;
};

// tf-idf weighted average of the embeddings of the document's unique
// types; types without an embedding are skipped and counted.
DocVector embed_document(const Document& doc, const Corpus& corpus,
                         const EmbeddingTable& table);

std::vector<DocVector> embed_corpus(const Corpus& corpus, const EmbeddingTable& table);
// Serial reference; bit-identical to embed_corpus.
std::vector<DocVector> embed_corpus_serial(const Corpus& corpus, const EmbeddingTable& table);

double cosine(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

SimilarityGraph build_similarity_graph(const std::vector<DocVector>& vectors);
// Serial reference; bit-identical to build_similarity_graph.
SimilarityGraph build_similarity_graph_serial(const std::vector<DocVector>& vectors);

// The least-similar pair, first id lexicographically smaller; ties broken
// by smallest (id, id).
std::pair<std::string, std::string> select_pivots(const SimilarityGraph& graph);

// Harmonic-function label propagation from the pivots (fixed at -1/+1)
// through the partitioned unnormalized Laplacian.
ScalingResult propagate(const SimilarityGraph& graph,
                        const std::pair<std::string, std::string>& pivots);

ScalingResult normalize_positions(const ScalingResult& result, Normalization mode);

struct SemscaleOptions {
    Normalization normalization = Normalization::Raw;
    std::optional<std::pair<std::string, std::string>> pivots;  // overrides selection
};

struct SemscaleRun {
    ScalingResult result;
    std::vector<DocVector> vectors;
    std::pair<std::string, std::string> pivots;
    bool pivots_overridden = false;
};

SemscaleRun run_semscale(const Corpus& corpus, const EmbeddingTable& table,
                         const SemscaleOptions& options = {});

// End-to-end composition with automatic pivots.
ScalingResult semscale(const Corpus& corpus, const EmbeddingTable& table,
                       Normalization normalization = Normalization::Raw);

} // namespace scalegraph
