#pragma once

#include "scalegraph/corpus.hpp"
#include "scalegraph/embeddings.hpp"
#include "scalegraph/semscale.hpp"

#include <string>
#include <vector>

namespace scalegraph {

struct ExtremeTerm {
    std::string term;
    double score_low = 0.0;   // cosine to the low-extreme document vector
    double score_high = 0.0;  // cosine to the high-extreme document vector
    double margin = 0.0;      // difference toward the owning pole
};

struct ExtremeTermReport {
    std::string low_doc;   // extreme documents the terms are scored against
    std::string high_doc;
    bool used_pivots = false;  // false: min/max-position convention was used
    std::vector<ExtremeTerm> low_terms;   // margins non-increasing
    std::vector<ExtremeTerm> high_terms;
};

// Ranks candidate terms (optionally restricted by `filter`, e.g. verbs)
// by how much closer their embedding sits to one scale extreme than to
// the other. Extremes are the pivot documents when the result still
// carries them at its ends, else the min/max scored documents.
ExtremeTermReport extreme_terms(const Corpus& corpus, const EmbeddingTable& table,
                                const ScalingResult& result, std::size_t k,
                                const TokenFilter& filter = {});

} // namespace scalegraph
