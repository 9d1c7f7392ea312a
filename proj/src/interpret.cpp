#include "scalegraph/interpret.hpp"

#include "scalegraph/errors.hpp"

#include <algorithm>
#include <set>

namespace scalegraph {

namespace {

// Extreme documents: the pivots when they still sit at the ends of the
// supplied scores, otherwise the min/max scored documents.
std::pair<std::string, std::string> extreme_docs(const ScalingResult& result, bool& used_pivots) {
    if (result.positions.empty()) throw FormatError("scaling result has no positions");
    auto lowest = result.positions.begin();
    auto highest = result.positions.begin();
    for (auto it = result.positions.begin(); it != result.positions.end(); ++it) {
        if (it->second < lowest->second) lowest = it;
        if (it->second > highest->second) highest = it;
    }
    const bool have_pivots = !result.pivot_low.empty() && !result.pivot_high.empty();
    if (have_pivots) {
        auto lo = result.positions.find(result.pivot_low);
        auto hi = result.positions.find(result.pivot_high);
        if (lo == result.positions.end() || hi == result.positions.end())
            throw FormatError("pivots are missing from the scaling result");
        if (lo->second == lowest->second && hi->second == highest->second) {
            used_pivots = true;
            return {result.pivot_low, result.pivot_high};
        }
    }
    used_pivots = false;
    return {lowest->first, highest->first};
}

std::vector<ExtremeTerm> top_by_margin(std::vector<ExtremeTerm> terms, std::size_t k,
                                       bool toward_low) {
    for (auto& t : terms) t.margin = toward_low ? t.score_low - t.score_high
                                                : t.score_high - t.score_low;
    std::sort(terms.begin(), terms.end(), [](const ExtremeTerm& a, const ExtremeTerm& b) {
        if (a.margin != b.margin) return a.margin > b.margin;
        return a.term < b.term;
    });
    if (terms.size() > k) terms.resize(k);
    return terms;
}

} // namespace

ExtremeTermReport extreme_terms(const Corpus& corpus, const EmbeddingTable& table,
                                const ScalingResult& result, std::size_t k,
                                const TokenFilter& filter) {
    ExtremeTermReport report;
    auto [low_id, high_id] = extreme_docs(result, report.used_pivots);
    report.low_doc = low_id;
    report.high_doc = high_id;

    const Document* low_doc = corpus.find(low_id);
    const Document* high_doc = corpus.find(high_id);
    if (low_doc == nullptr || high_doc == nullptr)
        throw FormatError("extreme documents are not part of the given corpus");

    const Eigen::VectorXd low_vec = embed_document(*low_doc, corpus, table).vector;
    const Eigen::VectorXd high_vec = embed_document(*high_doc, corpus, table).vector;

    std::set<std::string> candidates;
    for (const auto& doc : apply_filter(corpus, filter).corpus.documents)
        for (const auto& tok : doc.tokens) candidates.insert(tok.surface);

    std::vector<ExtremeTerm> scored;
    for (const auto& term : candidates) {
        const Eigen::VectorXd* e = lookup(table, term);
        if (e == nullptr || e->norm() == 0.0) continue;
        ExtremeTerm t;
        t.term = term;
        t.score_low = cosine(*e, low_vec);
        t.score_high = cosine(*e, high_vec);
        scored.push_back(std::move(t));
    }

    report.low_terms = top_by_margin(scored, k, true);
    report.high_terms = top_by_margin(std::move(scored), k, false);
    return report;
}

} // namespace scalegraph
