#include "scalegraph/semscale.hpp"

#include "scalegraph/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace scalegraph {

namespace {

DocVector embed_with_df(const Document& doc,
                        const std::map<std::string, std::int64_t>& df,
                        std::size_t n_docs, const EmbeddingTable& table) {
    std::set<std::string> types;
    for (const auto& tok : doc.tokens) types.insert(tok.surface);

    const auto counts = term_counts(doc);
    std::int64_t max_freq = 0;
    for (const auto& [w, c] : counts) max_freq = std::max(max_freq, c);

    DocVector dv;
    dv.doc_id = doc.id;
    dv.vector = Eigen::VectorXd::Zero(table.dim);
    for (const auto& type : types) {
        const Eigen::VectorXd* e = lookup(table, type);
        if (e == nullptr) {
            ++dv.skipped_types;
            continue;
        }
        const std::string key = lowercase(type);
        const double tf_score =
            static_cast<double>(counts.at(key)) / static_cast<double>(max_freq);
        auto df_it = df.find(key);
        if (df_it == df.end() || df_it->second == 0)
            throw FormatError("document '" + doc.id + "' is not part of the given corpus");
        const double idf_score =
            std::log(static_cast<double>(n_docs) / static_cast<double>(df_it->second));
        dv.vector += tf_score * idf_score * *e;
        ++dv.used_types;
    }
    if (dv.used_types == 0)
        throw FormatError("document '" + doc.id + "' has no types with an embedding");
    dv.vector /= static_cast<double>(dv.used_types);
    return dv;
}

SimilarityGraph make_graph(const std::vector<DocVector>& vectors, bool parallel) {
    if (vectors.size() < 2)
        throw FormatError("similarity graph needs at least 2 documents");
    const long n = static_cast<long>(vectors.size());
    SimilarityGraph graph;
    graph.ids.reserve(vectors.size());
    for (const auto& v : vectors) graph.ids.push_back(v.doc_id);
    graph.weights = Eigen::MatrixXd::Zero(n, n);

    // Each of the n(n-1)/2 pair entries is computed exactly once and is
    // independent of every other, so the parallel fill is bit-identical
    // to the serial one.
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (long i = 0; i < n; ++i) {
        try {
            for (long j = i + 1; j < n; ++j) {
                const double w = cosine(vectors[i].vector, vectors[j].vector);
                graph.weights(i, j) = w;
                graph.weights(j, i) = w;
            }
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return graph;
}

std::vector<std::vector<std::string>> connected_components(const SimilarityGraph& graph) {
    const long n = graph.weights.rows();
    std::vector<int> comp(n, -1);
    int next = 0;
    for (long s = 0; s < n; ++s) {
        if (comp[s] != -1) continue;
        std::vector<long> stack{s};
        comp[s] = next;
        while (!stack.empty()) {
            long v = stack.back();
            stack.pop_back();
            for (long u = 0; u < n; ++u) {
                if (comp[u] == -1 && graph.weights(v, u) != 0.0) {
                    comp[u] = next;
                    stack.push_back(u);
                }
            }
        }
        ++next;
    }
    std::vector<std::vector<std::string>> groups(next);
    for (long v = 0; v < n; ++v) groups[comp[v]].push_back(graph.ids[v]);
    return groups;
}

std::string join_ids(const std::vector<std::string>& ids, std::size_t limit = 6) {
    std::ostringstream out;
    for (std::size_t i = 0; i < ids.size() && i < limit; ++i) {
        if (i > 0) out << ", ";
        out << ids[i];
    }
    if (ids.size() > limit) out << ", ...";
    return out.str();
}

} // namespace

Normalization normalization_from_name(const std::string& name) {
    if (name == "raw") return Normalization::Raw;
    if (name == "zscore") return Normalization::ZScore;
    if (name == "unit") return Normalization::UnitInterval;
    throw FormatError("unknown normalization: " + name);
}

std::string normalization_name(Normalization mode) {
    switch (mode) {
        case Normalization::Raw: return "raw";
        case Normalization::ZScore: return "zscore";
        case Normalization::UnitInterval: return "unit-interval";
    }
    return "raw";
}

DocVector embed_document(const Document& doc, const Corpus& corpus,
                         const EmbeddingTable& table) {
    return embed_with_df(doc, document_frequencies(corpus), corpus.size(), table);
}

std::vector<DocVector> embed_corpus_serial(const Corpus& corpus, const EmbeddingTable& table) {
    const auto df = document_frequencies(corpus);
    std::vector<DocVector> vectors(corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i)
        vectors[i] = embed_with_df(corpus.documents[i], df, corpus.size(), table);
    return vectors;
}

std::vector<DocVector> embed_corpus(const Corpus& corpus, const EmbeddingTable& table) {
    const auto df = document_frequencies(corpus);
    std::vector<DocVector> vectors(corpus.size());
    const long n = static_cast<long>(corpus.size());
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) {
        try {
            vectors[i] = embed_with_df(corpus.documents[i], df, corpus.size(), table);
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return vectors;
}

double cosine(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const double na = a.norm();
    const double nb = b.norm();
    if (na == 0.0 || nb == 0.0) throw FormatError("cosine of a zero-norm vector");
    const double c = a.dot(b) / (na * nb);
    return std::clamp(c, -1.0, 1.0);
}

SimilarityGraph build_similarity_graph(const std::vector<DocVector>& vectors) {
    return make_graph(vectors, true);
}

SimilarityGraph build_similarity_graph_serial(const std::vector<DocVector>& vectors) {
    return make_graph(vectors, false);
}

std::pair<std::string, std::string> select_pivots(const SimilarityGraph& graph) {
    const long n = graph.weights.rows();
    if (n < 2) throw FormatError("pivot selection needs at least 2 documents");
    bool have = false;
    double best_w = 0.0;
    std::pair<std::string, std::string> best;
    for (long i = 0; i < n; ++i) {
        for (long j = i + 1; j < n; ++j) {
            auto pair = graph.ids[i] < graph.ids[j]
                            ? std::make_pair(graph.ids[i], graph.ids[j])
                            : std::make_pair(graph.ids[j], graph.ids[i]);
            const double w = graph.weights(i, j);
            if (!have || w < best_w || (w == best_w && pair < best)) {
                have = true;
                best_w = w;
                best = pair;
            }
        }
    }
    return best;
}

ScalingResult propagate(const SimilarityGraph& graph,
                        const std::pair<std::string, std::string>& pivots) {
    const long n = graph.weights.rows();
    if (pivots.first == pivots.second)
        throw FormatError("pivots must be distinct documents");
    long p0 = -1, p1 = -1;
    for (long i = 0; i < n; ++i) {
        if (graph.ids[i] == pivots.first) p0 = i;
        if (graph.ids[i] == pivots.second) p1 = i;
    }
    if (p0 < 0) throw FormatError("pivot '" + pivots.first + "' is not a graph vertex");
    if (p1 < 0) throw FormatError("pivot '" + pivots.second + "' is not a graph vertex");

    std::vector<long> unlabeled;
    unlabeled.reserve(n - 2);
    for (long i = 0; i < n; ++i)
        if (i != p0 && i != p1) unlabeled.push_back(i);

    if (!unlabeled.empty()) {
        const auto components = connected_components(graph);
        if (components.size() > 1) {
            std::ostringstream msg;
            msg << "similarity graph is disconnected; propagation is undefined across "
                   "components:";
            for (const auto& group : components)
                msg << " {" << join_ids(group) << "}";
            throw DegenerateError(msg.str());
        }
    }

    Eigen::VectorXd scores = Eigen::VectorXd::Zero(n);
    scores[p0] = -1.0;
    scores[p1] = 1.0;

    const long u = static_cast<long>(unlabeled.size());
    if (u > 0) {
        const Eigen::VectorXd degree = graph.weights.rowwise().sum();
        Eigen::MatrixXd l_uu(u, u);
        Eigen::MatrixXd l_ul(u, 2);
        for (long a = 0; a < u; ++a) {
            const long i = unlabeled[a];
            for (long b = 0; b < u; ++b) {
                const long j = unlabeled[b];
                l_uu(a, b) = (i == j ? degree[i] : 0.0) - graph.weights(i, j);
            }
            l_ul(a, 0) = -graph.weights(i, p0);
            l_ul(a, 1) = -graph.weights(i, p1);
        }
        Eigen::Vector2d y_l(-1.0, 1.0);
        const Eigen::VectorXd rhs = -(l_ul * y_l);
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(l_uu);
        const Eigen::VectorXd f_u = lu.solve(rhs);

        const double scale = l_uu.cwiseAbs().maxCoeff() * f_u.cwiseAbs().maxCoeff() +
                             rhs.cwiseAbs().maxCoeff();
        const double residual = (l_uu * f_u - rhs).cwiseAbs().maxCoeff();
        if (!f_u.allFinite() || residual > 1e-8 * std::max(scale, 1.0))
            throw DegenerateError("propagation system is numerically singular "
                                  "(degenerate similarity graph)");
        for (long a = 0; a < u; ++a) scores[unlabeled[a]] = f_u[a];
    }

    ScalingResult result;
    result.pivot_low = graph.ids[p0];
    result.pivot_high = graph.ids[p1];
    result.normalization = Normalization::Raw;
    result.algorithm = "semscale";
    for (long i = 0; i < n; ++i) {
        if (std::abs(scores[i]) > 1.0 + 1e-9)
            throw DegenerateError("propagated score for '" + graph.ids[i] + "' (" +
                                  std::to_string(scores[i]) +
                                  ") leaves [-1, 1]; the graph weights are not usable");
        result.positions[graph.ids[i]] = scores[i];
    }
    return result;
}

ScalingResult normalize_positions(const ScalingResult& result, Normalization mode) {
    ScalingResult out = result;
    out.normalization = mode;
    if (mode == Normalization::Raw || result.positions.empty()) return out;

    const double n = static_cast<double>(result.positions.size());
    double mean = 0.0;
    double min = result.positions.begin()->second;
    double max = min;
    for (const auto& [id, v] : result.positions) {
        mean += v;
        min = std::min(min, v);
        max = std::max(max, v);
    }
    mean /= n;

    if (mode == Normalization::ZScore) {
        double var = 0.0;
        for (const auto& [id, v] : result.positions) var += (v - mean) * (v - mean);
        var /= n;  // population variance
        if (var == 0.0)
            throw DegenerateError("z-scoring constant positions is undefined");
        const double sd = std::sqrt(var);
        for (auto& [id, v] : out.positions) v = (v - mean) / sd;
    } else {
        if (max == min)
            throw DegenerateError("unit-interval scaling of constant positions is undefined");
        for (auto& [id, v] : out.positions) v = (v - min) / (max - min);
    }
    return out;
}

SemscaleRun run_semscale(const Corpus& corpus, const EmbeddingTable& table,
                         const SemscaleOptions& options) {
    if (corpus.size() < 2)
        throw FormatError("scaling needs at least 2 documents");
    SemscaleRun run;
    run.vectors = embed_corpus(corpus, table);
    const SimilarityGraph graph = build_similarity_graph(run.vectors);
    if (options.pivots) {
        run.pivots = *options.pivots;
        run.pivots_overridden = true;
    } else {
        run.pivots = select_pivots(graph);
    }
    ScalingResult raw = propagate(graph, run.pivots);
    run.result = normalize_positions(raw, options.normalization);
    run.result.algorithm = "semscale";
    return run;
}

ScalingResult semscale(const Corpus& corpus, const EmbeddingTable& table,
                       Normalization normalization) {
    SemscaleOptions options;
    options.normalization = normalization;
    return run_semscale(corpus, table, options).result;
}

} // namespace scalegraph
