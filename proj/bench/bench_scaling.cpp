// Serial-vs-OpenMP comparison for the three data-parallel kernels:
// pairwise similarity, corpus embedding, and the wordfish update phases.

#include "scalegraph/corpus.hpp"
#include "scalegraph/embeddings.hpp"
#include "scalegraph/semscale.hpp"
#include "scalegraph/wordfish.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace scalegraph;

namespace {

std::vector<DocVector> random_vectors(long n, int dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<DocVector> vectors;
    for (long i = 0; i < n; ++i) {
        Eigen::VectorXd v(dim);
        for (int d = 0; d < dim; ++d) v(d) = normal(rng);
        vectors.push_back({"doc" + std::to_string(i), v, 1, 0});
    }
    return vectors;
}

struct EmbeddingFixture {
    Corpus corpus;
    EmbeddingTable table;
};

EmbeddingFixture embedding_fixture(long docs, long words_per_doc, long vocab, int dim) {
    std::mt19937_64 rng(99);
    std::normal_distribution<double> normal(0.0, 1.0);
    EmbeddingFixture fx;
    fx.table.dim = dim;
    std::vector<std::string> vocabulary;
    for (long w = 0; w < vocab; ++w) {
        vocabulary.push_back("word" + std::to_string(w));
        Eigen::VectorXd v(dim);
        for (int d = 0; d < dim; ++d) v(d) = normal(rng);
        fx.table.entries[vocabulary.back()] = v;
    }
    for (long i = 0; i < docs; ++i) {
        Document doc;
        doc.id = "doc" + std::to_string(i);
        for (long t = 0; t < words_per_doc; ++t)
            doc.tokens.push_back({vocabulary[rng() % vocab], {}, {}, {}, {}});
        fx.corpus.documents.push_back(std::move(doc));
    }
    return fx;
}

CountMatrix wordfish_fixture(long n, long v, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::string> ids, vocab;
    for (long i = 0; i < n; ++i) ids.push_back("doc" + std::to_string(i));
    for (long j = 0; j < v; ++j) vocab.push_back("w" + std::to_string(j));
    std::vector<std::int64_t> cells(n * v);
    for (auto& c : cells) c = static_cast<std::int64_t>(rng() % 7);
    for (long i = 0; i < n; ++i) cells[i * v] += 1;  // no zero rows
    return make_count_matrix(ids, vocab, cells);
}

void bm_similarity_serial(benchmark::State& state) {
    const auto vectors = random_vectors(state.range(0), 300, 42);
    for (auto _ : state) {
        auto graph = build_similarity_graph_serial(vectors);
        benchmark::DoNotOptimize(graph.weights.data());
    }
}

void bm_similarity_openmp(benchmark::State& state) {
    const auto vectors = random_vectors(state.range(0), 300, 42);
    for (auto _ : state) {
        auto graph = build_similarity_graph(vectors);
        benchmark::DoNotOptimize(graph.weights.data());
    }
}

void bm_embed_serial(benchmark::State& state) {
    const auto fx = embedding_fixture(state.range(0), 2000, 5000, 300);
    for (auto _ : state) {
        auto vectors = embed_corpus_serial(fx.corpus, fx.table);
        benchmark::DoNotOptimize(vectors.data());
    }
}

void bm_embed_openmp(benchmark::State& state) {
    const auto fx = embedding_fixture(state.range(0), 2000, 5000, 300);
    for (auto _ : state) {
        auto vectors = embed_corpus(fx.corpus, fx.table);
        benchmark::DoNotOptimize(vectors.data());
    }
}

void bm_wordfish_serial(benchmark::State& state) {
    const auto counts = wordfish_fixture(25, state.range(0), 3);
    FitOptions options;
    options.parallel = false;
    options.max_iter = 20;
    for (auto _ : state) {
        auto model = fit(counts, options);
        benchmark::DoNotOptimize(model.theta.data());
    }
}

void bm_wordfish_openmp(benchmark::State& state) {
    const auto counts = wordfish_fixture(25, state.range(0), 3);
    FitOptions options;
    options.max_iter = 20;
    for (auto _ : state) {
        auto model = fit(counts, options);
        benchmark::DoNotOptimize(model.theta.data());
    }
}

} // namespace

BENCHMARK(bm_similarity_serial)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_similarity_openmp)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_embed_serial)->Arg(25)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_embed_openmp)->Arg(25)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_wordfish_serial)->Arg(2000)->Arg(8000)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_wordfish_openmp)->Arg(2000)->Arg(8000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
