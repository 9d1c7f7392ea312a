#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace scalegraph {

struct Token {
    std::string surface;                 // non-empty
    std::optional<std::string> lemma;    // absent, never ""
    std::optional<std::string> upos;     // universal POS tag
    std::optional<std::string> ner;      // NER type
    std::optional<std::string> entity;   // knowledge-base IRI
};

struct Document {
    std::string id;
    std::vector<Token> tokens;
};

struct Corpus {
    std::vector<Document> documents;

    std::size_t size() const { return documents.size(); }
    const Document* find(const std::string& id) const;
};

// Document-by-word occurrence counts. Vocabulary keys are lowercased
// surface forms, sorted lexicographically; words with zero total count
// cannot appear by construction.
struct CountMatrix {
    std::vector<std::string> doc_ids;     // corpus order
    std::vector<std::string> vocabulary;  // sorted
    std::vector<std::int64_t> counts;     // row-major, n_docs() x n_words()

    std::size_t n_docs() const { return doc_ids.size(); }
    std::size_t n_words() const { return vocabulary.size(); }
    std::int64_t at(std::size_t i, std::size_t j) const {
        return counts[i * vocabulary.size() + j];
    }
    std::int64_t row_sum(std::size_t i) const;
};

enum class FilterMode { All, PosSet, Lemmas, NamedEntities, Entities };

struct TokenFilter {
    FilterMode mode = FilterMode::All;
    std::set<std::string> pos_set;    // required iff mode == PosSet
    std::set<std::string> ner_types;  // optional restriction for NamedEntities
};

// CLI presets: all|nouns|verbs|adjectives|propn|lemmas|ner|entities.
TokenFilter filter_preset(const std::string& name);

struct FilterResult {
    Corpus corpus;
    std::vector<std::string> dropped_ids;  // documents the filter emptied
};

// Directory of *.txt (one document per file, id = stem, sorted by file
// name) or a single .tsv with id<TAB>text rows in row order.
Corpus load_plain_corpus(const std::filesystem::path& path);

// Directory of per-document *.tsv files: five columns per token line
// (surface, lemma, upos, ner, entity), "_" for absent, blank line =
// sentence break (discarded).
Corpus load_annotated_corpus(const std::filesystem::path& path);

// Detects the layout of `path` and dispatches to one of the above.
Corpus load_corpus(const std::filesystem::path& path);

FilterResult apply_filter(const Corpus& corpus, const TokenFilter& filter);

CountMatrix build_count_matrix(const Corpus& corpus);

// Builds a CountMatrix from raw data, enforcing the construction
// invariants: vocabulary re-sorted, all-zero columns dropped, empty rows
// and duplicate ids rejected.
CountMatrix make_count_matrix(std::vector<std::string> doc_ids,
                              std::vector<std::string> vocabulary,
                              std::vector<std::int64_t> counts);

// Lowercased type counts of one document / document frequencies of the
// whole corpus. These share their keys with tf/idf/tfidf.
std::map<std::string, std::int64_t> term_counts(const Document& doc);
std::map<std::string, std::int64_t> document_frequencies(const Corpus& corpus);

double tf(const std::string& word, const Document& doc);
double idf(const std::string& word, const Corpus& corpus);
double tfidf(const std::string& word, const Document& doc, const Corpus& corpus);

// ASCII lowercasing; multi-byte UTF-8 sequences pass through unchanged.
std::string lowercase(const std::string& s);

// Splits on (Unicode) whitespace and emits punctuation as standalone tokens.
std::vector<std::string> tokenize(const std::string& text);

} // namespace scalegraph
