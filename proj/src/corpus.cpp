#include "scalegraph/corpus.hpp"

#include "scalegraph/errors.hpp"
#include "scalegraph/log.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace fs = std::filesystem;

namespace scalegraph {

namespace {

// Decodes the UTF-8 sequence starting at s[i]; advances i past it.
// Malformed bytes are returned as-is so no input can make loading fail.
char32_t next_codepoint(const std::string& s, std::size_t& i) {
    const auto byte = [&](std::size_t k) { return static_cast<unsigned char>(s[k]); };
    unsigned char b0 = byte(i);
    if (b0 < 0x80) {
        ++i;
        return b0;
    }
    int len = 0;
    char32_t cp = 0;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        cp = b0 & 0x07;
    } else {
        ++i;
        return b0;
    }
    if (i + len > s.size()) {
        ++i;
        return b0;
    }
    for (int k = 1; k < len; ++k) {
        unsigned char bk = byte(i + k);
        if ((bk & 0xC0) != 0x80) {
            ++i;
            return b0;
        }
        cp = (cp << 6) | (bk & 0x3F);
    }
    i += len;
    return cp;
}

bool is_space_cp(char32_t cp) {
    switch (cp) {
        case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
        case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
        case 0x202F: case 0x205F: case 0x3000:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200A;
    }
}

bool is_punct_cp(char32_t cp) {
    if (cp < 0x80) return std::ispunct(static_cast<int>(cp)) != 0;
    switch (cp) {
        case 0xA1: case 0xAB: case 0xB7: case 0xBB: case 0xBF:
        case 0x3001: case 0x3002:
            return true;
        default:
            // general punctuation block minus the space separators
            return (cp >= 0x2010 && cp <= 0x2027) || (cp >= 0x2030 && cp <= 0x205E);
    }
}

void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

std::string read_whole_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot read file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<fs::path> sorted_files_with_extension(const fs::path& dir, const std::string& ext) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ext)
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
    return files;
}

void check_unique_ids(const Corpus& corpus) {
    std::unordered_set<std::string> seen;
    for (const auto& doc : corpus.documents) {
        if (!seen.insert(doc.id).second)
            throw FormatError("duplicate document id: " + doc.id);
    }
}

Document plain_document(const std::string& id, const std::string& text, const std::string& origin) {
    Document doc;
    doc.id = id;
    for (auto& surface : tokenize(text)) doc.tokens.push_back(Token{std::move(surface), {}, {}, {}, {}});
    if (doc.tokens.empty())
        throw FormatError("document with zero tokens: " + origin);
    return doc;
}

std::optional<std::string> field_or_absent(std::string value) {
    if (value.empty() || value == "_") return std::nullopt;
    return value;
}

Corpus load_plain_tsv(const fs::path& path) {
    Corpus corpus;
    std::ifstream in(path);
    if (!in) throw FormatError("cannot read file: " + path.string());
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos || tab == 0)
            throw FormatError(path.string() + ":" + std::to_string(lineno) + ": expected id<TAB>text");
        std::string id = line.substr(0, tab);
        std::string text = line.substr(tab + 1);
        corpus.documents.push_back(
            plain_document(id, text, path.string() + ":" + std::to_string(lineno)));
    }
    return corpus;
}

Document load_annotated_file(const fs::path& path) {
    Document doc;
    doc.id = path.stem().string();
    std::ifstream in(path);
    if (!in) throw FormatError("cannot read file: " + path.string());
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;  // sentence break
        std::vector<std::string> cols;
        std::size_t start = 0;
        while (true) {
            auto tab = line.find('\t', start);
            if (tab == std::string::npos) {
                cols.push_back(line.substr(start));
                break;
            }
            cols.push_back(line.substr(start, tab - start));
            start = tab + 1;
        }
        const std::string where = path.string() + ":" + std::to_string(lineno);
        if (cols.size() != 5)
            throw FormatError(where + ": expected 5 columns, got " + std::to_string(cols.size()));
        if (cols[0].empty() || cols[0] == "_")
            throw FormatError(where + ": empty surface form");
        doc.tokens.push_back(Token{cols[0], field_or_absent(cols[1]), field_or_absent(cols[2]),
                                   field_or_absent(cols[3]), field_or_absent(cols[4])});
    }
    if (doc.tokens.empty())
        throw FormatError("document with zero tokens: " + path.string());
    return doc;
}

bool corpus_has_annotation(const Corpus& corpus, const std::optional<std::string> Token::*field) {
    for (const auto& doc : corpus.documents)
        for (const auto& tok : doc.tokens)
            if ((tok.*field).has_value()) return true;
    return false;
}

} // namespace

const Document* Corpus::find(const std::string& id) const {
    for (const auto& doc : documents)
        if (doc.id == id) return &doc;
    return nullptr;
}

std::int64_t CountMatrix::row_sum(std::size_t i) const {
    const std::size_t v = vocabulary.size();
    return std::accumulate(counts.begin() + i * v, counts.begin() + (i + 1) * v, std::int64_t{0});
}

std::string lowercase(const std::string& s) {
    std::string out = s;
    for (char& c : out)
        if (static_cast<unsigned char>(c) < 0x80)
            c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::string current;
    std::size_t i = 0;
    while (i < text.size()) {
        char32_t cp = next_codepoint(text, i);
        if (is_space_cp(cp)) {
            if (!current.empty()) {
                tokens.push_back(std::move(current));
                current.clear();
            }
        } else if (is_punct_cp(cp)) {
            if (!current.empty()) {
                tokens.push_back(std::move(current));
                current.clear();
            }
            std::string punct;
            append_utf8(punct, cp);
            tokens.push_back(std::move(punct));
        } else {
            append_utf8(current, cp);
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

Corpus load_plain_corpus(const fs::path& path) {
    Corpus corpus;
    if (fs::is_directory(path)) {
        for (const auto& file : sorted_files_with_extension(path, ".txt"))
            corpus.documents.push_back(
                plain_document(file.stem().string(), read_whole_file(file), file.string()));
    } else if (fs::is_regular_file(path) && path.extension() == ".tsv") {
        corpus = load_plain_tsv(path);
    } else {
        throw FormatError("unreadable corpus path: " + path.string());
    }
    if (corpus.documents.empty())
        throw FormatError("no documents under " + path.string());
    check_unique_ids(corpus);
    return corpus;
}

Corpus load_annotated_corpus(const fs::path& path) {
    if (!fs::is_directory(path))
        throw FormatError("annotated corpus must be a directory: " + path.string());
    Corpus corpus;
    for (const auto& file : sorted_files_with_extension(path, ".tsv"))
        corpus.documents.push_back(load_annotated_file(file));
    if (corpus.documents.empty())
        throw FormatError("no documents under " + path.string());
    check_unique_ids(corpus);
    return corpus;
}

Corpus load_corpus(const fs::path& path) {
    if (fs::is_regular_file(path) && path.extension() == ".tsv") return load_plain_corpus(path);
    if (fs::is_directory(path)) {
        bool has_txt = !sorted_files_with_extension(path, ".txt").empty();
        bool has_tsv = !sorted_files_with_extension(path, ".tsv").empty();
        if (has_txt && has_tsv)
            throw FormatError("ambiguous corpus directory (both .txt and .tsv): " + path.string());
        if (has_tsv) return load_annotated_corpus(path);
        return load_plain_corpus(path);
    }
    throw FormatError("unreadable corpus path: " + path.string());
}

TokenFilter filter_preset(const std::string& name) {
    if (name == "all") return {FilterMode::All, {}, {}};
    if (name == "nouns") return {FilterMode::PosSet, {"NOUN"}, {}};
    if (name == "verbs") return {FilterMode::PosSet, {"VERB"}, {}};
    if (name == "adjectives") return {FilterMode::PosSet, {"ADJ"}, {}};
    if (name == "propn") return {FilterMode::PosSet, {"PROPN"}, {}};
    if (name == "lemmas") return {FilterMode::Lemmas, {}, {}};
    if (name == "ner") return {FilterMode::NamedEntities, {}, {}};
    if (name == "entities") return {FilterMode::Entities, {}, {}};
    throw FormatError("unknown feature preset: " + name);
}

FilterResult apply_filter(const Corpus& corpus, const TokenFilter& filter) {
    if (filter.mode == FilterMode::PosSet) {
        if (filter.pos_set.empty())
            throw FormatError("pos-set filter without POS tags");
        if (!corpus_has_annotation(corpus, &Token::upos))
            throw FormatError("filter requires POS annotations that are absent");
    }
    if (filter.mode == FilterMode::Lemmas && !corpus_has_annotation(corpus, &Token::lemma))
        throw FormatError("filter requires lemma annotations that are absent");

    FilterResult result;
    for (const auto& doc : corpus.documents) {
        Document filtered;
        filtered.id = doc.id;
        for (const auto& tok : doc.tokens) {
            switch (filter.mode) {
                case FilterMode::All:
                    filtered.tokens.push_back(tok);
                    break;
                case FilterMode::PosSet:
                    if (tok.upos && filter.pos_set.count(*tok.upos)) filtered.tokens.push_back(tok);
                    break;
                case FilterMode::Lemmas: {
                    Token t = tok;
                    if (t.lemma) t.surface = *t.lemma;
                    filtered.tokens.push_back(std::move(t));
                    break;
                }
                case FilterMode::NamedEntities:
                    if (tok.ner && (filter.ner_types.empty() || filter.ner_types.count(*tok.ner)))
                        filtered.tokens.push_back(tok);
                    break;
                case FilterMode::Entities:
                    if (tok.entity) {
                        Token t = tok;
                        t.surface = *t.entity;
                        filtered.tokens.push_back(std::move(t));
                    }
                    break;
            }
        }
        if (filtered.tokens.empty()) {
            log::warn("filter emptied document '" + doc.id + "', dropping it");
            result.dropped_ids.push_back(doc.id);
        } else {
            result.corpus.documents.push_back(std::move(filtered));
        }
    }
    return result;
}

CountMatrix build_count_matrix(const Corpus& corpus) {
    if (corpus.documents.empty()) throw FormatError("cannot count an empty corpus");

    CountMatrix m;
    std::vector<std::map<std::string, std::int64_t>> per_doc;
    per_doc.reserve(corpus.size());
    std::map<std::string, std::int64_t> totals;
    for (const auto& doc : corpus.documents) {
        m.doc_ids.push_back(doc.id);
        per_doc.push_back(term_counts(doc));
        for (const auto& [word, count] : per_doc.back()) totals[word] += count;
    }
    m.vocabulary.reserve(totals.size());
    for (const auto& [word, count] : totals) m.vocabulary.push_back(word);  // already sorted

    std::unordered_map<std::string, std::size_t> index;
    index.reserve(m.vocabulary.size());
    for (std::size_t j = 0; j < m.vocabulary.size(); ++j) index[m.vocabulary[j]] = j;

    m.counts.assign(m.doc_ids.size() * m.vocabulary.size(), 0);
    for (std::size_t i = 0; i < per_doc.size(); ++i)
        for (const auto& [word, count] : per_doc[i])
            m.counts[i * m.vocabulary.size() + index[word]] = count;
    return m;
}

CountMatrix make_count_matrix(std::vector<std::string> doc_ids,
                              std::vector<std::string> vocabulary,
                              std::vector<std::int64_t> counts) {
    const std::size_t n = doc_ids.size();
    const std::size_t v = vocabulary.size();
    if (counts.size() != n * v)
        throw FormatError("count matrix shape mismatch");
    {
        std::unordered_set<std::string> seen;
        for (const auto& id : doc_ids)
            if (!seen.insert(id).second) throw FormatError("duplicate document id: " + id);
    }

    std::vector<std::size_t> order(v);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return vocabulary[a] < vocabulary[b]; });

    CountMatrix m;
    m.doc_ids = std::move(doc_ids);
    std::vector<std::size_t> kept;
    for (std::size_t j : order) {
        bool nonzero = false;
        for (std::size_t i = 0; i < n && !nonzero; ++i) nonzero = counts[i * v + j] > 0;
        if (nonzero) {
            kept.push_back(j);
            m.vocabulary.push_back(vocabulary[j]);
        }
    }
    m.counts.resize(n * kept.size());
    for (std::size_t i = 0; i < n; ++i) {
        std::int64_t row_total = 0;
        for (std::size_t k = 0; k < kept.size(); ++k) {
            const std::int64_t c = counts[i * v + kept[k]];
            if (c < 0) throw FormatError("negative count for document " + m.doc_ids[i]);
            m.counts[i * kept.size() + k] = c;
            row_total += c;
        }
        if (row_total == 0)
            throw FormatError("document with all-zero counts: " + m.doc_ids[i]);
    }
    return m;
}

std::map<std::string, std::int64_t> term_counts(const Document& doc) {
    std::map<std::string, std::int64_t> counts;
    for (const auto& tok : doc.tokens) ++counts[lowercase(tok.surface)];
    return counts;
}

std::map<std::string, std::int64_t> document_frequencies(const Corpus& corpus) {
    std::map<std::string, std::int64_t> df;
    for (const auto& doc : corpus.documents) {
        std::unordered_set<std::string> seen;
        for (const auto& tok : doc.tokens)
            if (seen.insert(lowercase(tok.surface)).second) ++df[lowercase(tok.surface)];
    }
    return df;
}

double tf(const std::string& word, const Document& doc) {
    if (doc.tokens.empty()) throw FormatError("tf over an empty document: " + doc.id);
    const auto counts = term_counts(doc);
    std::int64_t max_freq = 0;
    for (const auto& [w, c] : counts) max_freq = std::max(max_freq, c);
    auto it = counts.find(lowercase(word));
    if (it == counts.end()) return 0.0;
    return static_cast<double>(it->second) / static_cast<double>(max_freq);
}

double idf(const std::string& word, const Corpus& corpus) {
    const std::string key = lowercase(word);
    std::int64_t df = 0;
    for (const auto& doc : corpus.documents) {
        for (const auto& tok : doc.tokens) {
            if (lowercase(tok.surface) == key) {
                ++df;
                break;
            }
        }
    }
    if (df == 0)
        throw FormatError("idf of a word with zero document frequency: " + word);
    return std::log(static_cast<double>(corpus.size()) / static_cast<double>(df));
}

double tfidf(const std::string& word, const Document& doc, const Corpus& corpus) {
    const double t = tf(word, doc);
    if (t == 0.0) return 0.0;
    return t * idf(word, corpus);
}

} // namespace scalegraph
