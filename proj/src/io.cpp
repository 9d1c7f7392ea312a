#include "scalegraph/io.hpp"

#include "scalegraph/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace fs = std::filesystem;

namespace scalegraph {

PositionMap read_positions_tsv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot read positions file: " + path.string());
    PositionMap positions;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::string where = path.string() + ":" + std::to_string(lineno);
        auto tab = line.find('\t');
        if (tab == std::string::npos || tab == 0)
            throw FormatError(where + ": expected id<TAB>value");
        const std::string id = line.substr(0, tab);
        const std::string raw = line.substr(tab + 1);
        char* end = nullptr;
        const double value = std::strtod(raw.c_str(), &end);
        if (end != raw.c_str() + raw.size() || raw.empty() || !std::isfinite(value))
            throw FormatError(where + ": non-numeric value '" + raw + "'");
        if (!positions.emplace(id, value).second)
            throw FormatError(where + ": duplicate id '" + id + "'");
    }
    if (positions.empty()) throw FormatError("no rows in " + path.string());
    return positions;
}

GoldPositions read_gold_tsv(const fs::path& path) {
    return GoldPositions{read_positions_tsv(path)};
}

void write_positions_tsv(const fs::path& path, const PositionMap& positions) {
    std::ostringstream out;
    for (const auto& [id, value] : positions)
        out << id << '\t' << format_double(value, 9) << '\n';
    write_file(path, out.str());
}

void write_annotated_corpus(const fs::path& dir, const Corpus& corpus) {
    fs::create_directories(dir);
    for (const auto& doc : corpus.documents) {
        std::ostringstream out;
        for (const auto& tok : doc.tokens)
            out << tok.surface << '\t' << tok.lemma.value_or("_") << '\t'
                << tok.upos.value_or("_") << '\t' << tok.ner.value_or("_") << '\t'
                << tok.entity.value_or("_") << '\n';
        write_file(dir / (doc.id + ".tsv"), out.str());
    }
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot read file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot write file: " + path.string());
    out << content;
    if (!out) throw FormatError("write failed: " + path.string());
}

std::string file_digest(const fs::path& path) {
    const std::string bytes = read_file(path);
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

std::string input_digest(const fs::path& path) {
    if (!fs::is_directory(path)) return file_digest(path);
    std::vector<std::string> names;
    for (const auto& entry : fs::directory_iterator(path))
        if (entry.is_regular_file()) names.push_back(entry.path().filename().string());
    std::sort(names.begin(), names.end());
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    const auto mix = [&](const std::string& s) {
        for (unsigned char c : s) {
            hash ^= c;
            hash *= 0x100000001b3ULL;
        }
    };
    for (const auto& name : names) {
        mix(name);
        mix(":");
        mix(file_digest(path / name));
        mix("\n");
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

std::string format_double(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
    // normalize the signed zero so equal values print identically
    if (std::strtod(buf, nullptr) == 0.0 && buf[0] == '-') return buf + 1;
    return buf;
}

} // namespace scalegraph
