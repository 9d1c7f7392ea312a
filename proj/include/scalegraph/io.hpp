#pragma once

#include "scalegraph/corpus.hpp"
#include "scalegraph/eval.hpp"

#include <filesystem>
#include <string>

namespace scalegraph {

// id<TAB>value rows, no header.
PositionMap read_positions_tsv(const std::filesystem::path& path);
GoldPositions read_gold_tsv(const std::filesystem::path& path);

// Rows sorted by id, values with 9 decimals, '\n' endings.
void write_positions_tsv(const std::filesystem::path& path, const PositionMap& positions);

// One 5-column token-per-line TSV per document, "_" for absent fields.
void write_annotated_corpus(const std::filesystem::path& dir, const Corpus& corpus);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

// FNV-1a 64-bit digest of the file bytes, as 16 hex characters.
std::string file_digest(const std::filesystem::path& path);

// file_digest for files; for directories, a digest over the sorted
// (file name, file digest) listing.
std::string input_digest(const std::filesystem::path& path);

std::string format_double(double value, int decimals);

} // namespace scalegraph
