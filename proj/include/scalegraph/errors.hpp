#pragma once

#include <stdexcept>
#include <string>

namespace scalegraph {

// Malformed input files, unusable values, violated data preconditions.
class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

// An operation produced nothing usable (every document filtered away, ...).
class EmptyResultError : public std::runtime_error {
public:
    explicit EmptyResultError(const std::string& what) : std::runtime_error(what) {}
};

// Numerically degenerate state the pipeline refuses to mask
// (singular propagation system, constant positions under z-scoring, ...).
class DegenerateError : public std::runtime_error {
public:
    explicit DegenerateError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace scalegraph
