#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace scalegraph {

using PositionMap = std::map<std::string, double>;

struct GoldPositions {
    PositionMap scores;
};

// Metrics are computed over the id intersection and reported
// orientation-invariantly: the scale algorithms cannot tell which end of
// the spectrum is which.
struct EvalReport {
    double pa = 0.0;        // max(raw_pa, 1 - raw_pa)
    double pearson = 0.0;   // |raw_pearson|
    double spearman = 0.0;  // |raw_spearman|
    double raw_pa = 0.0;
    double raw_pearson = 0.0;
    double raw_spearman = 0.0;
    std::size_t n_matched = 0;
    bool sign_flipped = false;  // raw Pearson was negative
    std::vector<std::string> unmatched_pred;
    std::vector<std::string> unmatched_gold;
};

EvalReport evaluate(const PositionMap& pred, const GoldPositions& gold);

// Orientation-corrected convenience wrappers over evaluate().
double pairwise_accuracy(const PositionMap& pred, const GoldPositions& gold);
double pearson(const PositionMap& pred, const GoldPositions& gold);
double spearman(const PositionMap& pred, const GoldPositions& gold);

enum class Alignment { PerRun, None };

struct MetricSummary {
    double mean = 0.0;
    double se = 0.0;  // sample sd / sqrt(n); 0 for n = 1
};

struct AggregateSummary {
    MetricSummary pa, pearson, spearman;
    std::size_t n = 0;
};

// PerRun aggregates the orientation-corrected values, None the raw ones.
AggregateSummary aggregate(const std::vector<EvalReport>& reports,
                           Alignment align = Alignment::PerRun);

// Average ranks, ties shared (exposed for the rank-based tests).
std::vector<double> average_ranks(const std::vector<double>& values);

} // namespace scalegraph
