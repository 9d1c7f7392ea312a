#include "scalegraph/eval.hpp"

#include "scalegraph/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace scalegraph {

namespace {

double pearson_of(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw DegenerateError("correlation of a constant vector is undefined");
    return sxy / std::sqrt(sxx * syy);
}

MetricSummary summarize(const std::vector<double>& values) {
    MetricSummary s;
    const std::size_t n = values.size();
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
    if (n > 1) {
        double var = 0.0;
        for (double v : values) var += (v - s.mean) * (v - s.mean);
        var /= static_cast<double>(n - 1);  // sample variance
        s.se = std::sqrt(var) / std::sqrt(static_cast<double>(n));
    }
    return s;
}

} // namespace

std::vector<double> average_ranks(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double shared = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
        i = j + 1;
    }
    return ranks;
}

EvalReport evaluate(const PositionMap& pred, const GoldPositions& gold) {
    EvalReport report;
    std::vector<double> p, g;
    for (const auto& [id, value] : pred) {
        auto it = gold.scores.find(id);
        if (it == gold.scores.end()) {
            report.unmatched_pred.push_back(id);
        } else {
            p.push_back(value);
            g.push_back(it->second);
        }
    }
    for (const auto& [id, value] : gold.scores)
        if (!pred.count(id)) report.unmatched_gold.push_back(id);

    report.n_matched = p.size();
    if (report.n_matched < 2)
        throw FormatError("evaluation needs at least 2 shared ids, got " +
                          std::to_string(report.n_matched));

    // Pairwise accuracy: gold ties leave the denominator, prediction-only
    // ties count against the method under either orientation.
    std::size_t correct = 0, reversed = 0, considered = 0;
    for (std::size_t a = 0; a < p.size(); ++a) {
        for (std::size_t b = a + 1; b < p.size(); ++b) {
            if (g[a] == g[b]) continue;
            ++considered;
            const bool gold_less = g[a] < g[b];
            if ((gold_less && p[a] < p[b]) || (!gold_less && p[a] > p[b])) ++correct;
            if ((gold_less && p[a] > p[b]) || (!gold_less && p[a] < p[b])) ++reversed;
        }
    }
    if (considered == 0)
        throw DegenerateError("all gold position pairs are tied");
    report.raw_pa = static_cast<double>(correct) / static_cast<double>(considered);
    report.pa = static_cast<double>(std::max(correct, reversed)) / static_cast<double>(considered);

    report.raw_pearson = pearson_of(p, g);
    report.pearson = std::abs(report.raw_pearson);
    report.sign_flipped = report.raw_pearson < 0.0;

    report.raw_spearman = pearson_of(average_ranks(p), average_ranks(g));
    report.spearman = std::abs(report.raw_spearman);
    return report;
}

double pairwise_accuracy(const PositionMap& pred, const GoldPositions& gold) {
    return evaluate(pred, gold).pa;
}

double pearson(const PositionMap& pred, const GoldPositions& gold) {
    return evaluate(pred, gold).pearson;
}

double spearman(const PositionMap& pred, const GoldPositions& gold) {
    return evaluate(pred, gold).spearman;
}

AggregateSummary aggregate(const std::vector<EvalReport>& reports, Alignment align) {
    if (reports.empty()) throw FormatError("nothing to aggregate");
    std::vector<double> pa, pe, sp;
    for (const auto& r : reports) {
        pa.push_back(align == Alignment::PerRun ? r.pa : r.raw_pa);
        pe.push_back(align == Alignment::PerRun ? r.pearson : r.raw_pearson);
        sp.push_back(align == Alignment::PerRun ? r.spearman : r.raw_spearman);
    }
    AggregateSummary s;
    s.n = reports.size();
    s.pa = summarize(pa);
    s.pearson = summarize(pe);
    s.spearman = summarize(sp);
    return s;
}

} // namespace scalegraph
