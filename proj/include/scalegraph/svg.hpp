#pragma once

#include "scalegraph/eval.hpp"

#include <string>

namespace scalegraph {

struct ScatterOptions {
    int width = 640;
    int height = 480;
    std::string x_label = "gold position";
    std::string y_label = "predicted position";
};

// Deterministic SVG scatter of predicted-vs-gold positions over the id
// intersection, with a least-squares fit line and the Pearson r annotated.
std::string render_scatter_svg(const PositionMap& pred, const GoldPositions& gold,
                               const ScatterOptions& options = {});

} // namespace scalegraph
