#include "scalegraph/corpus.hpp"
#include "scalegraph/embeddings.hpp"
#include "scalegraph/errors.hpp"
#include "scalegraph/eval.hpp"
#include "scalegraph/interpret.hpp"
#include "scalegraph/io.hpp"
#include "scalegraph/log.hpp"
#include "scalegraph/semscale.hpp"
#include "scalegraph/svg.hpp"
#include "scalegraph/wordfish.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace scalegraph;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitEmpty = 3;
constexpr int kExitNonConverged = 4;

struct CommonArgs {
    std::string corpus;
    std::string features = "all";
    std::string out;
    bool stamp = false;
};

fs::path sidecar_path(const fs::path& out) {
    fs::path p = out;
    p.replace_extension(".json");
    return p;
}

json provenance(const std::string& command, const json& flags,
                const std::vector<std::string>& inputs, bool stamp) {
    json j;
    j["command"] = command;
    j["flags"] = flags;
    json digests = json::object();
    for (const auto& path : inputs) digests[path] = input_digest(path);
    j["inputs"] = digests;
    if (stamp) {
        const auto now = std::chrono::system_clock::now();
        j["timestamp_unix"] =
            std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
    }
    return j;
}

// Loads, filters, and refuses to go on with nothing left.
Corpus load_filtered(const std::string& path, const std::string& features) {
    const Corpus corpus = load_corpus(path);
    const TokenFilter filter = filter_preset(features);
    FilterResult filtered = apply_filter(corpus, filter);
    if (filtered.corpus.documents.empty())
        throw EmptyResultError("feature filter '" + features + "' emptied the whole corpus");
    return std::move(filtered.corpus);
}

json coverage_json(const CoverageReport& report) {
    json docs = json::array();
    for (const auto& d : report.docs) {
        json e;
        e["id"] = d.doc_id;
        e["types"] = d.types;
        e["hits"] = d.hits;
        e["ratio"] = d.ratio;
        e["flagged"] = d.flagged;
        docs.push_back(e);
    }
    json j;
    j["threshold"] = report.threshold;
    j["documents"] = docs;
    return j;
}

int cmd_filter(const CommonArgs& args) {
    const Corpus corpus = load_corpus(args.corpus);
    const TokenFilter filter = filter_preset(args.features);
    FilterResult result = apply_filter(corpus, filter);
    if (result.corpus.documents.empty())
        throw EmptyResultError("feature filter '" + args.features + "' emptied the whole corpus");
    write_annotated_corpus(args.out, result.corpus);
    log::info("filter kept " + std::to_string(result.corpus.size()) + " of " +
              std::to_string(corpus.size()) + " documents");
    return kExitOk;
}

int cmd_semscale(const CommonArgs& args, const std::string& embeddings_path,
                 const std::string& normalize, const std::string& pivots_arg,
                 double coverage_threshold) {
    const Corpus corpus = load_filtered(args.corpus, args.features);
    const EmbeddingTable table = load_embeddings(embeddings_path);

    SemscaleOptions options;
    options.normalization = normalization_from_name(normalize);
    if (!pivots_arg.empty()) {
        const auto comma = pivots_arg.find(',');
        if (comma == std::string::npos || comma == 0 || comma + 1 == pivots_arg.size())
            throw FormatError("--pivots expects idA,idB");
        options.pivots = {pivots_arg.substr(0, comma), pivots_arg.substr(comma + 1)};
    }

    const SemscaleRun run = run_semscale(corpus, table, options);
    write_positions_tsv(args.out, run.result.positions);

    const CoverageReport cov = coverage(table, corpus, coverage_threshold);
    for (const auto& d : cov.docs)
        if (d.flagged)
            log::warn("document '" + d.doc_id + "' has embedding coverage " +
                      format_double(d.ratio, 3) + " below " +
                      format_double(coverage_threshold, 3));

    json flags;
    flags["corpus"] = args.corpus;
    flags["embeddings"] = embeddings_path;
    flags["features"] = args.features;
    flags["normalize"] = normalize;
    flags["pivots"] = pivots_arg;
    json side = provenance("semscale", flags, {args.corpus, embeddings_path}, args.stamp);
    side["algorithm"] = "semscale";
    side["normalization"] = normalization_name(run.result.normalization);
    side["pivot_low"] = run.result.pivot_low;
    side["pivot_high"] = run.result.pivot_high;
    side["pivot_source"] = run.pivots_overridden ? "override" : "auto";
    json types = json::object();
    for (const auto& v : run.vectors) {
        json e;
        e["used_types"] = v.used_types;
        e["skipped_types"] = v.skipped_types;
        types[v.doc_id] = e;
    }
    side["type_usage"] = types;
    side["coverage"] = coverage_json(cov);
    json positions = json::object();
    for (const auto& [id, value] : run.result.positions) positions[id] = value;
    side["positions"] = positions;
    write_file(sidecar_path(args.out), side.dump(2) + "\n");
    return kExitOk;
}

int cmd_wordfish(const CommonArgs& args, double tol, int max_iter, std::uint64_t seed,
                 bool allow_nonconverged) {
    const Corpus corpus = load_filtered(args.corpus, args.features);
    const CountMatrix counts = build_count_matrix(corpus);

    FitOptions options;
    options.tol = tol;
    options.max_iter = max_iter;
    options.seed = seed;
    const WordfishModel model = fit(counts, options);

    if (!model.converged && !allow_nonconverged) {
        log::error("wordfish did not converge in " + std::to_string(model.iterations) +
                   " iterations (rerun with --allow-nonconverged to keep the result)");
        return kExitNonConverged;
    }

    PositionMap positions;
    for (std::size_t i = 0; i < model.doc_ids.size(); ++i)
        positions[model.doc_ids[i]] = model.theta[static_cast<long>(i)];
    write_positions_tsv(args.out, positions);

    fs::path words_path = args.out;
    words_path.replace_extension();
    words_path += "_words.tsv";
    std::ostringstream words;
    for (std::size_t j = 0; j < model.vocabulary.size(); ++j)
        words << model.vocabulary[j] << '\t' << format_double(model.psi[static_cast<long>(j)], 9)
              << '\t' << format_double(model.beta[static_cast<long>(j)], 9) << '\n';
    write_file(words_path, words.str());

    json flags;
    flags["corpus"] = args.corpus;
    flags["features"] = args.features;
    flags["tol"] = tol;
    flags["max_iter"] = max_iter;
    flags["seed"] = seed;
    json side = provenance("wordfish", flags, {args.corpus}, args.stamp);
    side["algorithm"] = "wordfish";
    side["converged"] = model.converged;
    side["iterations"] = model.iterations;
    side["seed"] = model.seed;
    side["log_likelihood_trace"] = model.log_likelihood_trace;
    side["word_parameters"] = words_path.filename().string();
    json positions_json = json::object();
    for (const auto& [id, value] : positions) positions_json[id] = value;
    side["positions"] = positions_json;
    write_file(sidecar_path(args.out), side.dump(2) + "\n");
    return kExitOk;
}

json report_json(const EvalReport& report) {
    json j;
    j["n_matched"] = report.n_matched;
    j["pa"] = report.pa;
    j["pearson"] = report.pearson;
    j["spearman"] = report.spearman;
    j["raw_pa"] = report.raw_pa;
    j["raw_pearson"] = report.raw_pearson;
    j["raw_spearman"] = report.raw_spearman;
    j["sign_flipped"] = report.sign_flipped;
    j["unmatched_pred"] = report.unmatched_pred;
    j["unmatched_gold"] = report.unmatched_gold;
    return j;
}

void warn_unmatched(const EvalReport& report) {
    const auto join = [](const std::vector<std::string>& ids) {
        std::string s;
        for (const auto& id : ids) s += (s.empty() ? "" : ", ") + id;
        return s;
    };
    if (!report.unmatched_pred.empty())
        log::warn("predicted ids without gold: " + join(report.unmatched_pred));
    if (!report.unmatched_gold.empty())
        log::warn("gold ids without prediction: " + join(report.unmatched_gold));
}

int cmd_eval(const std::string& pred_path, const std::string& gold_path, bool as_json) {
    const PositionMap pred = read_positions_tsv(pred_path);
    const GoldPositions gold = read_gold_tsv(gold_path);
    const EvalReport report = evaluate(pred, gold);
    warn_unmatched(report);
    if (as_json) {
        std::cout << report_json(report).dump(2) << "\n";
    } else {
        std::cout << "n_matched\t" << report.n_matched << "\n";
        std::cout << "pa\t" << format_double(report.pa, 6) << "\n";
        std::cout << "pearson\t" << format_double(report.pearson, 6) << "\n";
        std::cout << "spearman\t" << format_double(report.spearman, 6) << "\n";
        std::cout << "sign_flipped\t" << (report.sign_flipped ? "true" : "false") << "\n";
    }
    return kExitOk;
}

struct ManifestRow {
    std::string label;
    fs::path pred;
    fs::path gold;
    std::size_t lineno = 0;
};

std::vector<ManifestRow> read_manifest(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot read manifest: " + path.string());
    const fs::path base = path.has_parent_path() ? path.parent_path() : fs::path(".");
    std::vector<ManifestRow> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
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
        if (cols.size() != 3)
            throw FormatError(path.string() + ":" + std::to_string(lineno) +
                              ": expected label<TAB>pred<TAB>gold");
        const auto resolve = [&](const std::string& p) {
            fs::path fp(p);
            return fp.is_absolute() ? fp : base / fp;
        };
        rows.push_back({cols[0], resolve(cols[1]), resolve(cols[2]), lineno});
    }
    if (rows.empty()) throw FormatError("empty manifest: " + path.string());
    return rows;
}

int cmd_eval_batch(const std::string& manifest_path, const std::string& align_name,
                   bool as_json) {
    const Alignment align = align_name == "none" ? Alignment::None : Alignment::PerRun;
    const std::vector<ManifestRow> rows = read_manifest(manifest_path);

    std::vector<EvalReport> reports(rows.size());
    std::vector<std::string> errors(rows.size());
    const long n = static_cast<long>(rows.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) {
        try {
            reports[i] = evaluate(read_positions_tsv(rows[i].pred),
                                  read_gold_tsv(rows[i].gold));
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    }
    for (long i = 0; i < n; ++i)
        if (!errors[i].empty())
            throw FormatError("manifest row " + std::to_string(rows[i].lineno) + " (" +
                              rows[i].label + "): " + errors[i]);

    // aggregate per label, in manifest order
    std::vector<std::string> labels;
    std::map<std::string, std::vector<EvalReport>> grouped;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!grouped.count(rows[i].label)) labels.push_back(rows[i].label);
        grouped[rows[i].label].push_back(reports[i]);
    }

    if (as_json) {
        json out = json::array();
        for (const auto& label : labels) {
            const AggregateSummary s = aggregate(grouped[label], align);
            json row;
            row["label"] = label;
            row["n"] = s.n;
            row["pa"] = {{"mean", s.pa.mean}, {"se", s.pa.se}};
            row["pearson"] = {{"mean", s.pearson.mean}, {"se", s.pearson.se}};
            row["spearman"] = {{"mean", s.spearman.mean}, {"se", s.spearman.se}};
            out.push_back(row);
        }
        std::cout << out.dump(2) << "\n";
        return kExitOk;
    }

    std::size_t label_width = 5;
    for (const auto& label : labels) label_width = std::max(label_width, label.size());
    const auto cell = [](const MetricSummary& m) {
        return format_double(m.mean, 3) + " (" + format_double(m.se, 3) + ")";
    };
    std::printf("%-*s  %3s  %-14s  %-14s  %-14s\n", static_cast<int>(label_width), "label", "n",
                "PA", "r_P", "r_S");
    for (const auto& label : labels) {
        const AggregateSummary s = aggregate(grouped[label], align);
        std::printf("%-*s  %3zu  %-14s  %-14s  %-14s\n", static_cast<int>(label_width),
                    label.c_str(), s.n, cell(s.pa).c_str(), cell(s.pearson).c_str(),
                    cell(s.spearman).c_str());
    }
    return kExitOk;
}

ScalingResult positions_from_file(const fs::path& path) {
    ScalingResult result;
    if (path.extension() == ".json") {
        const json side = json::parse(read_file(path));
        if (!side.contains("positions"))
            throw FormatError(path.string() + ": no \"positions\" object");
        for (const auto& [id, value] : side["positions"].items())
            result.positions[id] = value.get<double>();
        result.pivot_low = side.value("pivot_low", "");
        result.pivot_high = side.value("pivot_high", "");
        result.algorithm = side.value("algorithm", "");
        if (side.contains("normalization"))
            result.normalization = side["normalization"] == "zscore" ? Normalization::ZScore
                                   : side["normalization"] == "unit-interval"
                                       ? Normalization::UnitInterval
                                       : Normalization::Raw;
    } else {
        result.positions = read_positions_tsv(path);
    }
    return result;
}

int cmd_extremes(const std::string& corpus_path, const std::string& embeddings_path,
                 const std::string& positions_path, const std::string& features,
                 std::size_t k, const std::string& out) {
    const Corpus corpus = load_corpus(corpus_path);
    const EmbeddingTable table = load_embeddings(embeddings_path);
    const ScalingResult result = positions_from_file(positions_path);
    const ExtremeTermReport report =
        extreme_terms(corpus, table, result, k, filter_preset(features));

    std::ostringstream tsv;
    tsv << "# low=" << report.low_doc << " high=" << report.high_doc << " convention="
        << (report.used_pivots ? "pivots" : "minmax") << "\n";
    tsv << "pole\trank\tterm\tscore_low\tscore_high\tmargin\n";
    const auto emit = [&](const char* pole, const std::vector<ExtremeTerm>& terms) {
        for (std::size_t r = 0; r < terms.size(); ++r)
            tsv << pole << '\t' << (r + 1) << '\t' << terms[r].term << '\t'
                << format_double(terms[r].score_low, 6) << '\t'
                << format_double(terms[r].score_high, 6) << '\t'
                << format_double(terms[r].margin, 6) << '\n';
    };
    emit("low", report.low_terms);
    emit("high", report.high_terms);

    if (out.empty())
        std::cout << tsv.str();
    else
        write_file(out, tsv.str());
    return kExitOk;
}

int cmd_plot(const std::string& pred_path, const std::string& gold_path,
             const std::string& out, int width, int height) {
    const PositionMap pred = read_positions_tsv(pred_path);
    const GoldPositions gold = read_gold_tsv(gold_path);
    ScatterOptions options;
    options.width = width;
    options.height = height;
    write_file(out, render_scatter_svg(pred, gold, options));
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"scalegraph: deterministic one-dimensional text scaling"};
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "TOML-style configuration with one [subcommand] section per command; "
                   "command-line flags take precedence");

    // lets --config appear after the subcommand
    const auto add_config = [](CLI::App* sub) { sub->fallthrough(); };

    // filter
    CommonArgs filter_args;
    auto* filter_cmd = app.add_subcommand("filter", "apply a linguistic-feature filter");
    filter_cmd->add_option("--corpus", filter_args.corpus, "corpus path")->required();
    filter_cmd->add_option("--features", filter_args.features,
                           "all|nouns|verbs|adjectives|propn|lemmas|ner|entities");
    filter_cmd->add_option("--out", filter_args.out, "output directory")->required();
    add_config(filter_cmd);

    // semscale
    CommonArgs sem_args;
    std::string sem_embeddings, sem_normalize = "raw", sem_pivots;
    double sem_coverage = 0.5;
    auto* sem_cmd = app.add_subcommand("semscale", "similarity-graph scaling");
    sem_cmd->add_option("--corpus", sem_args.corpus, "corpus path")->required();
    sem_cmd->add_option("--embeddings", sem_embeddings, "word2vec text file")->required();
    sem_cmd->add_option("--features", sem_args.features, "feature preset");
    sem_cmd->add_option("--normalize", sem_normalize, "raw|zscore|unit");
    sem_cmd->add_option("--pivots", sem_pivots, "idA,idB pivot override");
    sem_cmd->add_option("--coverage-warn", sem_coverage, "coverage warning threshold");
    sem_cmd->add_option("--out", sem_args.out, "positions TSV path")->required();
    sem_cmd->add_flag("--stamp", sem_args.stamp, "include a timestamp in the sidecar");
    add_config(sem_cmd);

    // wordfish
    CommonArgs wf_args;
    double wf_tol = 1e-8;
    int wf_max_iter = 500;
    std::uint64_t wf_seed = 42;
    bool wf_allow = false;
    auto* wf_cmd = app.add_subcommand("wordfish", "Poisson ideal-point scaling");
    wf_cmd->add_option("--corpus", wf_args.corpus, "corpus path")->required();
    wf_cmd->add_option("--features", wf_args.features, "feature preset");
    wf_cmd->add_option("--tol", wf_tol, "log-likelihood improvement tolerance");
    wf_cmd->add_option("--max-iter", wf_max_iter, "maximum iterations");
    wf_cmd->add_option("--seed", wf_seed, "seed for the degenerate-start fallback");
    wf_cmd->add_option("--out", wf_args.out, "positions TSV path")->required();
    wf_cmd->add_flag("--allow-nonconverged", wf_allow, "keep a non-converged fit");
    wf_cmd->add_flag("--stamp", wf_args.stamp, "include a timestamp in the sidecar");
    add_config(wf_cmd);

    // eval
    std::string eval_pred, eval_gold;
    bool eval_json = false;
    auto* eval_cmd = app.add_subcommand("eval", "score predictions against gold positions");
    eval_cmd->add_option("--pred", eval_pred, "predicted positions TSV")->required();
    eval_cmd->add_option("--gold", eval_gold, "gold positions TSV")->required();
    eval_cmd->add_flag("--json", eval_json, "JSON output");
    add_config(eval_cmd);

    // eval-batch
    std::string batch_manifest, batch_align = "per-run";
    bool batch_json = false;
    auto* batch_cmd = app.add_subcommand("eval-batch", "evaluate a manifest of runs");
    batch_cmd->add_option("--runs", batch_manifest, "manifest TSV (label, pred, gold)")
        ->required();
    batch_cmd->add_option("--align", batch_align, "per-run|none orientation handling")
        ->check(CLI::IsMember({"per-run", "none"}));
    batch_cmd->add_flag("--json", batch_json, "JSON output");
    add_config(batch_cmd);

    // extremes
    std::string ext_corpus, ext_embeddings, ext_positions, ext_features = "all", ext_out;
    std::size_t ext_k = 20;
    auto* ext_cmd = app.add_subcommand("extremes", "terms closest to the scale extremes");
    ext_cmd->add_option("--corpus", ext_corpus, "corpus path")->required();
    ext_cmd->add_option("--embeddings", ext_embeddings, "word2vec text file")->required();
    ext_cmd->add_option("--positions", ext_positions, "positions TSV or sidecar JSON")
        ->required();
    ext_cmd->add_option("--features", ext_features, "candidate term filter");
    ext_cmd->add_option("-k,--k", ext_k, "terms per pole");
    ext_cmd->add_option("--out", ext_out, "output TSV (default: stdout)");
    add_config(ext_cmd);

    // plot
    std::string plot_pred, plot_gold, plot_out;
    int plot_width = 640, plot_height = 480;
    auto* plot_cmd = app.add_subcommand("plot", "SVG scatter of predicted vs gold positions");
    plot_cmd->add_option("--pred", plot_pred, "predicted positions TSV")->required();
    plot_cmd->add_option("--gold", plot_gold, "gold positions TSV")->required();
    plot_cmd->add_option("--out", plot_out, "output SVG path")->required();
    plot_cmd->add_option("--width", plot_width, "canvas width");
    plot_cmd->add_option("--height", plot_height, "canvas height");
    add_config(plot_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (filter_cmd->parsed()) return cmd_filter(filter_args);
        if (sem_cmd->parsed())
            return cmd_semscale(sem_args, sem_embeddings, sem_normalize, sem_pivots,
                                sem_coverage);
        if (wf_cmd->parsed()) return cmd_wordfish(wf_args, wf_tol, wf_max_iter, wf_seed, wf_allow);
        if (eval_cmd->parsed()) return cmd_eval(eval_pred, eval_gold, eval_json);
        if (batch_cmd->parsed()) return cmd_eval_batch(batch_manifest, batch_align, batch_json);
        if (ext_cmd->parsed())
            return cmd_extremes(ext_corpus, ext_embeddings, ext_positions, ext_features, ext_k,
                                ext_out);
        if (plot_cmd->parsed())
            return cmd_plot(plot_pred, plot_gold, plot_out, plot_width, plot_height);
    } catch (const EmptyResultError& e) {
        log::error(e.what());
        return kExitEmpty;
    } catch (const std::exception& e) {
        log::error(e.what());
        return kExitUsage;
    }
    return kExitUsage;
}
