// Acceptance suite: runs every gate criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion.

#include "scalegraph/corpus.hpp"
#include "scalegraph/embeddings.hpp"
#include "scalegraph/eval.hpp"
#include "scalegraph/io.hpp"
#include "scalegraph/semscale.hpp"
#include "scalegraph/wordfish.hpp"

#include "testutil.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>

using namespace scalegraph;
namespace fs = std::filesystem;

namespace {

const std::string kBin = SCALE_BIN;
const fs::path kData = DATA_DIR;

struct Failure {
    std::string detail;
};

void require(bool condition, const std::string& detail) {
    if (!condition) throw Failure{detail};
}

int run_cli(const std::string& args) {
    const std::string cmd = kBin + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// --------------------------------------------------------------------------

void criterion_harmonic(double budget_s) {
    std::mt19937_64 rng(20240501);
    const auto started = std::chrono::steady_clock::now();
    for (int trial = 0; trial < 200; ++trial) {
        const long n = 3 + static_cast<long>(rng() % 48);  // N <= 50
        const Eigen::MatrixXd w = testutil::random_positive_graph(rng, n);
        std::vector<std::string> ids;
        for (long i = 0; i < n; ++i) {
            std::string s = std::to_string(i);
            ids.push_back("v" + std::string(3 - s.size(), '0') + s);
        }
        const long p0 = static_cast<long>(rng() % n);
        long p1 = static_cast<long>(rng() % n);
        if (p1 == p0) p1 = (p0 + 1) % n;
        const ScalingResult result =
            propagate(SimilarityGraph{ids, w}, {ids[p0], ids[p1]});

        for (long i = 0; i < n; ++i) {
            const double f_i = result.positions.at(ids[i]);
            require(f_i >= -1.0 && f_i <= 1.0,
                    "score outside [-1,1] at trial " + std::to_string(trial));
            if (i == p0 || i == p1) continue;
            double num = 0.0, den = 0.0;
            for (long j = 0; j < n; ++j) {
                num += w(i, j) * result.positions.at(ids[j]);
                den += w(i, j);
            }
            require(std::abs(f_i - num / den) <= 1e-9,
                    "harmonic identity violated at trial " + std::to_string(trial));
        }

        const Eigen::VectorXd oracle = testutil::jacobi_propagate(w, p0, p1);
        for (long i = 0; i < n; ++i)
            require(std::abs(result.positions.at(ids[i]) - oracle[i]) <= 1e-6,
                    "closed form disagrees with the iterative oracle at trial " +
                        std::to_string(trial));
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    require(elapsed < budget_s, "runtime " + std::to_string(elapsed) + "s over budget");
}

void criterion_determinism() {
    const testutil::TempDir dir;
    const std::string corpus = (kData / "toy" / "corpus").string();
    const std::string embeddings = (kData / "toy" / "embeddings.vec").string();
    const std::string gold = (kData / "toy" / "gold.tsv").string();

    for (const char* tag : {"one", "two"}) {
        const fs::path tsv = dir.path() / (std::string(tag) + ".tsv");
        const fs::path svg = dir.path() / (std::string(tag) + ".svg");
        require(run_cli("semscale --corpus " + corpus + " --embeddings " + embeddings +
                        " --out " + tsv.string()) == 0,
                "semscale run failed");
        require(run_cli("plot --pred " + tsv.string() + " --gold " + gold + " --out " +
                        svg.string()) == 0,
                "plot run failed");
    }
    require(read_file(dir.path() / "one.tsv") == read_file(dir.path() / "two.tsv"),
            "positions TSV differs between runs");
    require(read_file(dir.path() / "one.json") == read_file(dir.path() / "two.json"),
            "JSON sidecar differs between runs");
    require(read_file(dir.path() / "one.svg") == read_file(dir.path() / "two.svg"),
            "SVG differs between runs");
}

void criterion_clusters() {
    const auto fx = testutil::two_cluster_fixture();
    const SemscaleRun run = run_semscale(fx.corpus, fx.table);
    const double lo = run.result.positions.at(run.result.pivot_low);
    const double hi = run.result.positions.at(run.result.pivot_high);
    const double midpoint = (lo + hi) / 2.0;

    const bool low_is_a =
        std::find(fx.cluster_a.begin(), fx.cluster_a.end(), run.result.pivot_low) !=
        fx.cluster_a.end();
    for (const auto& id : fx.cluster_a) {
        const double v = run.result.positions.at(id);
        require(low_is_a ? v < midpoint : v > midpoint,
                "cluster-A document " + id + " on the wrong side");
    }
    for (const auto& id : fx.cluster_b) {
        const double v = run.result.positions.at(id);
        require(low_is_a ? v > midpoint : v < midpoint,
                "cluster-B document " + id + " on the wrong side");
    }
}

void criterion_wordfish(double budget_s) {
    const auto started = std::chrono::steady_clock::now();

    // generative recovery at N=20, V=500
    std::mt19937_64 rng(777);
    std::normal_distribution<double> normal(0.0, 1.0);
    const long n = 20, v = 500;
    Eigen::VectorXd theta(n), alpha(n), psi(v), beta(v);
    for (long i = 0; i < n; ++i) theta[i] = normal(rng);
    theta = (theta.array() - theta.mean()) /
            std::sqrt((theta.array() - theta.mean()).square().sum() / n);
    for (long i = 0; i < n; ++i) alpha[i] = i == 0 ? 0.0 : 0.2 * normal(rng);
    for (long j = 0; j < v; ++j) psi[j] = 0.8 + 0.5 * normal(rng);
    for (long j = 0; j < v; ++j) beta[j] = 0.4 * normal(rng);

    std::vector<std::string> ids, vocab;
    for (long i = 0; i < n; ++i) ids.push_back("doc" + std::to_string(100 + i));
    for (long j = 0; j < v; ++j) vocab.push_back("w" + std::to_string(1000 + j));
    std::vector<std::int64_t> cells(n * v);
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < v; ++j)
            cells[i * v + j] = testutil::sample_poisson(
                rng, std::exp(alpha[i] + psi[j] + beta[j] * theta[i]));
    const CountMatrix counts = make_count_matrix(ids, vocab, cells);

    const WordfishModel model = fit(counts);
    const double mt = model.theta.mean();
    const double tt = theta.mean();
    const double r =
        ((model.theta.array() - mt) * (theta.array() - tt)).sum() /
        std::sqrt((model.theta.array() - mt).square().sum() *
                  (theta.array() - tt).square().sum());
    require(std::abs(r) >= 0.95,
            "theta recovery correlation " + std::to_string(r) + " below 0.95");

    for (std::size_t t = 1; t < model.log_likelihood_trace.size(); ++t) {
        const double prev = model.log_likelihood_trace[t - 1];
        const double cur = model.log_likelihood_trace[t];
        require(cur >= prev - 1e-9 * std::max(1.0, std::abs(prev)),
                "log-likelihood trace decreases at step " + std::to_string(t));
    }

    // analytic gradients vs central finite differences on small instances
    for (int trial = 0; trial < 3; ++trial) {
        const long sn = 3 + trial;  // <= 5
        const long sv = 12 + 4 * trial;  // <= 20
        std::vector<std::string> sids, svocab;
        for (long i = 0; i < sn; ++i) sids.push_back("d" + std::to_string(i));
        for (long j = 0; j < sv; ++j) svocab.push_back("t" + std::to_string(100 + j));
        std::vector<std::int64_t> scells(sn * sv);
        for (auto& c : scells) c = testutil::sample_poisson(rng, 2.5);
        CountMatrix small;
        try {
            small = make_count_matrix(sids, svocab, scells);
        } catch (...) {
            continue;  // a zero row draw; skip this shape
        }
        WordfishModel m = init_params(small, 1);
        for (long i = 0; i < sn; ++i) m.theta[i] += 0.3 * normal(rng);
        for (long j = 0; j < static_cast<long>(small.n_words()); ++j)
            m.beta[j] += 0.3 * normal(rng);

        const Gradients g = ll_gradients(m, small);
        const double h = 1e-5;
        const auto fd_check = [&](Eigen::VectorXd& param, long k, double analytic) {
            const double orig = param[k];
            param[k] = orig + h;
            const double up = log_likelihood(m, small);
            param[k] = orig - h;
            const double down = log_likelihood(m, small);
            param[k] = orig;
            const double numeric = (up - down) / (2.0 * h);
            require(std::abs(analytic - numeric) <= 1e-4 * std::max(1.0, std::abs(analytic)),
                    "gradient mismatch: analytic " + std::to_string(analytic) + " vs fd " +
                        std::to_string(numeric));
        };
        for (long i = 0; i < sn; ++i) {
            fd_check(m.alpha, i, g.alpha[i]);
            fd_check(m.theta, i, g.theta[i]);
        }
        for (long j = 0; j < static_cast<long>(small.n_words()); ++j) {
            fd_check(m.psi, j, g.psi[j]);
            fd_check(m.beta, j, g.beta[j]);
        }
    }

    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    require(elapsed < budget_s, "runtime " + std::to_string(elapsed) + "s over budget");
}

void criterion_metric_oracle() {
    std::mt19937_64 rng(909);
    std::uniform_real_distribution<double> value(-3.0, 3.0);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 29);  // N <= 30
        std::vector<double> pred(n), gold(n);
        for (int i = 0; i < n; ++i) {
            pred[i] = value(rng);
            gold[i] = value(rng);
        }
        if (n > 4 && trial % 4 == 0) {
            pred[1] = pred[0];
            gold[3] = gold[2];
        }
        PositionMap pm;
        GoldPositions gm;
        for (int i = 0; i < n; ++i) {
            std::string s = std::to_string(i);
            const std::string id = "p" + std::string(3 - s.size(), '0') + s;
            pm[id] = pred[i];
            gm.scores[id] = gold[i];
        }
        const EvalReport report = evaluate(pm, gm);
        require(report.pa == testutil::brute_pairwise_accuracy(pred, gold),
                "PA differs from brute force at trial " + std::to_string(trial));
        require(std::abs(report.raw_pearson - testutil::brute_pearson_raw(pred, gold)) <= 1e-12,
                "Pearson differs from brute force at trial " + std::to_string(trial));
        require(std::abs(report.raw_spearman - testutil::brute_spearman_raw(pred, gold)) <=
                    1e-12,
                "Spearman differs from brute force at trial " + std::to_string(trial));
    }

    // worked three-party example and rank pattern
    const GoldPositions gold{{{"a", 0.1}, {"b", 0.2}, {"c", 0.3}}};
    const PositionMap pred{{"a", 0.5}, {"b", 0.9}, {"c", 0.7}};
    require(std::abs(pairwise_accuracy(pred, gold) - 2.0 / 3.0) <= 1e-15,
            "three-party PA is not 2/3");
    const GoldPositions rg{{{"a", 1.0}, {"b", 2.0}, {"c", 3.0}}};
    const PositionMap rp{{"a", 1.0}, {"b", 3.0}, {"c", 2.0}};
    require(std::abs(spearman(rp, rg) - 0.5) <= 1e-12, "rank pattern Spearman is not 0.5");
}

void criterion_formulas() {
    // tf / idf / tfidf
    const Document doc = testutil::make_doc("d", {"a", "a", "b"});
    require(tf("a", doc) == 1.0, "tf of the modal word");
    require(tf("b", doc) == 0.5, "tf 1/2");
    require(tf("z", doc) == 0.0, "tf of an absent word");

    const Corpus three = testutil::make_corpus({testutil::make_doc("d1", {"w", "q"}),
                                                testutil::make_doc("d2", {"w"}),
                                                testutil::make_doc("d3", {"w", "r"})});
    require(idf("w", three) == 0.0, "idf of an everywhere-word");
    require(std::abs(idf("q", three) - std::log(3.0)) <= 1e-12, "idf ln 3");
    const Corpus four = testutil::make_corpus(
        {testutil::make_doc("d1", {"w"}), testutil::make_doc("d2", {"w"}),
         testutil::make_doc("d3", {"x"}), testutil::make_doc("d4", {"y"})});
    require(std::abs(idf("w", four) - std::log(2.0)) <= 1e-12, "idf ln 2");

    const Corpus only = testutil::make_corpus({testutil::make_doc("d1", {"only"}),
                                               testutil::make_doc("d2", {"b"}),
                                               testutil::make_doc("d3", {"c"})});
    require(std::abs(tfidf("only", only.documents[0], only) - std::log(3.0)) <= 1e-12,
            "tfidf of a document-exclusive word");
    require(tfidf("w", three.documents[0], three) == 0.0, "tfidf zero idf");
    require(tfidf("zzz", three.documents[0], three) == 0.0, "tfidf zero tf");

    // cosine
    require(cosine(Eigen::Vector2d(3, 4), Eigen::Vector2d(3, 4)) == 1.0, "cosine identical");
    require(cosine(Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)) == 0.0, "cosine orthogonal");
    require(std::abs(cosine(Eigen::Vector2d(1, 0), Eigen::Vector2d(1, 1)) - 0.70711) <= 1e-5,
            "cosine 1/sqrt(2)");

    // predict_rate
    WordfishModel model;
    model.alpha = Eigen::VectorXd::Zero(1);
    model.theta = Eigen::VectorXd::Zero(1);
    model.psi = Eigen::VectorXd::Zero(1);
    model.beta = Eigen::VectorXd::Zero(1);
    require(predict_rate(model, 0, 0) == 1.0, "rate exp(0)");
    model.alpha[0] = std::log(2.0);
    require(std::abs(predict_rate(model, 0, 0) - 2.0) <= 1e-12, "rate 2");
    model.alpha[0] = 0.0;
    model.beta[0] = 1.0;
    model.theta[0] = 1.0;
    require(std::abs(predict_rate(model, 0, 0) - std::exp(1.0)) <= 1e-12, "rate e");

    // normalize_positions
    ScalingResult raw;
    raw.positions = {{"a", -1.0}, {"b", 0.0}, {"c", 1.0}};
    const ScalingResult same = normalize_positions(raw, Normalization::Raw);
    require(same.positions == raw.positions, "raw normalization is the identity");
    const ScalingResult z = normalize_positions(raw, Normalization::ZScore);
    require(std::abs(z.positions.at("a") + 1.2247) <= 1e-4 &&
                std::abs(z.positions.at("c") - 1.2247) <= 1e-4,
            "zscore +-1.2247");
    const ScalingResult u = normalize_positions(raw, Normalization::UnitInterval);
    require(u.positions.at("a") == 0.0 && u.positions.at("b") == 0.5 &&
                u.positions.at("c") == 1.0,
            "unit-interval endpoints");
}

void criterion_orientation() {
    std::mt19937_64 rng(31337);
    std::uniform_real_distribution<double> value(-4.0, 4.0);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 25);
        PositionMap pred, negated;
        GoldPositions gold;
        for (int i = 0; i < n; ++i) {
            std::string s = std::to_string(i);
            const std::string id = "p" + std::string(3 - s.size(), '0') + s;
            const double v = value(rng);
            pred[id] = v;
            negated[id] = -v;
            gold.scores[id] = value(rng);
        }
        EvalReport a, b;
        try {
            a = evaluate(pred, gold);
            b = evaluate(negated, gold);
        } catch (const std::exception&) {
            continue;  // degenerate draw
        }
        require(a.pa == b.pa, "PA changed under negation at trial " + std::to_string(trial));
        require(a.pearson == b.pearson,
                "Pearson changed under negation at trial " + std::to_string(trial));
        require(a.spearman == b.spearman,
                "Spearman changed under negation at trial " + std::to_string(trial));
    }
}

void criterion_batch_table() {
    // the documented SE hand value
    std::vector<EvalReport> reports(3);
    reports[0].pa = 0.1;
    reports[1].pa = 0.2;
    reports[2].pa = 0.3;
    const AggregateSummary s = aggregate(reports);
    require(std::abs(s.pa.mean - 0.2) <= 1e-12, "aggregate mean");
    require(std::abs(s.pa.se - 0.0577) <= 1e-4, "aggregate SE vs hand value 0.0577");

    // a five-run manifest through the CLI produces the mean-(SE) table
    const testutil::TempDir dir;
    const std::string corpus = (kData / "toy" / "corpus").string();
    const std::string embeddings = (kData / "toy" / "embeddings.vec").string();
    const std::string gold = (kData / "toy" / "gold.tsv").string();
    const fs::path sem_tsv = dir.path() / "sem.tsv";
    const fs::path wf_tsv = dir.path() / "wf.tsv";
    require(run_cli("semscale --corpus " + corpus + " --embeddings " + embeddings + " --out " +
                    sem_tsv.string()) == 0,
            "semscale run failed");
    require(run_cli("wordfish --corpus " + corpus + " --max-iter 4000 --out " +
                    wf_tsv.string()) == 0,
            "wordfish run failed");

    std::ostringstream manifest;
    for (int i = 0; i < 5; ++i)
        manifest << "semscale\t" << sem_tsv.string() << "\t" << gold << "\n";
    for (int i = 0; i < 5; ++i)
        manifest << "wordfish\t" << wf_tsv.string() << "\t" << gold << "\n";
    write_file(dir.path() / "runs.tsv", manifest.str());

    const fs::path table = dir.path() / "table.txt";
    const std::string cmd = kBin + " eval-batch --runs " + (dir.path() / "runs.tsv").string() +
                            " > " + table.string() + " 2>/dev/null";
    require(std::system(cmd.c_str()) == 0, "eval-batch failed");
    const std::string text = read_file(table);
    require(text.find("label") != std::string::npos &&
                text.find("PA") != std::string::npos &&
                text.find("r_P") != std::string::npos &&
                text.find("r_S") != std::string::npos,
            "table header missing");
    require(text.find("semscale") != std::string::npos &&
                text.find("wordfish") != std::string::npos,
            "method rows missing");
    // five identical runs per row: every SE is exactly 0.000
    std::size_t se_cells = 0, pos = 0;
    while ((pos = text.find("(0.000)", pos)) != std::string::npos) {
        ++se_cells;
        pos += 7;
    }
    require(se_cells == 6, "expected six zero SE cells, saw " + std::to_string(se_cells));
}

// --------------------------------------------------------------------------

struct Criterion {
    int id;
    std::string name;
    std::function<void()> fn;
};

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "harmonic-function suite (200 graphs, N<=50, 1e-9/1e-6, <30s)",
         [] { criterion_harmonic(30.0); }},
        {2, "end-to-end determinism on the bundled toy corpus (TSV/JSON/SVG)",
         criterion_determinism},
        {3, "two-cluster corpus separates at the pivot midpoint", criterion_clusters},
        {4, "wordfish recovery (N=20, V=500, |r|>=0.95) and gradient checks (<60s)",
         [] { criterion_wordfish(60.0); }},
        {5, "metrics match brute-force oracles (100 instances, exact/1e-12)",
         criterion_metric_oracle},
        {6, "formula spot checks (tf/idf/tfidf, cosine, rates, normalization)",
         criterion_formulas},
        {7, "orientation invariance of reported metrics", criterion_orientation},
        {8, "eval-batch mean-(SE) table and the 0.0577 hand value", criterion_batch_table},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto started = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = true;
        try {
            c.fn();
        } catch (const Failure& f) {
            ok = false;
            detail = f.detail;
        } catch (const std::exception& e) {
            ok = false;
            detail = e.what();
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        std::printf("%s  criterion %d: %s  [%.2fs]%s%s\n", ok ? "PASS" : "FAIL", c.id,
                    c.name.c_str(), elapsed, detail.empty() ? "" : "  -- ", detail.c_str());
        if (!ok) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
