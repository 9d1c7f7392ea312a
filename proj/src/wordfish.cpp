#include "scalegraph/wordfish.hpp"

#include "scalegraph/errors.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace scalegraph {

namespace {

constexpr double kExpLimit = 700.0;  // exp() overflows just above 709
constexpr int kMaxHalvings = 40;
constexpr int kMaxInnerSteps = 12;
constexpr double kInnerTol = 1e-12;  // per-block improvement worth iterating on

struct Standardized {
    double mean = 0.0;
    double sd = 0.0;
};

Standardized moments(const Eigen::VectorXd& v) {
    Standardized s;
    s.mean = v.mean();
    s.sd = std::sqrt((v.array() - s.mean).square().sum() / static_cast<double>(v.size()));
    return s;
}

Eigen::MatrixXd to_dense(const CountMatrix& counts) {
    const long n = static_cast<long>(counts.n_docs());
    const long v = static_cast<long>(counts.n_words());
    Eigen::MatrixXd w(n, v);
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < v; ++j) w(i, j) = static_cast<double>(counts.at(i, j));
    return w;
}

bool all_rows_identical(const Eigen::MatrixXd& w) {
    for (long i = 1; i < w.rows(); ++i)
        if (w.row(i) != w.row(0)) return false;
    return true;
}

// Column j log-likelihood contribution under trial (psi, beta);
// -inf signals an unusable (overflowing) trial step.
double column_ll(const Eigen::MatrixXd& w, const Eigen::VectorXd& alpha,
                 const Eigen::VectorXd& theta, long j, double psi, double beta) {
    double ll = 0.0;
    for (long i = 0; i < w.rows(); ++i) {
        const double eta = alpha[i] + psi + beta * theta[i];
        if (eta > kExpLimit) return -std::numeric_limits<double>::infinity();
        ll += w(i, j) * eta - std::exp(eta);
    }
    return ll;
}

double row_ll(const Eigen::MatrixXd& w, const Eigen::VectorXd& psi,
              const Eigen::VectorXd& beta, long i, double alpha, double theta) {
    double ll = 0.0;
    for (long j = 0; j < w.cols(); ++j) {
        const double eta = alpha + psi[j] + beta[j] * theta;
        if (eta > kExpLimit) return -std::numeric_limits<double>::infinity();
        ll += w(i, j) * eta - std::exp(eta);
    }
    return ll;
}

// Conditional maximization of (psi_j, beta_j) with documents fixed:
// damped Newton steps until the block stops improving.
void update_word(const Eigen::MatrixXd& w, const Eigen::VectorXd& alpha,
                 const Eigen::VectorXd& theta, long j, Eigen::VectorXd& psi,
                 Eigen::VectorXd& beta) {
    double base = column_ll(w, alpha, theta, j, psi[j], beta[j]);
    for (int inner = 0; inner < kMaxInnerSteps; ++inner) {
        double g1 = 0.0, g2 = 0.0, s0 = 0.0, s1 = 0.0, s2 = 0.0;
        for (long i = 0; i < w.rows(); ++i) {
            const double eta = alpha[i] + psi[j] + beta[j] * theta[i];
            const double lambda = std::exp(std::min(eta, kExpLimit));
            const double resid = w(i, j) - lambda;
            g1 += resid;
            g2 += theta[i] * resid;
            s0 += lambda;
            s1 += theta[i] * lambda;
            s2 += theta[i] * theta[i] * lambda;
        }
        const double det = s0 * s2 - s1 * s1;  // Hessian is -[s0 s1; s1 s2]
        if (det <= 0.0 || !std::isfinite(det)) return;
        const double step_psi = (s2 * g1 - s1 * g2) / det;
        const double step_beta = (s0 * g2 - s1 * g1) / det;

        bool accepted = false;
        double damp = 1.0;
        for (int h = 0; h < kMaxHalvings; ++h, damp *= 0.5) {
            const double trial_psi = psi[j] + damp * step_psi;
            const double trial_beta = beta[j] + damp * step_beta;
            const double trial_ll = column_ll(w, alpha, theta, j, trial_psi, trial_beta);
            if (trial_ll >= base) {
                const double gain = trial_ll - base;
                psi[j] = trial_psi;
                beta[j] = trial_beta;
                base = trial_ll;
                accepted = gain > kInnerTol;
                break;
            }
        }
        if (!accepted) return;
    }
}

// Conditional maximization of (alpha_i, theta_i) with words fixed;
// document 0 keeps alpha pinned at 0 and moves only theta.
void update_doc(const Eigen::MatrixXd& w, const Eigen::VectorXd& psi,
                const Eigen::VectorXd& beta, long i, Eigen::VectorXd& alpha,
                Eigen::VectorXd& theta) {
    double base = row_ll(w, psi, beta, i, alpha[i], theta[i]);
    for (int inner = 0; inner < kMaxInnerSteps; ++inner) {
        double g1 = 0.0, g2 = 0.0, s0 = 0.0, s1 = 0.0, s2 = 0.0;
        for (long j = 0; j < w.cols(); ++j) {
            const double eta = alpha[i] + psi[j] + beta[j] * theta[i];
            const double lambda = std::exp(std::min(eta, kExpLimit));
            const double resid = w(i, j) - lambda;
            g1 += resid;
            g2 += beta[j] * resid;
            s0 += lambda;
            s1 += beta[j] * lambda;
            s2 += beta[j] * beta[j] * lambda;
        }

        double step_alpha = 0.0, step_theta = 0.0;
        if (i == 0) {
            if (s2 <= 0.0 || !std::isfinite(s2)) return;
            step_theta = g2 / s2;
        } else {
            const double det = s0 * s2 - s1 * s1;
            if (det <= 0.0 || !std::isfinite(det)) return;
            step_alpha = (s2 * g1 - s1 * g2) / det;
            step_theta = (s0 * g2 - s1 * g1) / det;
        }

        bool accepted = false;
        double damp = 1.0;
        for (int h = 0; h < kMaxHalvings; ++h, damp *= 0.5) {
            const double trial_alpha = alpha[i] + damp * step_alpha;
            const double trial_theta = theta[i] + damp * step_theta;
            const double trial_ll = row_ll(w, psi, beta, i, trial_alpha, trial_theta);
            if (trial_ll >= base) {
                const double gain = trial_ll - base;
                alpha[i] = trial_alpha;
                theta[i] = trial_theta;
                base = trial_ll;
                accepted = gain > kInnerTol;
                break;
            }
        }
        if (!accepted) return;
    }
}

} // namespace

WordfishModel init_params(const CountMatrix& counts, std::uint64_t seed) {
    const long n = static_cast<long>(counts.n_docs());
    const long v = static_cast<long>(counts.n_words());
    if (n < 2) throw FormatError("wordfish needs at least 2 documents");

    WordfishModel model;
    model.doc_ids = counts.doc_ids;
    model.vocabulary = counts.vocabulary;
    model.seed = seed;

    const Eigen::MatrixXd w = to_dense(counts);
    const Eigen::VectorXd row_sums = w.rowwise().sum();
    model.alpha = (row_sums.array() / row_sums[0]).log();
    model.psi = (w.colwise().mean().array()).log();

    // Leading singular directions of the doubly-centered log(W+1).
    Eigen::MatrixXd c = (w.array() + 1.0).log().matrix();
    const Eigen::VectorXd row_means = c.rowwise().mean();
    const Eigen::VectorXd col_means = c.colwise().mean();
    const double grand_mean = c.mean();
    c.colwise() -= row_means;
    c.rowwise() -= col_means.transpose();
    c.array() += grand_mean;

    Eigen::BDCSVD<Eigen::MatrixXd> svd(c, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double s0 = svd.singularValues()(0);
    if (s0 > 1e-12 * std::max(1.0, c.norm())) {
        const Eigen::VectorXd u = svd.matrixU().col(0);
        const Standardized m = moments(u);
        model.theta = (u.array() - m.mean) / m.sd;
        model.beta = s0 * m.sd * svd.matrixV().col(0);
    } else {
        // Degenerate centered matrix; fall back to a seeded random start.
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> normal(0.0, 1.0);
        model.theta.resize(n);
        for (long i = 0; i < n; ++i) model.theta[i] = normal(rng);
        const Standardized m = moments(model.theta);
        if (m.sd == 0.0) throw DegenerateError("cannot standardize a constant theta start");
        model.theta = (model.theta.array() - m.mean) / m.sd;
        model.beta.resize(v);
        for (long j = 0; j < v; ++j) model.beta[j] = 0.1 * normal(rng);
    }
    return model;
}

double log_likelihood(const WordfishModel& model, const CountMatrix& counts) {
    const long n = static_cast<long>(counts.n_docs());
    const long v = static_cast<long>(counts.n_words());
    if (model.alpha.size() != n || model.theta.size() != n || model.psi.size() != v ||
        model.beta.size() != v)
        throw FormatError("model and count matrix shapes disagree");

    std::vector<double> partial(n, 0.0);
    long bad_i = -1, bad_j = -1;
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) {
        double ll = 0.0;
        for (long j = 0; j < v; ++j) {
            const double eta = model.alpha[i] + model.psi[j] + model.beta[j] * model.theta[i];
            if (eta > kExpLimit) {
#pragma omp critical
                if (bad_i < 0 || i < bad_i || (i == bad_i && j < bad_j)) {
                    bad_i = i;
                    bad_j = j;
                }
                break;
            }
            // W * ln(lambda) is W * eta exactly.
            ll += static_cast<double>(counts.at(i, j)) * eta - std::exp(eta);
        }
        partial[i] = ll;
    }
    if (bad_i >= 0)
        throw DegenerateError("rate overflow at document " + counts.doc_ids[bad_i] + ", word " +
                              counts.vocabulary[bad_j]);

    double total = 0.0;
    for (long i = 0; i < n; ++i) total += partial[i];  // fixed order
    if (!std::isfinite(total)) throw DegenerateError("non-finite log-likelihood");
    return total;
}

Gradients ll_gradients(const WordfishModel& model, const CountMatrix& counts) {
    const long n = static_cast<long>(counts.n_docs());
    const long v = static_cast<long>(counts.n_words());
    Gradients g;
    g.alpha = Eigen::VectorXd::Zero(n);
    g.theta = Eigen::VectorXd::Zero(n);
    g.psi = Eigen::VectorXd::Zero(v);
    g.beta = Eigen::VectorXd::Zero(v);
    for (long i = 0; i < n; ++i) {
        for (long j = 0; j < v; ++j) {
            const double eta = model.alpha[i] + model.psi[j] + model.beta[j] * model.theta[i];
            const double resid = static_cast<double>(counts.at(i, j)) - std::exp(eta);
            g.alpha[i] += resid;
            g.theta[i] += model.beta[j] * resid;
            g.psi[j] += resid;
            g.beta[j] += model.theta[i] * resid;
        }
    }
    return g;
}

WordfishModel fit(const CountMatrix& counts, const FitOptions& options) {
    if (options.tol <= 0.0) throw FormatError("tolerance must be positive");
    const Eigen::MatrixXd w = to_dense(counts);
    if (all_rows_identical(w))
        throw DegenerateError("all documents have identical counts; "
                              "document positions are unidentifiable");

    WordfishModel model = init_params(counts, options.seed);
    const long n = w.rows();
    const long v = w.cols();

    model.log_likelihood_trace.push_back(log_likelihood(model, counts));
    for (int iter = 1; iter <= options.max_iter; ++iter) {
        // Word phase: blocks write disjoint (psi_j, beta_j) and read only
        // document parameters, so the schedule cannot change the result.
#pragma omp parallel for schedule(static) if (options.parallel)
        for (long j = 0; j < v; ++j) update_word(w, model.alpha, model.theta, j, model.psi, model.beta);

        // Document phase: same independence over (alpha_i, theta_i).
#pragma omp parallel for schedule(static) if (options.parallel)
        for (long i = 0; i < n; ++i) update_doc(w, model.psi, model.beta, i, model.alpha, model.theta);

        // Re-standardize theta; psi/beta compensate so every rate is preserved.
        const Standardized m = moments(model.theta);
        if (m.sd == 0.0)
            throw DegenerateError("theta collapsed to a constant; "
                                  "document positions are unidentifiable");
        model.theta = (model.theta.array() - m.mean) / m.sd;
        model.psi += m.mean * model.beta;
        model.beta *= m.sd;

        const double ll = log_likelihood(model, counts);
        const double improvement = ll - model.log_likelihood_trace.back();
        model.log_likelihood_trace.push_back(ll);
        model.iterations = iter;
        if (improvement < options.tol) {
            model.converged = true;
            break;
        }
    }

    // One of the two sign-symmetric optima: lexicographically smallest
    // document id scores non-positive.
    const auto smallest =
        std::min_element(model.doc_ids.begin(), model.doc_ids.end()) - model.doc_ids.begin();
    if (model.theta[smallest] > 0.0) {
        model.theta = -model.theta;
        model.beta = -model.beta;
    }
    return model;
}

double predict_rate(const WordfishModel& model, std::size_t i, std::size_t j) {
    if (i >= static_cast<std::size_t>(model.alpha.size()))
        throw std::out_of_range("document index out of range");
    if (j >= static_cast<std::size_t>(model.psi.size()))
        throw std::out_of_range("word index out of range");
    return std::exp(model.alpha[i] + model.psi[j] + model.beta[j] * model.theta[i]);
}

} // namespace scalegraph
