#pragma once

#include "scalegraph/corpus.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace scalegraph {

// Poisson ideal-point model: count W_ij has rate
// exp(alpha_i + psi_j + beta_j * theta_i).
struct WordfishModel {
    std::vector<std::string> doc_ids;
    std::vector<std::string> vocabulary;
    Eigen::VectorXd alpha;  // per document; alpha[0] == 0
    Eigen::VectorXd psi;    // per word
    Eigen::VectorXd beta;   // per word
    Eigen::VectorXd theta;  // per document; mean 0, population sd 1 after fit
    std::vector<double> log_likelihood_trace;
    bool converged = false;
    int iterations = 0;
    std::uint64_t seed = 0;
};

struct FitOptions {
    double tol = 1e-8;   // absolute log-likelihood improvement
    int max_iter = 500;
    std::uint64_t seed = 42;
    bool parallel = true;  // the serial schedule is the reference; results are bit-identical
};

// Starting values: alpha from relative row sums, psi from mean counts,
// theta/beta from the leading singular directions of the doubly-centered
// log(W+1) matrix. The seed is used only if that matrix is degenerate.
WordfishModel init_params(const CountMatrix& counts, std::uint64_t seed);

// Poisson log-likelihood with the ln(W!) constant dropped.
double log_likelihood(const WordfishModel& model, const CountMatrix& counts);

struct Gradients {
    Eigen::VectorXd alpha, psi, beta, theta;
};
Gradients ll_gradients(const WordfishModel& model, const CountMatrix& counts);

// Alternating conditional maximization: damped Newton over (psi_j, beta_j)
// per word, then over (alpha_i, theta_i) per document with alpha_0 pinned,
// theta re-standardized each iteration. The sign is fixed so the document
// with the lexicographically smallest id has theta <= 0.
WordfishModel fit(const CountMatrix& counts, const FitOptions& options = {});

double predict_rate(const WordfishModel& model, std::size_t i, std::size_t j);

} // namespace scalegraph
