#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "scalebench/dataset.hpp"
#include "scalebench/matrix.hpp"

namespace scalebench {

/// A trained binary predictor. Prediction is pure and thread-safe.
class Classifier {
public:
    virtual ~Classifier() = default;
    virtual int predict(std::span<const double> x) const = 0;
    virtual std::vector<int> predict(const Matrix& x) const;
};

// ---------------------------------------------------------------- KNN

class KnnClassifier final : public Classifier {
public:
    KnnClassifier(Matrix train, std::vector<int> labels, std::size_t k);

    using Classifier::predict;
    int predict(std::span<const double> x) const override;

    /// Indices of the k nearest rows, nearest first (ties: lower index).
    std::vector<std::size_t> neighbors(std::span<const double> x) const;
    std::size_t k() const noexcept { return k_; }

private:
    Matrix train_;
    std::vector<int> labels_;
    std::size_t k_;
};

KnnClassifier train_knn(const Dataset& train, std::size_t k = 5);

/// k smallest squared distances from x to the rows of `reference`, ordered by
/// (distance, index). Writes distances into `out_sq` when given.
std::vector<std::size_t> nearest_rows(const Matrix& reference, std::span<const double> x, std::size_t k,
                                      std::vector<double>* out_sq = nullptr);

// ---------------------------------------------------------------- Gaussian naive Bayes

class GaussianNb final : public Classifier {
public:
    using Classifier::predict;
    int predict(std::span<const double> x) const override;
    /// Joint log-likelihood log P(c) + sum_j log N(x_j | mu_cj, var_cj).
    std::array<double, 2> log_posterior(std::span<const double> x) const;

    const std::array<double, 2>& priors() const noexcept { return priors_; }
    const std::array<std::vector<double>, 2>& means() const noexcept { return means_; }
    const std::array<std::vector<double>, 2>& variances() const noexcept { return vars_; }
    double epsilon() const noexcept { return epsilon_; }

private:
    friend GaussianNb train_gnb(const Matrix&, std::span<const int>);
    std::array<double, 2> priors_{};
    std::array<std::vector<double>, 2> means_, vars_;
    double epsilon_ = 0.0;
};

GaussianNb train_gnb(const Matrix& x, std::span<const int> y);
GaussianNb train_gnb(const Dataset& train);

// ---------------------------------------------------------------- Perceptron

struct PerceptronOptions {
    std::size_t max_iter = 1000;
    double tol = 1e-3;
    std::uint64_t seed = 0;
    /// Consecutive epochs without a tol improvement before stopping.
    std::size_t patience = 5;
};

class Perceptron final : public Classifier {
public:
    Perceptron() = default;
    Perceptron(std::vector<double> weights, double bias) : weights_(std::move(weights)), bias_(bias) {}

    using Classifier::predict;
    int predict(std::span<const double> x) const override { return decision(x) >= 0.0 ? 1 : 0; }
    double decision(std::span<const double> x) const;

    const std::vector<double>& weights() const noexcept { return weights_; }
    double bias() const noexcept { return bias_; }
    std::size_t epochs() const noexcept { return epochs_; }
    std::size_t updates() const noexcept { return updates_; }

private:
    friend Perceptron train_perceptron(const Matrix&, std::span<const int>, const PerceptronOptions&);
    std::vector<double> weights_;
    double bias_ = 0.0;
    std::size_t epochs_ = 0;
    std::size_t updates_ = 0;
};

/// Mistake-driven perceptron, learning rate 1, zero init, seeded per-epoch
/// shuffle. Stops on an error-free epoch, when the epoch error rate does not
/// beat the best so far by more than tol, or after max_iter epochs.
Perceptron train_perceptron(const Matrix& x, std::span<const int> y, const PerceptronOptions& options = {});
Perceptron train_perceptron(const Dataset& train, const PerceptronOptions& options = {});

// ---------------------------------------------------------------- CART

double gini_impurity(double w0, double w1);

struct TreeOptions {
    std::size_t max_depth = 0;     // 0: unlimited
    std::size_t max_features = 0;  // 0: all features at every split
    std::uint64_t seed = 0;        // feature sampling
};

/// Row order of every column, ascending by value then row index.
class SortedColumns {
public:
    explicit SortedColumns(const Matrix& x);
    const std::vector<std::uint32_t>& order(std::size_t feature) const { return order_[feature]; }
    std::size_t n_features() const noexcept { return order_.size(); }

private:
    std::vector<std::vector<std::uint32_t>> order_;
};

class DecisionTree final : public Classifier {
public:
    struct Node {
        int feature = -1;  // -1 for leaves
        double threshold = 0.0;
        // Largest value sent left and smallest value sent right during training.
        double lo = 0.0, hi = 0.0;
        int left = -1, right = -1;
        int label = 0;
    };

    using Classifier::predict;
    int predict(std::span<const double> x) const override;

    const std::vector<Node>& nodes() const noexcept { return nodes_; }
    std::size_t depth() const;
    std::size_t leaf_count() const;

private:
    friend class TreeBuilder;
    std::vector<Node> nodes_;
};

/// Gini CART. Candidate thresholds are midpoints of consecutive distinct
/// values; ties in impurity decrease go to the lower feature, then the lower
/// threshold. Rows with zero weight are ignored. An empty `weights` means 1
/// per row. `sorted` may be passed to reuse a presort of `x`.
DecisionTree train_tree(const Matrix& x, std::span<const int> y, std::span<const double> weights = {},
                        const TreeOptions& options = {}, const SortedColumns* sorted = nullptr);
DecisionTree train_tree(const Dataset& train, const TreeOptions& options = {});

// ---------------------------------------------------------------- LDA

class Lda final : public Classifier {
public:
    using Classifier::predict;
    int predict(std::span<const double> x) const override { return decision(x) > 0.0 ? 1 : 0; }
    /// delta_1(x) - delta_0(x).
    double decision(std::span<const double> x) const;

    const std::array<std::vector<double>, 2>& means() const noexcept { return means_; }
    /// Sigma^-1 (mu_1 - mu_0).
    const std::vector<double>& coefficients() const noexcept { return coef_; }
    double intercept() const noexcept { return intercept_; }

private:
    friend Lda train_lda(const Matrix&, std::span<const int>);
    std::array<std::vector<double>, 2> means_;
    std::vector<double> coef_;
    double intercept_ = 0.0;
};

Lda train_lda(const Matrix& x, std::span<const int> y);
Lda train_lda(const Dataset& train);

}  // namespace scalebench
