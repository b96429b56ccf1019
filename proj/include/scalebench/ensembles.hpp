#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "scalebench/classifiers.hpp"
#include "scalebench/dataset.hpp"
#include "scalebench/matrix.hpp"

namespace scalebench {

/// Majority vote over 0/1 predictions; a tie goes to class 0.
int majority_vote(std::span<const int> votes);

// ---------------------------------------------------------------- Pool

/// Base perceptrons plus the reference set (DSEL) used for competence regions.
class Pool {
public:
    Pool(std::vector<Perceptron> members, Matrix dsel, std::vector<int> dsel_labels, std::size_t k_roc = 7);

    std::size_t size() const noexcept { return members_.size(); }
    const std::vector<Perceptron>& members() const noexcept { return members_; }
    const Matrix& dsel() const noexcept { return dsel_; }
    const std::vector<int>& dsel_labels() const noexcept { return dsel_labels_; }
    std::size_t k_roc() const noexcept { return k_roc_; }

    /// Prediction of member m on DSEL row j.
    int dsel_prediction(std::size_t m, std::size_t j) const { return dsel_pred_[m * dsel_.rows() + j]; }
    /// Every member's prediction for x.
    std::vector<int> predictions(std::span<const double> x) const;

private:
    std::vector<Perceptron> members_;
    Matrix dsel_;
    std::vector<int> dsel_labels_;
    std::size_t k_roc_;
    std::vector<std::uint8_t> dsel_pred_;
};

struct BaggingOptions {
    std::size_t pool_size = 100;
    std::size_t k_roc = 7;
    std::size_t max_resamples = 10;
    PerceptronOptions perceptron;
    std::uint64_t seed = 0;
};

/// Bootstrap indices drawn by member `index` of a pool trained with `seed`.
std::vector<std::size_t> bagging_bootstrap(std::span<const int> labels, std::uint64_t seed, std::size_t index,
                                           std::size_t max_resamples = 10);

/// Perceptrons on seeded bootstraps; DSEL is the whole training set.
Pool train_bagging(const Matrix& x, std::span<const int> y, const BaggingOptions& options = {});
Pool train_bagging(const Dataset& train, const BaggingOptions& options = {});

int predict_majority(const Pool& pool, std::span<const double> x);

// ---------------------------------------------------------------- Region of competence

struct RegionOfCompetence {
    std::vector<std::size_t> neighbors;  // nearest first
    std::vector<double> distances;
    std::vector<int> labels;
    std::size_t pool_size = 0;
    /// pool_size x size() predictions of each member on each neighbor.
    std::vector<int> predictions;

    std::size_t size() const noexcept { return neighbors.size(); }
    int prediction(std::size_t model, std::size_t j) const { return predictions[model * size() + j]; }
    bool correct(std::size_t model, std::size_t j) const { return prediction(model, j) == labels[j]; }
};

RegionOfCompetence region_of_competence(const Pool& pool, std::span<const double> x);

// Selection rules. `query` holds every member's prediction for the query.

/// Mean correctness of each member over the region.
std::vector<double> ola_competences(const RegionOfCompetence& roc);
std::vector<double> lca_competences(const RegionOfCompetence& roc, std::span<const int> query);
/// Index of the largest value; ties go to the lower index.
std::size_t argmax_first(std::span<const double> values);

struct McbOptions {
    double similarity_threshold = 0.7;
    double diff_threshold = 0.1;
};

struct McbDecision {
    std::vector<std::size_t> kept_neighbors;  // positions in the region
    std::vector<double> competences;
    bool selected = false;  // false: whole-pool vote
    std::size_t model = 0;
    int prediction = 0;
};

McbDecision mcb_decide(const RegionOfCompetence& roc, std::span<const int> query, const McbOptions& options = {});

struct KnoraESelection {
    std::vector<std::size_t> models;  // empty: whole pool
    std::size_t k_used = 0;           // 0 when falling back
};

KnoraESelection knora_e_select(const RegionOfCompetence& roc);
/// Number of region instances each member classifies correctly.
std::vector<std::size_t> knora_u_weights(const RegionOfCompetence& roc);

/// Weighted 0/1 vote; tie to class 0.
int weighted_vote(std::span<const int> query, std::span<const std::size_t> weights);

int predict_ola(const Pool& pool, std::span<const double> x);
int predict_lca(const Pool& pool, std::span<const double> x);
int predict_mcb(const Pool& pool, std::span<const double> x, const McbOptions& options = {});
int predict_knora_e(const Pool& pool, std::span<const double> x);
int predict_knora_u(const Pool& pool, std::span<const double> x);

// ---------------------------------------------------------------- Random forest

struct ForestOptions {
    std::size_t n_trees = 100;
    std::size_t max_features = 0;  // 0: ceil(sqrt(n_features))
    bool bootstrap = true;
    std::uint64_t seed = 0;
};

class RandomForest final : public Classifier {
public:
    explicit RandomForest(std::vector<DecisionTree> trees) : trees_(std::move(trees)) {}
    using Classifier::predict;
    int predict(std::span<const double> x) const override;
    const std::vector<DecisionTree>& trees() const noexcept { return trees_; }

private:
    std::vector<DecisionTree> trees_;
};

std::size_t default_max_features(std::size_t n_features);
RandomForest train_random_forest(const Matrix& x, std::span<const int> y, const ForestOptions& options = {});
RandomForest train_random_forest(const Dataset& train, const ForestOptions& options = {});

// ---------------------------------------------------------------- AdaBoost

struct BoostRound {
    DecisionTree stump;
    double alpha = 0.0;
    double error = 0.0;
};

class AdaBoost final : public Classifier {
public:
    AdaBoost(std::vector<BoostRound> rounds, int fallback) : rounds_(std::move(rounds)), fallback_(fallback) {}
    using Classifier::predict;
    int predict(std::span<const double> x) const override;
    /// Sum of alpha_t * (+1 | -1).
    double score(std::span<const double> x) const;
    const std::vector<BoostRound>& rounds() const noexcept { return rounds_; }

private:
    std::vector<BoostRound> rounds_;
    int fallback_;  // prediction of an empty ensemble
};

/// Multiplies misclassified weights by exp(alpha), the rest by exp(-alpha), then normalizes.
void adaboost_reweight(std::span<double> weights, std::span<const int> predictions, std::span<const int> labels,
                       double alpha);

/// Discrete two-class AdaBoost over depth-1 trees.
AdaBoost train_adaboost(const Matrix& x, std::span<const int> y, std::size_t n_rounds = 100);
AdaBoost train_adaboost(const Dataset& train, std::size_t n_rounds = 100);

}  // namespace scalebench
