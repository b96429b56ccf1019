#include "scalebench/ensembles.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "scalebench/error.hpp"
#include "scalebench/rng.hpp"

namespace scalebench {

int majority_vote(std::span<const int> votes) {
    std::size_t ones = 0;
    for (int v : votes) ones += v == 1 ? 1 : 0;
    return ones * 2 > votes.size() ? 1 : 0;
}

int weighted_vote(std::span<const int> query, std::span<const std::size_t> weights) {
    std::size_t w0 = 0, w1 = 0;
    for (std::size_t i = 0; i < query.size(); ++i) (query[i] == 1 ? w1 : w0) += weights[i];
    return w1 > w0 ? 1 : 0;
}

std::size_t argmax_first(std::span<const double> values) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] > values[best]) best = i;
    return best;
}

// ---------------------------------------------------------------- Pool

Pool::Pool(std::vector<Perceptron> members, Matrix dsel, std::vector<int> dsel_labels, std::size_t k_roc)
    : members_(std::move(members)), dsel_(std::move(dsel)), dsel_labels_(std::move(dsel_labels)), k_roc_(k_roc) {
    if (members_.empty()) throw Error("pool: no base models");
    if (dsel_.rows() == 0 || dsel_labels_.size() != dsel_.rows()) throw Error("pool: invalid DSEL");
    if (k_roc_ < 1 || k_roc_ > dsel_.rows()) throw Error("pool: k_roc must lie in [1, n_dsel]");
    dsel_pred_.resize(members_.size() * dsel_.rows());
    for (std::size_t m = 0; m < members_.size(); ++m)
        for (std::size_t j = 0; j < dsel_.rows(); ++j)
            dsel_pred_[m * dsel_.rows() + j] = static_cast<std::uint8_t>(members_[m].predict(dsel_.row(j)));
}

std::vector<int> Pool::predictions(std::span<const double> x) const {
    std::vector<int> out(members_.size());
    for (std::size_t m = 0; m < members_.size(); ++m) out[m] = members_[m].predict(x);
    return out;
}

std::vector<std::size_t> bagging_bootstrap(std::span<const int> labels, std::uint64_t seed, std::size_t index,
                                           std::size_t max_resamples) {
    const std::size_t n = labels.size();
    Rng rng(member_seed(seed, index));
    bool both_in_data = std::find(labels.begin(), labels.end(), 0) != labels.end() &&
                        std::find(labels.begin(), labels.end(), 1) != labels.end();
    std::vector<std::size_t> sample(n);
    for (std::size_t attempt = 0;; ++attempt) {
        std::array<bool, 2> seen{};
        for (auto& s : sample) {
            s = static_cast<std::size_t>(rng.uniform_index(n));
            seen[static_cast<std::size_t>(labels[s])] = true;
        }
        if (!both_in_data || (seen[0] && seen[1]) || attempt >= max_resamples) break;
    }
    return sample;
}

Pool train_bagging(const Matrix& x, std::span<const int> y, const BaggingOptions& options) {
    if (x.rows() == 0) throw Error("bagging: empty training set");
    if (options.pool_size == 0) throw Error("bagging: pool_size must be positive");
    std::vector<Perceptron> members;
    members.reserve(options.pool_size);
    std::vector<int> labels;
    for (std::size_t m = 0; m < options.pool_size; ++m) {
        const auto sample = bagging_bootstrap(y, options.seed, m, options.max_resamples);
        labels.resize(sample.size());
        for (std::size_t i = 0; i < sample.size(); ++i) labels[i] = y[sample[i]];
        auto popts = options.perceptron;
        popts.seed = splitmix64(member_seed(options.seed, m));
        members.push_back(train_perceptron(x.select_rows(sample), labels, popts));
    }
    const std::size_t k = std::min(options.k_roc, x.rows());
    return Pool(std::move(members), x, std::vector<int>(y.begin(), y.end()), k);
}

Pool train_bagging(const Dataset& train, const BaggingOptions& options) {
    return train_bagging(train.features(), train.labels(), options);
}

int predict_majority(const Pool& pool, std::span<const double> x) { return majority_vote(pool.predictions(x)); }

// ---------------------------------------------------------------- Region of competence

RegionOfCompetence region_of_competence(const Pool& pool, std::span<const double> x) {
    RegionOfCompetence roc;
    std::vector<double> sq;
    roc.neighbors = nearest_rows(pool.dsel(), x, pool.k_roc(), &sq);
    roc.distances.reserve(sq.size());
    for (double d : sq) roc.distances.push_back(std::sqrt(d));
    for (auto j : roc.neighbors) roc.labels.push_back(pool.dsel_labels()[j]);
    roc.pool_size = pool.size();
    roc.predictions.resize(pool.size() * roc.size());
    for (std::size_t m = 0; m < pool.size(); ++m)
        for (std::size_t j = 0; j < roc.size(); ++j)
            roc.predictions[m * roc.size() + j] = pool.dsel_prediction(m, roc.neighbors[j]);
    return roc;
}

namespace {

std::vector<double> ola_over(const RegionOfCompetence& roc, std::span<const std::size_t> positions) {
    std::vector<double> c(roc.pool_size, 0.0);
    if (positions.empty()) return c;
    for (std::size_t m = 0; m < roc.pool_size; ++m) {
        std::size_t hits = 0;
        for (auto j : positions) hits += roc.correct(m, j) ? 1 : 0;
        c[m] = static_cast<double>(hits) / static_cast<double>(positions.size());
    }
    return c;
}

std::vector<std::size_t> all_positions(const RegionOfCompetence& roc) {
    std::vector<std::size_t> p(roc.size());
    for (std::size_t j = 0; j < p.size(); ++j) p[j] = j;
    return p;
}

}  // namespace

std::vector<double> ola_competences(const RegionOfCompetence& roc) { return ola_over(roc, all_positions(roc)); }

std::vector<double> lca_competences(const RegionOfCompetence& roc, std::span<const int> query) {
    std::vector<double> c(roc.pool_size, 0.0);
    for (std::size_t m = 0; m < roc.pool_size; ++m) {
        std::size_t total = 0, hits = 0;
        for (std::size_t j = 0; j < roc.size(); ++j) {
            if (roc.labels[j] != query[m]) continue;
            ++total;
            hits += roc.prediction(m, j) == query[m] ? 1 : 0;
        }
        c[m] = total == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(total);
    }
    return c;
}

McbDecision mcb_decide(const RegionOfCompetence& roc, std::span<const int> query, const McbOptions& options) {
    McbDecision d;
    for (std::size_t j = 0; j < roc.size(); ++j) {
        std::size_t same = 0;
        for (std::size_t m = 0; m < roc.pool_size; ++m) same += roc.prediction(m, j) == query[m] ? 1 : 0;
        const double similarity = static_cast<double>(same) / static_cast<double>(roc.pool_size);
        if (similarity >= options.similarity_threshold) d.kept_neighbors.push_back(j);
    }
    if (d.kept_neighbors.empty()) d.kept_neighbors = all_positions(roc);
    d.competences = ola_over(roc, d.kept_neighbors);

    const std::size_t best = argmax_first(d.competences);
    bool take = roc.pool_size == 1;
    if (!take) {
        double second = -1.0;
        for (std::size_t m = 0; m < roc.pool_size; ++m)
            if (m != best) second = std::max(second, d.competences[m]);
        take = d.competences[best] - second > options.diff_threshold;
    }
    d.selected = take;
    d.model = best;
    d.prediction = take ? query[best] : majority_vote(query);
    return d;
}

KnoraESelection knora_e_select(const RegionOfCompetence& roc) {
    for (std::size_t k = roc.size(); k >= 1; --k) {
        KnoraESelection s;
        for (std::size_t m = 0; m < roc.pool_size; ++m) {
            bool all = true;
            for (std::size_t j = 0; j < k && all; ++j) all = roc.correct(m, j);
            if (all) s.models.push_back(m);
        }
        if (!s.models.empty()) {
            s.k_used = k;
            return s;
        }
    }
    return {};
}

std::vector<std::size_t> knora_u_weights(const RegionOfCompetence& roc) {
    std::vector<std::size_t> w(roc.pool_size, 0);
    for (std::size_t m = 0; m < roc.pool_size; ++m)
        for (std::size_t j = 0; j < roc.size(); ++j) w[m] += roc.correct(m, j) ? 1 : 0;
    return w;
}

int predict_ola(const Pool& pool, std::span<const double> x) {
    const auto q = pool.predictions(x);
    return q[argmax_first(ola_competences(region_of_competence(pool, x)))];
}

int predict_lca(const Pool& pool, std::span<const double> x) {
    const auto q = pool.predictions(x);
    return q[argmax_first(lca_competences(region_of_competence(pool, x), q))];
}

int predict_mcb(const Pool& pool, std::span<const double> x, const McbOptions& options) {
    const auto q = pool.predictions(x);
    return mcb_decide(region_of_competence(pool, x), q, options).prediction;
}

int predict_knora_e(const Pool& pool, std::span<const double> x) {
    const auto q = pool.predictions(x);
    const auto sel = knora_e_select(region_of_competence(pool, x));
    if (sel.models.empty()) return majority_vote(q);
    std::vector<int> votes;
    for (auto m : sel.models) votes.push_back(q[m]);
    return majority_vote(votes);
}

int predict_knora_u(const Pool& pool, std::span<const double> x) {
    const auto q = pool.predictions(x);
    const auto w = knora_u_weights(region_of_competence(pool, x));
    if (std::all_of(w.begin(), w.end(), [](std::size_t v) { return v == 0; })) return majority_vote(q);
    return weighted_vote(q, w);
}

// ---------------------------------------------------------------- Random forest

std::size_t default_max_features(std::size_t n_features) {
    auto m = static_cast<std::size_t>(std::sqrt(static_cast<double>(n_features)));
    while (m * m < n_features) ++m;
    while (m > 1 && (m - 1) * (m - 1) >= n_features) --m;
    return std::max<std::size_t>(1, m);
}

int RandomForest::predict(std::span<const double> x) const {
    std::size_t ones = 0;
    for (const auto& t : trees_) ones += t.predict(x) == 1 ? 1 : 0;
    return ones * 2 > trees_.size() ? 1 : 0;
}

RandomForest train_random_forest(const Matrix& x, std::span<const int> y, const ForestOptions& options) {
    if (x.rows() == 0) throw Error("random forest: empty training set");
    if (options.n_trees == 0) throw Error("random forest: n_trees must be positive");
    const SortedColumns sorted(x);
    const std::size_t n = x.rows();
    TreeOptions topts;
    topts.max_features = options.max_features == 0 ? default_max_features(x.cols()) : options.max_features;
    std::vector<DecisionTree> trees;
    trees.reserve(options.n_trees);
    std::vector<double> counts(n);
    for (std::size_t t = 0; t < options.n_trees; ++t) {
        Rng rng(member_seed(options.seed, t));
        if (options.bootstrap) {
            std::fill(counts.begin(), counts.end(), 0.0);
            for (std::size_t i = 0; i < n; ++i) counts[rng.uniform_index(n)] += 1.0;
        } else {
            std::fill(counts.begin(), counts.end(), 1.0);
        }
        topts.seed = rng.next();
        trees.push_back(train_tree(x, y, counts, topts, &sorted));
    }
    return RandomForest(std::move(trees));
}

RandomForest train_random_forest(const Dataset& train, const ForestOptions& options) {
    return train_random_forest(train.features(), train.labels(), options);
}

// ---------------------------------------------------------------- AdaBoost

double AdaBoost::score(std::span<const double> x) const {
    double s = 0.0;
    for (const auto& r : rounds_) s += r.stump.predict(x) == 1 ? r.alpha : -r.alpha;
    return s;
}

int AdaBoost::predict(std::span<const double> x) const {
    if (rounds_.empty()) return fallback_;
    return score(x) > 0.0 ? 1 : 0;
}

void adaboost_reweight(std::span<double> weights, std::span<const int> predictions, std::span<const int> labels,
                       double alpha) {
    const double up = std::exp(alpha), down = std::exp(-alpha);
    double sum = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        weights[i] *= predictions[i] != labels[i] ? up : down;
        sum += weights[i];
    }
    for (auto& v : weights) v /= sum;
}

AdaBoost train_adaboost(const Matrix& x, std::span<const int> y, std::size_t n_rounds) {
    const std::size_t n = x.rows();
    if (n < 2 || y.size() != n) throw Error("adaboost: need at least 2 labelled rows");
    const std::size_t ones = static_cast<std::size_t>(std::count(y.begin(), y.end(), 1));
    if (ones == 0 || ones == n) throw Error("adaboost: training data holds a single class");
    const int fallback = ones * 2 > n ? 1 : 0;

    const SortedColumns sorted(x);
    std::vector<double> w(n, 1.0 / static_cast<double>(n));
    std::vector<BoostRound> rounds;
    TreeOptions stump;
    stump.max_depth = 1;
    std::vector<int> pred(n);
    for (std::size_t t = 0; t < n_rounds; ++t) {
        auto tree = train_tree(x, y, w, stump, &sorted);
        double wrong = 0.0, total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            pred[i] = tree.predict(x.row(i));
            total += w[i];
            if (pred[i] != y[i]) wrong += w[i];
        }
        const double eps = wrong / total;
        if (eps >= 0.5) break;
        if (eps <= 0.0) {
            rounds.push_back({std::move(tree), 10.0, 0.0});
            break;
        }
        const double alpha = 0.5 * std::log((1.0 - eps) / eps);
        rounds.push_back({std::move(tree), alpha, eps});
        adaboost_reweight(w, pred, y, alpha);
    }
    return AdaBoost(std::move(rounds), fallback);
}

AdaBoost train_adaboost(const Dataset& train, std::size_t n_rounds) {
    return train_adaboost(train.features(), train.labels(), n_rounds);
}

}  // namespace scalebench
