#include "scalebench/classifiers.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "scalebench/error.hpp"
#include "scalebench/rng.hpp"

namespace scalebench {

std::vector<int> Classifier::predict(const Matrix& x) const {
    std::vector<int> out(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) out[i] = predict(x.row(i));
    return out;
}

namespace {

void check_xy(const Matrix& x, std::span<const int> y, const char* who) {
    if (x.rows() == 0) throw Error(std::string(who) + ": empty training set");
    if (y.size() != x.rows()) throw Error(std::string(who) + ": label count does not match row count");
}

std::array<std::size_t, 2> count_classes(std::span<const int> y) {
    std::array<std::size_t, 2> c{};
    for (int v : y) ++c[static_cast<std::size_t>(v)];
    return c;
}

}  // namespace

// ---------------------------------------------------------------- KNN

std::vector<std::size_t> nearest_rows(const Matrix& reference, std::span<const double> x, std::size_t k,
                                      std::vector<double>* out_sq) {
    const std::size_t n = reference.rows();
    k = std::min(k, n);
    std::vector<std::pair<double, std::size_t>> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = {squared_distance(reference.row(i), x), i};
    std::partial_sort(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k), d.end());
    std::vector<std::size_t> idx(k);
    if (out_sq) out_sq->resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        idx[i] = d[i].second;
        if (out_sq) (*out_sq)[i] = d[i].first;
    }
    return idx;
}

KnnClassifier::KnnClassifier(Matrix train, std::vector<int> labels, std::size_t k)
    : train_(std::move(train)), labels_(std::move(labels)), k_(k) {
    check_xy(train_, labels_, "knn");
    if (k_ < 1 || k_ > train_.rows()) throw Error("knn: k must lie in [1, n_train]");
}

std::vector<std::size_t> KnnClassifier::neighbors(std::span<const double> x) const {
    return nearest_rows(train_, x, k_);
}

int KnnClassifier::predict(std::span<const double> x) const {
    std::vector<double> sq;
    const auto idx = nearest_rows(train_, x, k_, &sq);
    std::array<std::size_t, 2> votes{};
    std::array<double, 2> dist{};
    for (std::size_t i = 0; i < idx.size(); ++i) {
        const auto c = static_cast<std::size_t>(labels_[idx[i]]);
        ++votes[c];
        dist[c] += std::sqrt(sq[i]);
    }
    if (votes[1] != votes[0]) return votes[1] > votes[0] ? 1 : 0;
    return dist[1] < dist[0] ? 1 : 0;
}

KnnClassifier train_knn(const Dataset& train, std::size_t k) {
    return KnnClassifier(train.features(), train.labels(), k);
}

// ---------------------------------------------------------------- Gaussian naive Bayes

GaussianNb train_gnb(const Matrix& x, std::span<const int> y) {
    check_xy(x, y, "gnb");
    const auto counts = count_classes(y);
    if (counts[0] == 0 || counts[1] == 0) throw Error("gnb: both classes need at least one instance");
    const std::size_t n = x.rows(), d = x.cols();

    GaussianNb m;
    double max_var = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        double mean = 0;
        for (std::size_t i = 0; i < n; ++i) mean += x(i, j);
        mean /= static_cast<double>(n);
        double ss = 0;
        for (std::size_t i = 0; i < n; ++i) ss += (x(i, j) - mean) * (x(i, j) - mean);
        max_var = std::max(max_var, ss / static_cast<double>(n));
    }
    m.epsilon_ = 1e-9 * (max_var > 0.0 ? max_var : 1.0);

    for (int c = 0; c < 2; ++c) {
        const auto nc = static_cast<double>(counts[c]);
        m.priors_[c] = nc / static_cast<double>(n);
        auto& mu = m.means_[c];
        auto& var = m.vars_[c];
        mu.assign(d, 0.0);
        var.assign(d, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            if (y[i] == c)
                for (std::size_t j = 0; j < d; ++j) mu[j] += x(i, j);
        for (auto& v : mu) v /= nc;
        for (std::size_t i = 0; i < n; ++i)
            if (y[i] == c)
                for (std::size_t j = 0; j < d; ++j) var[j] += (x(i, j) - mu[j]) * (x(i, j) - mu[j]);
        for (auto& v : var) v = v / nc + m.epsilon_;
    }
    return m;
}

GaussianNb train_gnb(const Dataset& train) { return train_gnb(train.features(), train.labels()); }

std::array<double, 2> GaussianNb::log_posterior(std::span<const double> x) const {
    std::array<double, 2> out{};
    for (int c = 0; c < 2; ++c) {
        double s = std::log(priors_[c]);
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double diff = x[j] - means_[c][j];
            s -= 0.5 * std::log(2.0 * std::numbers::pi * vars_[c][j]) + 0.5 * diff * diff / vars_[c][j];
        }
        out[c] = s;
    }
    return out;
}

int GaussianNb::predict(std::span<const double> x) const {
    const auto lp = log_posterior(x);
    return lp[1] > lp[0] ? 1 : 0;
}

// ---------------------------------------------------------------- Perceptron

double Perceptron::decision(std::span<const double> x) const {
    double s = bias_;
    for (std::size_t j = 0; j < weights_.size(); ++j) s += weights_[j] * x[j];
    return s;
}

Perceptron train_perceptron(const Matrix& x, std::span<const int> y, const PerceptronOptions& options) {
    check_xy(x, y, "perceptron");
    const std::size_t n = x.rows(), d = x.cols();
    Perceptron p;
    p.weights_.assign(d, 0.0);
    Rng rng(options.seed);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    std::size_t stale = 0;
    for (std::size_t epoch = 0; epoch < options.max_iter; ++epoch) {
        rng.shuffle(std::span<std::size_t>(order));
        std::size_t mistakes = 0;
        for (auto i : order) {
            const auto row = x.row(i);
            const int pred = p.decision(row) >= 0.0 ? 1 : 0;
            if (pred == y[i]) continue;
            const double sign = y[i] == 1 ? 1.0 : -1.0;
            for (std::size_t j = 0; j < d; ++j) p.weights_[j] += sign * row[j];
            p.bias_ += sign;
            ++mistakes;
        }
        p.epochs_ = epoch + 1;
        p.updates_ += mistakes;
        if (mistakes == 0) break;
        const double err = static_cast<double>(mistakes) / static_cast<double>(n);
        stale = err > best - options.tol ? stale + 1 : 0;
        best = std::min(best, err);
        if (stale >= options.patience) break;
    }
    return p;
}

Perceptron train_perceptron(const Dataset& train, const PerceptronOptions& options) {
    return train_perceptron(train.features(), train.labels(), options);
}

// ---------------------------------------------------------------- CART

double gini_impurity(double w0, double w1) {
    const double w = w0 + w1;
    if (w <= 0.0) return 0.0;
    const double p0 = w0 / w, p1 = w1 / w;
    return 1.0 - p0 * p0 - p1 * p1;
}

SortedColumns::SortedColumns(const Matrix& x) : order_(x.cols()) {
    for (std::size_t j = 0; j < x.cols(); ++j) {
        auto& o = order_[j];
        o.resize(x.rows());
        std::iota(o.begin(), o.end(), 0u);
        std::stable_sort(o.begin(), o.end(), [&](std::uint32_t a, std::uint32_t b) { return x(a, j) < x(b, j); });
    }
}

int DecisionTree::predict(std::span<const double> x) const {
    std::size_t i = 0;
    while (nodes_[i].feature >= 0) {
        const auto& n = nodes_[i];
        const double v = x[static_cast<std::size_t>(n.feature)];
        bool left;
        if (v <= n.lo) left = true;
        else if (v >= n.hi) left = false;
        else left = (v - n.lo) <= (n.hi - v) + 1e-9 * (n.hi - n.lo);
        i = static_cast<std::size_t>(left ? n.left : n.right);
    }
    return nodes_[i].label;
}

std::size_t DecisionTree::depth() const {
    std::vector<std::size_t> d(nodes_.size(), 0);
    std::size_t best = 0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        best = std::max(best, d[i]);
        if (nodes_[i].feature >= 0) {
            d[static_cast<std::size_t>(nodes_[i].left)] = d[i] + 1;
            d[static_cast<std::size_t>(nodes_[i].right)] = d[i] + 1;
        }
    }
    return best;
}

std::size_t DecisionTree::leaf_count() const {
    return static_cast<std::size_t>(
        std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.feature < 0; }));
}

class TreeBuilder {
public:
    TreeBuilder(const Matrix& x, std::span<const int> y, std::span<const double> w, const TreeOptions& opt,
                const SortedColumns& sorted)
        : x_(x), y_(y), w_(w), opt_(opt), rng_(opt.seed), left_(x.rows(), 0) {
        const std::size_t d = x.cols();
        order_.resize(d);
        for (std::size_t j = 0; j < d; ++j) {
            auto& o = order_[j];
            o.reserve(x.rows());
            for (auto i : sorted.order(j))
                if (weight(i) > 0.0) o.push_back(i);
        }
        features_.resize(d);
        std::iota(features_.begin(), features_.end(), 0);
        buffer_.resize(order_.empty() ? 0 : order_[0].size());
    }

    DecisionTree build() {
        tree_.nodes_.clear();
        grow(0, order_.empty() ? 0 : order_[0].size(), 0);
        return std::move(tree_);
    }

private:
    double weight(std::size_t i) const { return w_.empty() ? 1.0 : w_[i]; }

    struct Split {
        bool found = false;
        std::size_t feature = 0;
        std::size_t position = 0;  // last index (exclusive end of left part) in order_[feature]
        double proxy = 0.0;
    };

    int grow(std::size_t begin, std::size_t end, std::size_t depth) {
        const int id = static_cast<int>(tree_.nodes_.size());
        tree_.nodes_.emplace_back();
        double w0 = 0, w1 = 0;
        for (std::size_t p = begin; p < end; ++p) {
            const auto i = order_[0][p];
            (y_[i] == 1 ? w1 : w0) += weight(i);
        }
        tree_.nodes_[static_cast<std::size_t>(id)].label = w1 > w0 ? 1 : 0;
        if (w0 == 0.0 || w1 == 0.0) return id;
        if (opt_.max_depth != 0 && depth >= opt_.max_depth) return id;

        const Split s = best_split(begin, end, w0, w1);
        if (!s.found) return id;

        const auto& ord = order_[s.feature];
        const double lo = x_(ord[s.position - 1], s.feature);
        const double hi = x_(ord[s.position], s.feature);
        double threshold = lo / 2.0 + hi / 2.0;
        if (threshold >= hi || !std::isfinite(threshold)) threshold = lo;

        for (std::size_t p = begin; p < end; ++p) left_[ord[p]] = p < s.position ? 1 : 0;
        for (auto& o : order_) {
            std::size_t nl = begin, nr = 0;
            for (std::size_t p = begin; p < end; ++p) {
                if (left_[o[p]]) o[nl++] = o[p];
                else buffer_[nr++] = o[p];
            }
            std::copy(buffer_.begin(), buffer_.begin() + static_cast<std::ptrdiff_t>(nr),
                      o.begin() + static_cast<std::ptrdiff_t>(nl));
        }

        const int l = grow(begin, s.position, depth + 1);
        const int r = grow(s.position, end, depth + 1);
        auto& node = tree_.nodes_[static_cast<std::size_t>(id)];
        node.feature = static_cast<int>(s.feature);
        node.threshold = threshold;
        node.lo = lo;
        node.hi = hi;
        node.left = l;
        node.right = r;
        return id;
    }

    Split best_split(std::size_t begin, std::size_t end, double w0, double w1) {
        const std::size_t d = features_.size();
        const double total = w0 + w1;
        const double parent = (w0 * w0 + w1 * w1) / total;
        const bool sampled = opt_.max_features != 0 && opt_.max_features < d;
        Split best;

        std::size_t visited = 0;
        for (std::size_t k = 0; k < d; ++k) {
            if (sampled) {
                if (visited >= opt_.max_features && best.found) break;
                const auto pick = k + static_cast<std::size_t>(rng_.uniform_index(d - k));
                std::swap(features_[k], features_[pick]);
            }
            const std::size_t f = features_[k];
            const auto& ord = order_[f];
            if (x_(ord[begin], f) == x_(ord[end - 1], f)) continue;
            ++visited;

            double l0 = 0, l1 = 0;
            for (std::size_t p = begin; p + 1 < end; ++p) {
                const auto i = ord[p];
                (y_[i] == 1 ? l1 : l0) += weight(i);
                if (!(x_(i, f) < x_(ord[p + 1], f))) continue;
                const double r0 = w0 - l0, r1 = w1 - l1;
                const double wl = l0 + l1, wr = r0 + r1;
                const double proxy = (l0 * l0 + l1 * l1) / wl + (r0 * r0 + r1 * r1) / wr;
                if (proxy <= parent + 1e-12 * total) continue;
                if (!best.found || proxy > best.proxy || (proxy == best.proxy && f < best.feature)) {
                    best = {true, f, p + 1, proxy};
                }
            }
        }
        if (sampled) std::sort(features_.begin(), features_.end());
        return best;
    }

    const Matrix& x_;
    std::span<const int> y_;
    std::span<const double> w_;
    TreeOptions opt_;
    Rng rng_;
    std::vector<std::vector<std::uint32_t>> order_;
    std::vector<std::uint8_t> left_;
    std::vector<std::uint32_t> buffer_;
    std::vector<std::size_t> features_;
    DecisionTree tree_;
};

DecisionTree train_tree(const Matrix& x, std::span<const int> y, std::span<const double> weights,
                        const TreeOptions& options, const SortedColumns* sorted) {
    check_xy(x, y, "tree");
    if (!weights.empty() && weights.size() != x.rows()) throw Error("tree: weight count does not match row count");
    std::optional<SortedColumns> own;
    if (sorted == nullptr) {
        own.emplace(x);
        sorted = &*own;
    }
    TreeBuilder builder(x, y, weights, options, *sorted);
    auto tree = builder.build();
    if (tree.nodes().empty()) throw Error("tree: no training rows with positive weight");
    return tree;
}

DecisionTree train_tree(const Dataset& train, const TreeOptions& options) {
    return train_tree(train.features(), train.labels(), {}, options);
}

// ---------------------------------------------------------------- LDA

double Lda::decision(std::span<const double> x) const {
    double s = intercept_;
    for (std::size_t j = 0; j < coef_.size(); ++j) s += coef_[j] * x[j];
    return s;
}

Lda train_lda(const Matrix& x, std::span<const int> y) {
    check_xy(x, y, "lda");
    const auto counts = count_classes(y);
    if (counts[0] < 2 || counts[1] < 2) throw Error("lda: each class needs at least 2 instances");
    const std::size_t n = x.rows(), d = x.cols();

    Lda m;
    for (int c = 0; c < 2; ++c) {
        m.means_[c].assign(d, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            if (y[i] == c)
                for (std::size_t j = 0; j < d; ++j) m.means_[c][j] += x(i, j);
        for (auto& v : m.means_[c]) v /= static_cast<double>(counts[c]);
    }

    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    Eigen::VectorXd diff(static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < n; ++i) {
        const auto& mu = m.means_[static_cast<std::size_t>(y[i])];
        for (std::size_t j = 0; j < d; ++j) diff[static_cast<Eigen::Index>(j)] = x(i, j) - mu[j];
        cov.selfadjointView<Eigen::Lower>().rankUpdate(diff);
    }
    cov = cov.selfadjointView<Eigen::Lower>();
    cov /= static_cast<double>(n - 2);
    double ridge = 1e-6 * cov.trace() / static_cast<double>(d);
    if (!(ridge > 0.0)) ridge = 1e-6;
    cov.diagonal().array() += ridge;

    Eigen::VectorXd mu0(static_cast<Eigen::Index>(d)), mu1(static_cast<Eigen::Index>(d));
    for (std::size_t j = 0; j < d; ++j) {
        mu0[static_cast<Eigen::Index>(j)] = m.means_[0][j];
        mu1[static_cast<Eigen::Index>(j)] = m.means_[1][j];
    }
    const Eigen::LDLT<Eigen::MatrixXd> solver(cov);
    const Eigen::VectorXd a0 = solver.solve(mu0);
    const Eigen::VectorXd a1 = solver.solve(mu1);
    const Eigen::VectorXd w = a1 - a0;
    m.coef_.assign(w.data(), w.data() + w.size());
    const double p0 = static_cast<double>(counts[0]) / static_cast<double>(n);
    const double p1 = static_cast<double>(counts[1]) / static_cast<double>(n);
    m.intercept_ = -0.5 * (mu1.dot(a1) - mu0.dot(a0)) + std::log(p1 / p0);
    return m;
}

Lda train_lda(const Dataset& train) { return train_lda(train.features(), train.labels()); }

}  // namespace scalebench
