#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "scalebench/classifiers.hpp"
#include "scalebench/error.hpp"
#include "test_util.hpp"

using namespace scalebench;

namespace {

std::size_t training_errors(const Classifier& c, const Matrix& x, std::span<const int> y) {
    std::size_t e = 0;
    for (std::size_t r = 0; r < x.rows(); ++r) e += c.predict(x.row(r)) != y[r];
    return e;
}

// log N(x | mu, var), written out independently of the library.
double log_gauss(double x, double mu, double var) {
    return -0.5 * std::log(2.0 * std::numbers::pi * var) - (x - mu) * (x - mu) / (2.0 * var);
}

}  // namespace

TEST_CASE("knn") {
    const Matrix x{{0, 0}, {1, 0}, {0, 1}, {5, 5}, {6, 5}, {5, 6}, {6, 6}};
    const std::vector<int> y{0, 0, 0, 1, 1, 1, 1};

    SUBCASE("exact match with k=1") {
        const KnnClassifier knn(x, y, 1);
        for (std::size_t r = 0; r < x.rows(); ++r) CHECK(knn.predict(x.row(r)) == y[r]);
    }
    SUBCASE("unanimous vote") {
        const KnnClassifier knn(x, y, 4);
        CHECK(knn.predict(std::vector<double>{5.5, 5.5}) == 1);
    }
    SUBCASE("vote tie goes to the smaller summed distance") {
        const Matrix t{{0.5}, {-1.0}};
        CHECK(KnnClassifier(t, {0, 1}, 2).predict(std::vector<double>{0.0}) == 0);
        CHECK(KnnClassifier(t, {1, 0}, 2).predict(std::vector<double>{0.0}) == 1);
        // Equal sums fall back to class 0.
        CHECK(KnnClassifier(Matrix{{1.0}, {-1.0}}, {1, 0}, 2).predict(std::vector<double>{0.0}) == 0);
    }
    SUBCASE("distance ties keep the lower index") {
        const KnnClassifier knn(Matrix{{1.0}, {-1.0}, {1.0}, {3.0}}, {0, 1, 1, 0}, 3);
        CHECK(knn.neighbors(std::vector<double>{0.0}) == std::vector<std::size_t>{0, 1, 2});
    }
    SUBCASE("uniform rescaling of all features keeps predictions") {
        const auto d = test::make_dataset(40, 15, 3, 21);
        const auto probe = test::random_matrix(60, 3, 22, -3, 10);
        Matrix xs = d.features(), ps = probe;
        for (std::size_t r = 0; r < xs.rows(); ++r)
            for (auto& v : xs.row(r)) v *= 7.25;
        for (std::size_t r = 0; r < ps.rows(); ++r)
            for (auto& v : ps.row(r)) v *= 7.25;
        const KnnClassifier a(d.features(), d.labels(), 5), b(xs, d.labels(), 5);
        CHECK(a.predict(probe) == b.predict(ps));
    }
    SUBCASE("bad k") {
        CHECK_THROWS_AS(KnnClassifier(x, y, 0), Error);
        CHECK_THROWS_AS(KnnClassifier(x, y, 8), Error);
        CHECK_THROWS_AS(KnnClassifier(Matrix{}, {}, 1), Error);
    }
}

TEST_CASE("gaussian naive bayes") {
    const Matrix x{{-1}, {0}, {1}, {9}, {10}, {11}};
    const std::vector<int> y{0, 0, 0, 1, 1, 1};
    const auto nb = train_gnb(x, y);
    CHECK(nb.predict(std::vector<double>{0.0}) == 0);
    CHECK(nb.predict(std::vector<double>{10.0}) == 1);
    // Symmetric midpoint: equal posteriors, tie to class 0.
    const auto lp = nb.log_posterior(std::vector<double>{5.0});
    CHECK(lp[0] == lp[1]);
    CHECK(nb.predict(std::vector<double>{5.0}) == 0);
    CHECK(nb.priors()[0] == 0.5);

    SUBCASE("unequal priors") {
        Matrix xs;
        std::vector<int> ys;
        for (int rep = 0; rep < 9; ++rep)
            for (double v : {-1.0, 0.0, 1.0}) {
                xs.append_row(std::vector<double>{v});
                ys.push_back(0);
            }
        for (double v : {9.0, 10.0, 11.0}) {
            xs.append_row(std::vector<double>{v});
            ys.push_back(1);
        }
        const auto m = train_gnb(xs, ys);
        // Hand evaluation: whole-set variance of xs gives the smoothing term.
        double mean = 0, var = 0;
        for (std::size_t r = 0; r < xs.rows(); ++r) mean += xs(r, 0);
        mean /= double(xs.rows());
        for (std::size_t r = 0; r < xs.rows(); ++r) var += (xs(r, 0) - mean) * (xs(r, 0) - mean);
        var /= double(xs.rows());
        const double v = 2.0 / 3.0 + 1e-9 * var;
        const double l0 = std::log(0.9) + log_gauss(5.0, 0.0, v);
        const double l1 = std::log(0.1) + log_gauss(5.0, 10.0, v);
        const auto got = m.log_posterior(std::vector<double>{5.0});
        CHECK(got[0] == doctest::Approx(l0).epsilon(1e-12));
        CHECK(got[1] == doctest::Approx(l1).epsilon(1e-12));
        CHECK(l0 > l1);
        CHECK(m.predict(std::vector<double>{5.0}) == 0);
        // The boundary moves towards the minority mean: 5.05 still goes to class 0.
        CHECK(m.predict(std::vector<double>{5.05}) == 0);
    }
    SUBCASE("constant columns stay finite") {
        const auto m = train_gnb(Matrix{{1, 2}, {1, 3}, {1, 4}, {1, 8}}, std::vector<int>{0, 0, 1, 1});
        const auto p = m.log_posterior(std::vector<double>{1.5, 5.0});
        CHECK(std::isfinite(p[0]));
        CHECK(std::isfinite(p[1]));
        CHECK(m.variances()[0][0] > 0.0);
        const auto z = train_gnb(Matrix{{1}, {1}}, std::vector<int>{0, 1});
        CHECK(std::isfinite(z.log_posterior(std::vector<double>{2.0})[0]));
    }
}

TEST_CASE("perceptron") {
    SUBCASE("AND is learned") {
        const Matrix x{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
        const std::vector<int> y{0, 0, 0, 1};
        const auto p = train_perceptron(x, y, {1000, 1e-3, 3});
        CHECK(training_errors(p, x, y) == 0);
    }
    SUBCASE("XOR is not") {
        const Matrix x{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
        const std::vector<int> y{0, 1, 1, 0};
        const auto p = train_perceptron(x, y, {1000, 1e-3, 3});
        CHECK(training_errors(p, x, y) > 0);
        CHECK(p.epochs() <= 1000);
    }
    SUBCASE("single-class data") {
        const Matrix x{{1, 2}, {2, 1}, {3, 3}};
        // Zero weights give decision 0, which is class 1: nothing to correct.
        const auto ones = train_perceptron(x, std::vector<int>{1, 1, 1});
        CHECK(ones.updates() == 0);
        CHECK(ones.epochs() == 1);
        // One mistake in the first epoch, none afterwards.
        const auto zeros = train_perceptron(x, std::vector<int>{0, 0, 0});
        CHECK(zeros.updates() == 1);
        CHECK(zeros.epochs() == 2);
        CHECK(training_errors(zeros, x, std::vector<int>{0, 0, 0}) == 0);
        CHECK(zeros.predict(std::vector<double>{10, 10}) == 0);
    }
    SUBCASE("seeded") {
        const auto d = test::make_dataset(30, 30, 4, 5, 0.5);
        const auto a = train_perceptron(d, {1000, 1e-3, 17});
        const auto b = train_perceptron(d, {1000, 1e-3, 17});
        CHECK(a.weights() == b.weights());
        CHECK(a.bias() == b.bias());
    }
}

TEST_CASE("decision tree") {
    CHECK(gini_impurity(5, 5) == 0.5);
    CHECK(gini_impurity(3, 0) == 0.0);
    CHECK(gini_impurity(1, 3) == doctest::Approx(1.0 - 1.0 / 16 - 9.0 / 16));

    SUBCASE("pure node is a leaf") {
        const auto t = train_tree(Matrix{{1}, {2}, {3}}, std::vector<int>{1, 1, 1});
        CHECK(t.nodes().size() == 1);
        CHECK(t.predict(std::vector<double>{-100.0}) == 1);
    }
    SUBCASE("midpoint threshold") {
        const Matrix x{{0}, {1}, {2}, {3}};
        const std::vector<int> y{0, 0, 1, 1};
        const auto t = train_tree(x, y);
        REQUIRE(t.nodes().size() == 3);
        CHECK(t.nodes()[0].feature == 0);
        CHECK(t.nodes()[0].threshold == 1.5);
        CHECK(training_errors(t, x, y) == 0);
    }
    SUBCASE("ties go to the lower feature") {
        const Matrix x{{0, 0}, {1, 1}, {2, 2}, {3, 3}};
        const auto t = train_tree(x, std::vector<int>{0, 0, 1, 1});
        CHECK(t.nodes()[0].feature == 0);
    }
    SUBCASE("majority leaf with tie to class 0") {
        const auto t = train_tree(Matrix{{1}, {1}}, std::vector<int>{1, 0});
        CHECK(t.nodes().size() == 1);
        CHECK(t.predict(std::vector<double>{1.0}) == 0);
    }
    SUBCASE("fits distinct training points exactly") {
        const auto d = test::make_dataset(60, 25, 3, 9, 0.3);
        const auto t = train_tree(d);
        CHECK(training_errors(t, d.features(), d.labels()) == 0);
    }
    SUBCASE("increasing affine maps keep predictions") {
        std::mt19937 gen(4);
        std::uniform_real_distribution<double> scale(0.001, 1000.0), shift(-500.0, 500.0);
        for (int trial = 0; trial < 20; ++trial) {
            const auto d = test::make_dataset(50, 20, 4, 100 + trial, 0.7);
            const auto probe = test::random_matrix(80, 4, 200 + trial, -5, 15);
            Matrix xt = d.features(), pt = probe;
            for (std::size_t c = 0; c < 4; ++c) {
                const double a = scale(gen), b = shift(gen);
                for (std::size_t r = 0; r < xt.rows(); ++r) xt(r, c) = a * xt(r, c) + b;
                for (std::size_t r = 0; r < pt.rows(); ++r) pt(r, c) = a * pt(r, c) + b;
            }
            const auto t0 = train_tree(d.features(), d.labels());
            const auto t1 = train_tree(xt, d.labels());
            CHECK(t0.predict(probe) == t1.predict(pt));
            CHECK(t0.nodes().size() == t1.nodes().size());
        }
    }
    SUBCASE("zero weights remove rows") {
        const Matrix x{{0}, {1}, {2}, {3}};
        const std::vector<int> y{0, 1, 0, 1};
        const std::vector<double> w{1, 0, 0, 1};
        const auto t = train_tree(x, y, w);
        CHECK(t.nodes().size() == 3);
        CHECK(t.nodes()[0].threshold == 1.5);
    }
    SUBCASE("depth limit") {
        const auto d = test::make_dataset(60, 25, 3, 9, 0.3);
        CHECK(train_tree(d, {1, 0, 0}).depth() <= 1);
    }
}

TEST_CASE("lda") {
    SUBCASE("symmetric blobs split at the midpoint") {
        const Matrix x{{-1, 0}, {-3, 0}, {-2, 1}, {-2, -1}, {1, 0}, {3, 0}, {2, 1}, {2, -1}};
        const std::vector<int> y{0, 0, 0, 0, 1, 1, 1, 1};
        const auto m = train_lda(x, y);
        CHECK(m.predict(std::vector<double>{1e-6, 0.0}) == 1);
        CHECK(m.predict(std::vector<double>{-1e-6, 0.0}) == 0);
        CHECK(m.decision(std::vector<double>{0.0, 0.0}) == doctest::Approx(0.0));
        CHECK(m.predict(std::vector<double>{-2, 0}) == 0);
        CHECK(m.predict(std::vector<double>{2, 0}) == 1);
    }
    SUBCASE("correlated covariance matches a hand solve") {
        // Within-class deviations shared by both classes, so the pooled
        // covariance is known in closed form.
        const std::vector<std::array<double, 2>> dev{{1, 1}, {-1, -1}, {1, 0}, {-1, 0}};
        const std::array<double, 2> mu0{0, 0}, mu1{2, 1};
        Matrix x;
        std::vector<int> y;
        for (int c = 0; c < 2; ++c)
            for (const auto& e : dev) {
                const auto& mu = c ? mu1 : mu0;
                x.append_row(std::vector<double>{mu[0] + e[0], mu[1] + e[1]});
                y.push_back(c);
            }
        // Scatter per class: sum of e e^T = [[4, 2], [2, 2]]; pooled over n - 2 = 6.
        const double s00 = 8.0 / 6, s01 = 4.0 / 6, s11 = 4.0 / 6;
        const double det = s00 * s11 - s01 * s01;
        const double dx = mu1[0] - mu0[0], dy = mu1[1] - mu0[1];
        const double w0 = (s11 * dx - s01 * dy) / det, w1 = (-s01 * dx + s00 * dy) / det;
        const auto m = train_lda(x, y);
        CHECK(m.coefficients()[0] == doctest::Approx(w0).epsilon(1e-5));
        CHECK(m.coefficients()[1] == doctest::Approx(w1).epsilon(1e-5));
        // Equal priors: the boundary passes through the midpoint of the means.
        CHECK(m.decision(std::vector<double>{1.0, 0.5}) == doctest::Approx(0.0).scale(1.0).epsilon(1e-6));
    }
    SUBCASE("singular covariance still gives finite scores") {
        const Matrix x{{1, 5}, {2, 5}, {3, 5}, {4, 5}};
        const auto m = train_lda(x, std::vector<int>{0, 0, 1, 1});
        CHECK(std::isfinite(m.decision(std::vector<double>{2.5, 7.0})));
        CHECK(m.predict(std::vector<double>{4, 5}) == 1);
    }
    SUBCASE("needs two instances per class") {
        CHECK_THROWS_AS(train_lda(Matrix{{1}, {2}, {3}}, std::vector<int>{0, 0, 1}), Error);
    }
}
