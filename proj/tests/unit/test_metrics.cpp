#include <doctest.h>

#include <cmath>
#include <random>

#include "scalebench/error.hpp"
#include "scalebench/metrics.hpp"

using namespace scalebench;

namespace {

ConfusionMatrix cm(std::size_t tp, std::size_t fp, std::size_t fn, std::size_t tn) { return {tp, fp, fn, tn}; }

}  // namespace

TEST_CASE("confusion counts") {
    CHECK(confusion(std::vector<int>{1, 1, 0}, std::vector<int>{1, 1, 0}, 1) == cm(2, 0, 0, 1));
    CHECK(confusion(std::vector<int>{0, 0, 0, 0}, std::vector<int>{1, 1, 1, 1}, 1) == cm(0, 0, 4, 0));
    CHECK(confusion(std::vector<int>{1, 0, 1, 0, 1}, std::vector<int>{1, 1, 0, 0, 1}, 1) == cm(2, 1, 1, 1));
    // Positive class 0 swaps the roles.
    CHECK(confusion(std::vector<int>{1, 0, 1, 0, 1}, std::vector<int>{1, 1, 0, 0, 1}, 0) == cm(1, 1, 1, 2));
    CHECK_THROWS_AS(confusion(std::vector<int>{1}, std::vector<int>{1, 0}, 1), Error);
}

TEST_CASE("rates") {
    CHECK(precision(cm(2, 0, 0, 0)) == 1.0);
    CHECK(precision(cm(0, 0, 3, 3)) == 0.0);
    CHECK(recall(cm(3, 0, 1, 0)) == 0.75);
    CHECK(recall(cm(0, 2, 0, 2)) == 0.0);
    CHECK(specificity(cm(0, 1, 0, 9)) == 0.9);
    CHECK(specificity(cm(2, 0, 2, 0)) == 0.0);
}

TEST_CASE("f scores") {
    CHECK(f_beta(cm(3, 1, 2, 0), 1.0) == doctest::Approx(0.6667).epsilon(1e-4));
    CHECK(f1(cm(3, 1, 2, 0)) == doctest::Approx(3.0 / 4.5));
    CHECK(f1(cm(5, 0, 0, 5)) == 1.0);
    CHECK(f1(cm(0, 3, 2, 5)) == 0.0);
    CHECK(f1(cm(0, 0, 0, 5)) == 0.0);
    CHECK(f_beta(cm(3, 1, 2, 0), 2.0) == doctest::Approx(15.0 / (15.0 + 4.0 * 3.0)));
    CHECK_THROWS_AS(f_beta(cm(1, 1, 1, 1), 0.0), Error);
    CHECK_THROWS_AS(f_beta(cm(1, 1, 1, 1), -1.0), Error);
}

TEST_CASE("g-mean") {
    CHECK(g_mean(cm(8, 1, 2, 9)) == doctest::Approx(0.848528).epsilon(1e-6));
    CHECK(g_mean(cm(4, 0, 0, 6)) == 1.0);
    CHECK(g_mean(cm(4, 6, 0, 0)) == 0.0);
    CHECK(g_mean(cm(0, 0, 4, 6)) == 0.0);
}

TEST_CASE("random confusion matrices") {
    std::mt19937 gen(2024);
    std::uniform_int_distribution<std::size_t> count(0, 40);
    for (int i = 0; i < 1000; ++i) {
        const auto m = cm(count(gen), count(gen), count(gen), count(gen));
        const double f = f1(m);
        CHECK(std::abs(f_beta(m, 1.0) - f) <= 1e-12);
        const double p = precision(m), r = recall(m);
        if (p + r > 0) CHECK(std::abs(2 * p * r / (p + r) - f) <= 1e-12);
        for (double v : {f, g_mean(m), p, r, specificity(m)}) CHECK((v >= 0.0 && v <= 1.0));
        CHECK(g_mean(m) <= std::max(r, specificity(m)) + 1e-15);
    }
}

TEST_CASE("metrics ignore instance order") {
    std::vector<int> pred{1, 0, 1, 1, 0, 0, 1}, lab{1, 1, 0, 1, 0, 1, 1};
    const auto a = confusion(pred, lab, 1);
    std::rotate(pred.begin(), pred.begin() + 3, pred.end());
    std::rotate(lab.begin(), lab.begin() + 3, lab.end());
    CHECK(confusion(pred, lab, 1) == a);
}
