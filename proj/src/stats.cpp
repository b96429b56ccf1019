#include "scalebench/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "scalebench/error.hpp"

namespace scalebench {

void ScoreMatrix::validate() const {
    if (scores.rows() < 2 || scores.cols() < 2) throw Error("score matrix needs at least 2 rows and 2 columns");
    if (!row_names.empty() && row_names.size() != scores.rows()) throw Error("score matrix: row name count mismatch");
    if (!column_names.empty() && column_names.size() != scores.cols())
        throw Error("score matrix: column name count mismatch");
}

std::vector<double> row_ranks(std::span<const double> scores, bool higher_better) {
    const std::size_t k = scores.size();
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return higher_better ? scores[a] > scores[b] : scores[a] < scores[b];
    });
    std::vector<double> ranks(k);
    for (std::size_t i = 0; i < k;) {
        std::size_t j = i;
        while (j + 1 < k && scores[order[j + 1]] == scores[order[i]]) ++j;
        const double r = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = r;
        i = j + 1;
    }
    return ranks;
}

FriedmanResult friedman(const Matrix& scores) {
    const std::size_t n = scores.rows(), k = scores.cols();
    if (n < 2 || k < 2) throw Error("friedman: need at least 2 subjects and 2 treatments");
    std::vector<double> rank_sum(k, 0.0);
    double tie_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = scores.row(i);
        const auto r = row_ranks(row);
        for (std::size_t j = 0; j < k; ++j) rank_sum[j] += r[j];
        std::vector<double> sorted(row.begin(), row.end());
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t a = 0; a < k;) {
            std::size_t b = a;
            while (b + 1 < k && sorted[b + 1] == sorted[a]) ++b;
            const double t = static_cast<double>(b - a + 1);
            tie_sum += t * t * t - t;
            a = b + 1;
        }
    }
    const double N = static_cast<double>(n), K = static_cast<double>(k);
    FriedmanResult res;
    res.degrees_of_freedom = k - 1;
    const double correction = 1.0 - tie_sum / (N * K * (K * K - 1.0));
    if (correction <= 1e-12) return res;
    double sq = 0.0;
    for (double r : rank_sum) sq += r * r;
    const double raw = 12.0 / (N * K * (K + 1.0)) * sq - 3.0 * N * (K + 1.0);
    res.statistic = std::max(0.0, raw / correction);
    res.p_value = chi2_sf(res.statistic, k - 1);
    res.reject_at_0_05 = res.p_value < 0.05;
    return res;
}

FriedmanResult friedman(const ScoreMatrix& m) {
    m.validate();
    return friedman(m.scores);
}

namespace {

// Lower regularized gamma by its series (x < a + 1).
double gamma_p_series(double a, double x) {
    double sum = 1.0 / a, term = sum, ap = a;
    for (int i = 0; i < 10000; ++i) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-17) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper regularized gamma by Lentz's continued fraction (x >= a + 1).
double gamma_q_fraction(double a, double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-17) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw Error("gamma_q: requires a > 0 and x >= 0");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return std::clamp(1.0 - gamma_p_series(a, x), 0.0, 1.0);
    return std::clamp(gamma_q_fraction(a, x), 0.0, 1.0);
}

double chi2_sf(double x, std::size_t df) {
    if (df == 0) throw Error("chi2_sf: df must be positive");
    if (!(x >= 0.0)) throw Error("chi2_sf: x must be non-negative");
    return gamma_q(static_cast<double>(df) / 2.0, x / 2.0);
}

double nemenyi_cd(std::size_t k, std::size_t n_subjects, double alpha) {
    static constexpr double q05[] = {1.960, 2.343, 2.569, 2.728, 2.850, 2.949, 3.031, 3.102, 3.164};
    static constexpr double q10[] = {1.645, 2.052, 2.291, 2.459, 2.589, 2.693, 2.780, 2.855, 2.920};
    if (k < 2 || k > 10) throw Error("nemenyi_cd: k must lie in 2..10");
    if (n_subjects == 0) throw Error("nemenyi_cd: need at least one subject");
    const double* table = nullptr;
    if (alpha == 0.05) table = q05;
    else if (alpha == 0.10) table = q10;
    else throw Error("nemenyi_cd: alpha must be 0.05 or 0.10");
    const double K = static_cast<double>(k);
    return table[k - 2] * std::sqrt(K * (K + 1.0) / (6.0 * static_cast<double>(n_subjects)));
}

std::vector<double> fractional_wins(const Matrix& scores) {
    std::vector<double> wins(scores.cols(), 0.0);
    for (std::size_t i = 0; i < scores.rows(); ++i) {
        const auto row = scores.row(i);
        const double best = *std::max_element(row.begin(), row.end());
        const auto ties = static_cast<double>(std::count(row.begin(), row.end(), best));
        for (std::size_t j = 0; j < row.size(); ++j)
            if (row[j] == best) wins[j] += 1.0 / ties;
    }
    return wins;
}

RangeSummary best_worst_range(const Matrix& scores) {
    RangeSummary s;
    for (std::size_t i = 0; i < scores.rows(); ++i) {
        const auto row = scores.row(i);
        const auto [mn, mx] = std::minmax_element(row.begin(), row.end());
        s.per_row.push_back(*mx - *mn);
    }
    if (!s.per_row.empty())
        s.mean = std::accumulate(s.per_row.begin(), s.per_row.end(), 0.0) / static_cast<double>(s.per_row.size());
    return s;
}

std::vector<double> average_ranks(const Matrix& scores, bool higher_better) {
    std::vector<double> avg(scores.cols(), 0.0);
    if (scores.rows() == 0) return avg;
    for (std::size_t i = 0; i < scores.rows(); ++i) {
        const auto r = row_ranks(scores.row(i), higher_better);
        for (std::size_t j = 0; j < r.size(); ++j) avg[j] += r[j];
    }
    for (auto& v : avg) v /= static_cast<double>(scores.rows());
    return avg;
}

std::vector<std::vector<std::size_t>> cd_groups(std::span<const double> avg_ranks, double cd) {
    std::vector<std::size_t> order(avg_ranks.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return avg_ranks[a] < avg_ranks[b]; });
    std::vector<std::vector<std::size_t>> groups;
    std::size_t last_end = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        std::size_t j = i;
        while (j + 1 < order.size() && avg_ranks[order[j + 1]] - avg_ranks[order[i]] <= cd) ++j;
        if (j == i || (i > 0 && j <= last_end && !groups.empty())) continue;
        groups.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(i),
                            order.begin() + static_cast<std::ptrdiff_t>(j + 1));
        last_end = j;
    }
    return groups;
}

}  // namespace scalebench
