#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "scalebench/matrix.hpp"

namespace scalebench {

/// Rows are subjects (datasets), columns treatments. Higher scores are better.
struct ScoreMatrix {
    std::vector<std::string> row_names;
    std::vector<std::string> column_names;
    Matrix scores;

    void validate() const;
};

/// Rank 1 is the best; ties share the mean of the ranks they span.
std::vector<double> row_ranks(std::span<const double> scores, bool higher_better = true);

struct FriedmanResult {
    double statistic = 0.0;
    std::size_t degrees_of_freedom = 0;
    double p_value = 1.0;
    bool reject_at_0_05 = false;
};

/// Tie-corrected Friedman chi-square test.
FriedmanResult friedman(const Matrix& scores);
FriedmanResult friedman(const ScoreMatrix& m);

/// Regularized upper incomplete gamma Q(a, x).
double gamma_q(double a, double x);
/// P(X > x) for X ~ chi-square(df).
double chi2_sf(double x, std::size_t df);

/// Nemenyi critical difference for k treatments over n subjects.
/// alpha must be 0.05 or 0.10.
double nemenyi_cd(std::size_t k, std::size_t n_subjects, double alpha = 0.05);

/// One win per row, split evenly among tied best columns.
std::vector<double> fractional_wins(const Matrix& scores);

struct RangeSummary {
    std::vector<double> per_row;  // max - min
    double mean = 0.0;
};
RangeSummary best_worst_range(const Matrix& scores);

/// Column means of row_ranks; lower is better.
std::vector<double> average_ranks(const Matrix& scores, bool higher_better = true);

/// Maximal sets of treatments whose average ranks lie within `cd` of each
/// other, as index lists ordered by rank. Singletons are omitted.
std::vector<std::vector<std::size_t>> cd_groups(std::span<const double> avg_ranks, double cd);

}  // namespace scalebench
