#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "scalebench/matrix.hpp"

namespace scalebench {

enum class ColumnKind { Numeric, Categorical, Class };

struct ColumnSpec {
    std::string name;
    ColumnKind kind = ColumnKind::Numeric;
    /// Declared value list for categorical and class columns.
    std::vector<std::string> values;
    /// Declared [min, max] of a numeric column, if the header gave one.
    std::optional<std::pair<double, double>> range;
    bool integer = false;

    friend bool operator==(const ColumnSpec&, const ColumnSpec&) = default;
};

using Cell = std::variant<double, std::string>;

/// A table as read from disk: typed columns, exactly one of them the class.
struct RawTable {
    std::string relation;
    std::vector<ColumnSpec> columns;
    std::vector<std::vector<Cell>> rows;

    /// Index of the class column. Throws unless exactly one exists.
    std::size_t class_column() const;

    friend bool operator==(const RawTable&, const RawTable&) = default;
};

/// Binary classification data with numeric features.
///
/// Immutable after construction; the constructor enforces that labels are in
/// {0,1}, that at least one feature exists and that names match the matrix.
class Dataset {
public:
    Dataset(std::string name, Matrix features, std::vector<int> labels, int positive_class,
            std::vector<std::string> feature_names, std::array<std::string, 2> class_names);

    const std::string& name() const noexcept { return name_; }
    const Matrix& features() const noexcept { return features_; }
    const std::vector<int>& labels() const noexcept { return labels_; }
    int positive_class() const noexcept { return positive_class_; }
    std::array<std::size_t, 2> class_counts() const noexcept { return class_counts_; }
    const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }
    const std::array<std::string, 2>& class_names() const noexcept { return class_names_; }

    std::size_t n_instances() const noexcept { return features_.rows(); }
    std::size_t n_features() const noexcept { return features_.cols(); }

    /// Same labels and metadata over a replacement feature matrix.
    Dataset with_features(Matrix features) const;
    /// Rows picked by index (order kept, repeats allowed).
    Dataset subset(std::span<const std::size_t> indices) const;

private:
    std::string name_;
    Matrix features_;
    std::vector<int> labels_;
    int positive_class_;
    std::array<std::size_t, 2> class_counts_{};
    std::vector<std::string> feature_names_;
    std::array<std::string, 2> class_names_;
};

struct FoldPair {
    int fold_index = 0;  // 1-based
    Dataset train;
    Dataset test;
};

enum class IrStratum { Low, Medium, High };

std::string_view to_string(IrStratum s);

/// Upper bounds (inclusive) of the Low and Medium strata.
struct StratumBounds {
    double low_max = 3.0;
    double medium_max = 9.0;
};

/// Trims whitespace and lower-cases every categorical/class cell and the
/// declared value lists (which are then de-duplicated, first occurrence wins).
/// Numeric cells are untouched.
RawTable clean_strings(const RawTable& raw);

/// How the positive class is chosen when encoding.
struct PositiveClassRule {
    /// Force this (cleaned) class name. When empty: a class named "positive"
    /// wins, otherwise the minority class of the table (ties: first declared).
    std::optional<std::string> name;
};

/// Converts a cleaned table to a Dataset. A categorical column with n
/// declared values becomes n-1 indicator columns, dropping the
/// lexicographically smallest value.
Dataset one_hot_encode(const RawTable& raw, const PositiveClassRule& rule = {},
                       std::string dataset_name = {});

/// majority count / minority count. Throws if a class is empty.
double imbalance_ratio(const Dataset& d);
double imbalance_ratio(std::array<std::size_t, 2> counts);

IrStratum ir_stratum(double ir, const StratumBounds& bounds = {});

/// Seeded stratified k-fold split (for inputs that are not pre-split).
/// Each class is shuffled, then classes are dealt round-robin across folds,
/// so per-fold class counts differ by at most one.
std::vector<FoldPair> stratified_folds(const Dataset& d, int k, std::uint64_t seed);

/// Test-fold membership produced by stratified_folds: fold (0-based) per row.
std::vector<int> stratified_fold_assignment(const Dataset& d, int k, std::uint64_t seed);

}  // namespace scalebench
