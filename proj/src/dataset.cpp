#include "scalebench/dataset.hpp"

#include <algorithm>

#include "scalebench/error.hpp"
#include "scalebench/rng.hpp"
#include "scalebench/text.hpp"

namespace scalebench {

std::size_t RawTable::class_column() const {
    std::size_t found = columns.size();
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i].kind != ColumnKind::Class) continue;
        if (found != columns.size()) throw Error("table '" + relation + "' has more than one class column");
        found = i;
    }
    if (found == columns.size()) throw Error("table '" + relation + "' has no class column");
    return found;
}

Dataset::Dataset(std::string name, Matrix features, std::vector<int> labels, int positive_class,
                 std::vector<std::string> feature_names, std::array<std::string, 2> class_names)
    : name_(std::move(name)),
      features_(std::move(features)),
      labels_(std::move(labels)),
      positive_class_(positive_class),
      feature_names_(std::move(feature_names)),
      class_names_(std::move(class_names)) {
    if (features_.cols() == 0) throw Error("dataset '" + name_ + "' has no features");
    if (labels_.size() != features_.rows())
        throw Error("dataset '" + name_ + "': label count does not match row count");
    if (feature_names_.size() != features_.cols())
        throw Error("dataset '" + name_ + "': feature name count does not match column count");
    if (positive_class_ != 0 && positive_class_ != 1)
        throw Error("dataset '" + name_ + "': positive class must be 0 or 1");
    for (int y : labels_) {
        if (y != 0 && y != 1) throw Error("dataset '" + name_ + "': labels must be 0 or 1");
        ++class_counts_[static_cast<std::size_t>(y)];
    }
}

Dataset Dataset::with_features(Matrix features) const {
    if (features.rows() != n_instances())
        throw Error("dataset '" + name_ + "': replacement features have wrong row count");
    auto names = feature_names_;
    if (features.cols() != names.size()) {
        names.clear();
        for (std::size_t j = 0; j < features.cols(); ++j) names.push_back("f" + std::to_string(j));
    }
    return Dataset(name_, std::move(features), labels_, positive_class_, std::move(names), class_names_);
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
    std::vector<int> labels;
    labels.reserve(indices.size());
    for (auto i : indices) labels.push_back(labels_.at(i));
    return Dataset(name_, features_.select_rows(indices), std::move(labels), positive_class_,
                   feature_names_, class_names_);
}

std::string_view to_string(IrStratum s) {
    switch (s) {
        case IrStratum::Low: return "Low";
        case IrStratum::Medium: return "Medium";
        case IrStratum::High: return "High";
    }
    return "?";
}

RawTable clean_strings(const RawTable& raw) {
    RawTable out = raw;
    for (std::size_t c = 0; c < out.columns.size(); ++c) {
        auto& col = out.columns[c];
        if (col.kind == ColumnKind::Numeric) continue;
        std::vector<std::string> values;
        for (const auto& v : col.values) {
            auto cleaned = text::to_lower(text::trim(v));
            if (std::find(values.begin(), values.end(), cleaned) == values.end())
                values.push_back(std::move(cleaned));
        }
        col.values = std::move(values);
        for (auto& row : out.rows) {
            if (auto* s = std::get_if<std::string>(&row[c])) *s = text::to_lower(text::trim(*s));
        }
    }
    return out;
}

namespace {

const std::string& cell_string(const Cell& cell, const RawTable& raw, std::size_t row, std::size_t col) {
    if (const auto* s = std::get_if<std::string>(&cell)) return *s;
    throw Error("table '" + raw.relation + "': column '" + raw.columns[col].name + "' row " +
                std::to_string(row + 1) + " holds a number where a category is expected");
}

std::vector<std::string> class_values(const RawTable& raw, std::size_t cls) {
    if (!raw.columns[cls].values.empty()) return raw.columns[cls].values;
    std::vector<std::string> seen;
    for (std::size_t r = 0; r < raw.rows.size(); ++r) {
        const auto& v = cell_string(raw.rows[r][cls], raw, r, cls);
        if (std::find(seen.begin(), seen.end(), v) == seen.end()) seen.push_back(v);
    }
    return seen;
}

}  // namespace

Dataset one_hot_encode(const RawTable& raw, const PositiveClassRule& rule, std::string dataset_name) {
    const std::size_t cls = raw.class_column();
    const auto classes = class_values(raw, cls);
    if (classes.size() != 2) {
        throw Error("class column '" + raw.columns[cls].name + "' has " + std::to_string(classes.size()) +
                    " values; exactly 2 are required");
    }

    // Per input column: the indicator values kept (sorted, smallest dropped).
    struct Plan {
        std::size_t column;
        bool categorical;
        std::vector<std::string> kept;
    };
    std::vector<Plan> plan;
    std::vector<std::string> names;
    for (std::size_t c = 0; c < raw.columns.size(); ++c) {
        const auto& col = raw.columns[c];
        if (c == cls) continue;
        if (col.kind == ColumnKind::Numeric) {
            plan.push_back({c, false, {}});
            names.push_back(col.name);
            continue;
        }
        auto sorted = col.values;
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        std::vector<std::string> kept(sorted.begin() + (sorted.empty() ? 0 : 1), sorted.end());
        for (const auto& v : kept) names.push_back(col.name + "=" + v);
        plan.push_back({c, true, std::move(kept)});
    }

    Matrix features(raw.rows.size(), names.size());
    std::vector<int> labels(raw.rows.size());
    std::array<std::size_t, 2> counts{};
    for (std::size_t r = 0; r < raw.rows.size(); ++r) {
        const auto& row = raw.rows[r];
        if (row.size() != raw.columns.size())
            throw Error("table '" + raw.relation + "': row " + std::to_string(r + 1) + " has wrong arity");
        std::size_t out = 0;
        for (const auto& p : plan) {
            if (!p.categorical) {
                const auto* v = std::get_if<double>(&row[p.column]);
                if (v == nullptr) {
                    throw Error("table '" + raw.relation + "': column '" + raw.columns[p.column].name +
                                "' row " + std::to_string(r + 1) + " is not numeric");
                }
                features(r, out++) = *v;
                continue;
            }
            const auto& v = cell_string(row[p.column], raw, r, p.column);
            const auto& declared = raw.columns[p.column].values;
            if (std::find(declared.begin(), declared.end(), v) == declared.end()) {
                throw Error("table '" + raw.relation + "': value '" + v + "' in column '" +
                            raw.columns[p.column].name + "' is not declared");
            }
            for (const auto& k : p.kept) features(r, out++) = (v == k) ? 1.0 : 0.0;
        }
        const auto& label = cell_string(row[cls], raw, r, cls);
        const auto it = std::find(classes.begin(), classes.end(), label);
        if (it == classes.end())
            throw Error("table '" + raw.relation + "': class value '" + label + "' is not declared");
        labels[r] = static_cast<int>(it - classes.begin());
        ++counts[static_cast<std::size_t>(labels[r])];
    }

    int positive = 0;
    if (rule.name) {
        const auto it = std::find(classes.begin(), classes.end(), *rule.name);
        if (it == classes.end()) throw Error("positive class '" + *rule.name + "' is not a class of the table");
        positive = static_cast<int>(it - classes.begin());
    } else if (const auto it = std::find(classes.begin(), classes.end(), "positive"); it != classes.end()) {
        positive = static_cast<int>(it - classes.begin());
    } else {
        positive = counts[1] < counts[0] ? 1 : 0;
    }

    if (dataset_name.empty()) dataset_name = raw.relation;
    return Dataset(std::move(dataset_name), std::move(features), std::move(labels), positive, std::move(names),
                   {classes[0], classes[1]});
}

double imbalance_ratio(std::array<std::size_t, 2> counts) {
    if (counts[0] == 0 || counts[1] == 0) throw Error("imbalance ratio undefined: a class has no instances");
    const auto [lo, hi] = std::minmax(counts[0], counts[1]);
    return static_cast<double>(hi) / static_cast<double>(lo);
}

double imbalance_ratio(const Dataset& d) { return imbalance_ratio(d.class_counts()); }

IrStratum ir_stratum(double ir, const StratumBounds& bounds) {
    if (ir <= bounds.low_max) return IrStratum::Low;
    if (ir <= bounds.medium_max) return IrStratum::Medium;
    return IrStratum::High;
}

std::vector<int> stratified_fold_assignment(const Dataset& d, int k, std::uint64_t seed) {
    if (k < 2) throw Error("stratified_folds: k must be at least 2");
    const auto counts = d.class_counts();
    for (int c = 0; c < 2; ++c) {
        if (counts[c] < static_cast<std::size_t>(k)) {
            throw Error("stratified_folds: class '" + d.class_names()[c] + "' has " + std::to_string(counts[c]) +
                        " instances, fewer than k=" + std::to_string(k));
        }
    }
    Rng rng(seed);
    std::vector<int> fold(d.n_instances(), -1);
    std::size_t dealt = 0;
    for (int c = 0; c < 2; ++c) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < d.n_instances(); ++i)
            if (d.labels()[i] == c) members.push_back(i);
        rng.shuffle(std::span<std::size_t>(members));
        for (auto i : members) fold[i] = static_cast<int>(dealt++ % static_cast<std::size_t>(k));
    }
    return fold;
}

std::vector<FoldPair> stratified_folds(const Dataset& d, int k, std::uint64_t seed) {
    const auto fold = stratified_fold_assignment(d, k, seed);
    std::vector<FoldPair> out;
    out.reserve(static_cast<std::size_t>(k));
    for (int f = 0; f < k; ++f) {
        std::vector<std::size_t> train, test;
        for (std::size_t i = 0; i < fold.size(); ++i) (fold[i] == f ? test : train).push_back(i);
        out.push_back({f + 1, d.subset(train), d.subset(test)});
    }
    return out;
}

}  // namespace scalebench
