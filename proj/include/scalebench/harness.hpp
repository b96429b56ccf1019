#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scalebench/dataset.hpp"
#include "scalebench/keel_io.hpp"
#include "scalebench/scaling.hpp"
#include "scalebench/stats.hpp"

namespace scalebench {

inline constexpr std::string_view kVersion = "0.1.0";

/// Model identifiers in their default order.
const std::vector<std::string>& default_models();
std::vector<ScalerKind> default_scalers();
bool is_known_model(std::string_view id);

struct ModelSettings {
    std::size_t knn_k = 5;
    std::size_t n_estimators = 100;
    std::size_t k_roc = 7;
    std::size_t perceptron_max_iter = 1000;
    double perceptron_tol = 1e-3;
};

struct ExperimentConfig {
    std::filesystem::path data_dir;
    std::filesystem::path out_dir;
    std::vector<std::string> datasets;  // empty: every dataset found in data_dir
    std::vector<std::string> exclude;
    std::vector<ScalerKind> scalers = default_scalers();
    std::vector<std::string> models = default_models();
    std::uint64_t seed = 42;
    std::size_t jobs = 1;
    StratumBounds strata;
    ModelSettings settings;

    /// Throws on unknown models, empty lists or duplicates.
    void validate() const;
};

/// Sub-directories of `data_dir` holding a complete set of 5-fold files named after the directory.
std::vector<std::string> discover_datasets(const std::filesystem::path& data_dir);

/// Datasets selected by include/exclude lists, sorted by name.
std::vector<std::string> select_datasets(const ExperimentConfig& cfg);

struct CellResult {
    ResultRecord record;
    std::vector<int> predictions;  // on fold.test
};

/// Fits the scaler on fold.train only, trains `model`, scores fold.test.
CellResult run_cell(const FoldPair& fold, const ScalerKind& scaler, std::string_view model,
                    std::uint64_t master_seed, const ModelSettings& settings = {});

/// run_cell for several models sharing one scaler fit and one bagging pool.
std::vector<CellResult> run_task(const FoldPair& fold, const ScalerKind& scaler, std::span<const std::string> models,
                                 std::uint64_t master_seed, const ModelSettings& settings = {});

struct DatasetInfo {
    std::string name;
    std::size_t n_instances = 0;
    std::size_t n_features = 0;
    std::array<std::size_t, 2> class_counts{};  // minority, majority
    double ir = 1.0;
    IrStratum stratum = IrStratum::Low;
};

DatasetInfo describe(const std::vector<FoldPair>& folds, const StratumBounds& bounds = {});

struct ExperimentResult {
    std::vector<DatasetInfo> datasets;
    std::vector<ResultRecord> records;  // sorted
};

/// Runs the whole grid on cfg.jobs worker threads. Output does not depend on the worker count.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// ---------------------------------------------------------------- reports

enum class Metric { F1, GMean };
std::string_view to_string(Metric m);

/// Per-dataset fold means, indexed [dataset][model][scaler].
class ScoreCube {
public:
    ScoreCube(const std::vector<ResultRecord>& records, std::vector<std::string> datasets,
              std::vector<std::string> models, std::vector<std::string> scalers);

    const std::vector<std::string>& datasets() const noexcept { return datasets_; }
    const std::vector<std::string>& models() const noexcept { return models_; }
    const std::vector<std::string>& scalers() const noexcept { return scalers_; }
    double at(Metric metric, std::size_t dataset, std::size_t model, std::size_t scaler) const;
    /// Rows: the given datasets; columns: scalers.
    Matrix scaler_matrix(Metric metric, std::size_t model, std::span<const std::size_t> datasets) const;

private:
    std::vector<std::string> datasets_, models_, scalers_;
    std::vector<double> f1_, gmean_;
};

struct MeanRow {
    std::string model, scaler;
    double f1 = 0.0, gmean = 0.0;
    bool best_f1 = false, best_gmean = false;
};
std::vector<MeanRow> mean_table(const ScoreCube& cube);

struct FriedmanRow {
    std::string model;
    Metric metric = Metric::F1;
    std::string stratum;  // All | Low | Medium | High
    std::size_t n_datasets = 0;
    bool sufficient = false;
    FriedmanResult result;
};
std::vector<FriedmanRow> friedman_report(const ScoreCube& cube, const std::vector<DatasetInfo>& info);

struct WinsRow {
    Metric metric = Metric::F1;
    std::string stratum;
    std::size_t n_datasets = 0;
    std::vector<double> wins;  // per scaler
};
std::vector<WinsRow> wins_report(const ScoreCube& cube, const std::vector<DatasetInfo>& info);

struct RangeRankRow {
    std::string model;
    Metric metric = Metric::F1;
    double mean_range = 0.0;
    double average_rank = 0.0;
};
std::vector<RangeRankRow> ranges_and_ranks(const ScoreCube& cube);

std::string cd_diagram_svg(std::span<const std::string> names, std::span<const double> avg_ranks, double cd,
                           std::string_view title);
void emit_cd_diagram(std::span<const std::string> names, std::span<const double> avg_ranks, double cd,
                     const std::filesystem::path& path, std::string_view title = {});

std::string manifest_text(const ExperimentConfig& cfg, const ExperimentResult& result);

/// Writes results.csv, datasets.csv, mean_table.csv, friedman.csv, wins.csv,
/// ranges_ranks.csv, cd_<model>_<metric>.svg and manifest.txt into cfg.out_dir.
void write_reports(const ExperimentConfig& cfg, const ExperimentResult& result);

}  // namespace scalebench
