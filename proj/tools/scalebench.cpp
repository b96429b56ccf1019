// scalebench command line: run the experiment grid, split raw KEEL files into
// 5-fold pairs, inspect bundled datasets.

#include <CLI11.hpp>

#include <chrono>
#include <iostream>

#include "scalebench/dataset.hpp"
#include "scalebench/error.hpp"
#include "scalebench/harness.hpp"
#include "scalebench/keel_io.hpp"
#include "scalebench/scaling.hpp"
#include "scalebench/text.hpp"

namespace sb = scalebench;

namespace {

std::string drop_missing_rows(const std::string& text, std::size_t& dropped) {
    std::string out;
    bool in_data = false;
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        const std::string line = text.substr(start, end - start);
        start = end + 1;
        const auto trimmed = sb::text::trim(line);
        if (in_data && !trimmed.empty()) {
            bool missing = false;
            for (const auto& cell : sb::text::split_trimmed(trimmed, ','))
                missing = missing || cell == "?" || sb::text::iequals(cell, "<null>");
            if (missing) {
                ++dropped;
                continue;
            }
        }
        if (sb::text::istarts_with(trimmed, "@data")) in_data = true;
        out += line + "\n";
    }
    return out;
}

// Flat key=value files carry options of the run subcommand.
class FlatRunConfig : public CLI::ConfigINI {
public:
    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        auto items = CLI::ConfigINI::from_config(input);
        for (auto& item : items)
            if (item.parents.empty() && item.name != "++" && item.name != "--") item.parents = {"run"};
        return items;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Feature-scaling benchmark for imbalanced binary classification"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(sb::kVersion));
    app.set_config("--config", "", "Flat key=value file of run options; command-line flags take precedence");
    app.config_formatter(std::make_shared<FlatRunConfig>());
    app.fallthrough();

    // run
    auto* run = app.add_subcommand("run", "Run the dataset x fold x scaler x model grid and write reports");
    sb::ExperimentConfig cfg;
    std::string data_dir, out_dir = "out";
    std::vector<std::string> models = sb::default_models();
    std::vector<std::string> scalers;
    for (const auto& s : cfg.scalers) scalers.push_back(sb::to_string(s));
    std::vector<double> strata{cfg.strata.low_max, cfg.strata.medium_max};
    bool quiet = false;
    run->add_option("--data-dir", data_dir, "Directory with one sub-directory of fold files per dataset (required)");
    run->add_option("--out-dir", out_dir, "Output directory")->capture_default_str();
    run->add_option("--models", models, "Comma-separated model ids")->delimiter(',')->capture_default_str();
    run->add_option("--scalers", scalers, "Comma-separated scalers (NS,MC,SS,PS,VS,MM,MA,RS,QT)")
        ->delimiter(',')
        ->capture_default_str();
    run->add_option("--datasets", cfg.datasets, "Datasets to include (default: all)")->delimiter(',');
    run->add_option("--exclude", cfg.exclude, "Datasets to skip")->delimiter(',');
    run->add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
    run->add_option("--jobs", cfg.jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
    run->add_option("--strata", strata, "Upper bounds of the Low and Medium IR strata")
        ->delimiter(',')
        ->expected(2)
        ->capture_default_str();
    run->add_option("--n-estimators", cfg.settings.n_estimators, "Ensemble size")->capture_default_str();
    run->add_option("--knn-k", cfg.settings.knn_k, "Neighbours for knn")->capture_default_str();
    run->add_option("--k-roc", cfg.settings.k_roc, "Region of competence size")->capture_default_str();
    run->add_flag("--quiet", quiet, "No progress output");

    // split
    auto* split = app.add_subcommand("split", "Write stratified 5-fold KEEL files for one dataset");
    std::string input, name, split_out;
    std::uint64_t split_seed = 42;
    int k = 5;
    bool drop_missing = false;
    split->add_option("--input", input, "Whole-dataset KEEL .dat file")->required()->check(CLI::ExistingFile);
    split->add_option("--name", name, "Dataset name (default: file stem)");
    split->add_option("--out-dir", split_out, "Root data directory; files go to <out-dir>/<name>/")->required();
    split->add_option("--seed", split_seed, "Fold assignment seed")->capture_default_str();
    split->add_option("--k", k, "Number of folds")->capture_default_str();
    split->add_flag("--drop-missing", drop_missing, "Drop rows containing '?' or '<null>' cells");

    // inspect
    auto* inspect = app.add_subcommand("inspect", "Print size, class counts, IR and stratum per dataset");
    std::string inspect_dir;
    std::vector<std::string> inspect_sets;
    inspect->add_option("--data-dir", inspect_dir, "Data directory")->required();
    inspect->add_option("--datasets", inspect_sets, "Datasets (default: all)")->delimiter(',');

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            cfg.data_dir = data_dir;
            cfg.out_dir = out_dir;
            cfg.models = models;
            cfg.scalers.clear();
            for (const auto& s : scalers) cfg.scalers.push_back(sb::parse_scaler(s));
            cfg.strata = {strata[0], strata[1]};
            const auto t0 = std::chrono::steady_clock::now();
            const auto result = sb::run_experiment(cfg);
            sb::write_reports(cfg, result);
            if (!quiet) {
                const double secs =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                std::cerr << result.records.size() << " records from " << result.datasets.size() << " datasets in "
                          << sb::text::fixed(secs, 1) << " s; reports in " << cfg.out_dir.string() << "\n";
            }
        } else if (*split) {
            auto text = sb::read_text_file(input);
            std::size_t dropped = 0;
            if (drop_missing) text = drop_missing_rows(text, dropped);
            const auto raw = sb::parse_keel(text);
            if (name.empty()) name = std::filesystem::path(input).stem().string();
            const auto data = sb::one_hot_encode(sb::clean_strings(raw), {}, name);
            const auto folds = sb::stratified_fold_assignment(data, k, split_seed);
            sb::write_fold_files(std::filesystem::path(split_out) / name, name, raw, folds, k);
            std::cout << name << ": " << raw.rows.size() << " rows";
            if (dropped) std::cout << " (" << dropped << " with missing cells dropped)";
            std::cout << " -> " << k << " folds\n";
        } else if (*inspect) {
            sb::ExperimentConfig c;
            c.data_dir = inspect_dir;
            c.datasets = inspect_sets;
            std::cout << "dataset,n_instances,n_features,minority,majority,ir,stratum\n";
            for (const auto& d : sb::select_datasets(c)) {
                const auto info = sb::describe(sb::load_fold_pairs(c.data_dir / d, d));
                std::cout << info.name << "," << info.n_instances << "," << info.n_features << ","
                          << info.class_counts[0] << "," << info.class_counts[1] << ","
                          << sb::text::fixed(info.ir, 2) << "," << sb::to_string(info.stratum) << "\n";
            }
        }
    } catch (const sb::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
