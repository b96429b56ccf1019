#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "scalebench/dataset.hpp"

namespace scalebench {

/// Header of a KEEL .dat file. The output attribute carries ColumnKind::Class.
struct KeelHeader {
    std::string relation;
    std::vector<ColumnSpec> attributes;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
};

/// Parses the header only (everything before @data).
KeelHeader parse_keel_header(std::string_view text);

/// Parses a whole KEEL file. Columns are the declared inputs (in declaration
/// order) followed by nothing else; the output attribute keeps its position.
/// Without @inputs/@outputs, the last attribute is the class.
/// Cells are not cleaned.
RawTable parse_keel(std::string_view text);

/// Serializes a table back to KEEL text. Numbers use the shortest
/// round-tripping representation.
std::string write_keel(const RawTable& table);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view contents);

RawTable read_keel_file(const std::filesystem::path& path);

/// "<name>-5-<i>tra.dat" or "<name>-5-<i>tst.dat".
std::string fold_file_name(std::string_view dataset, int fold, bool train, int k = 5);

/// Loads the pre-split 5-fold pairs of one dataset.
///
/// Train and test of a fold are encoded with a shared vocabulary (the union of
/// both files' declared values) and one positive class, resolved on the whole
/// dataset. Every fold must split the same multiset of rows, and the test
/// folds together must cover it exactly once.
std::vector<FoldPair> load_fold_pairs(const std::filesystem::path& directory, std::string_view dataset_name,
                                      const PositiveClassRule& rule = {});

/// Writes folds as KEEL files into `directory` (created if needed).
void write_fold_files(const std::filesystem::path& directory, std::string_view dataset_name,
                      const RawTable& table, const std::vector<int>& fold_of_row, int k = 5);

struct ResultRecord {
    std::string dataset;
    int fold = 0;
    std::string model;
    std::string scaler;
    double f1 = 0.0;
    double gmean = 0.0;

    friend bool operator==(const ResultRecord&, const ResultRecord&) = default;
};

/// Sorts by (dataset, model, scaler, fold). Throws on a duplicate key.
void sort_records(std::vector<ResultRecord>& records);

std::string results_csv(std::vector<ResultRecord> records);
void write_results_csv(const std::vector<ResultRecord>& records, const std::filesystem::path& path);
std::vector<ResultRecord> read_results_csv(const std::filesystem::path& path);

}  // namespace scalebench
