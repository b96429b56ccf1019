#pragma once

#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "scalebench/dataset.hpp"
#include "scalebench/matrix.hpp"

namespace test {

struct ScratchDir {
    std::filesystem::path path;
    explicit ScratchDir(const std::string& tag) {
        path = std::filesystem::temp_directory_path() /
               ("scalebench_" + tag + "_" + std::to_string(std::random_device{}()));
        std::filesystem::create_directories(path);
    }
    ~ScratchDir() { std::filesystem::remove_all(path); }
};

inline std::string round2(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

/// Two Gaussian blobs; class 1 (positive) is shifted by +1.5 in every feature.
inline scalebench::Dataset make_dataset(std::size_t n_neg, std::size_t n_pos, std::size_t d, unsigned seed,
                                        double shift = 1.5) {
    std::mt19937 gen(seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    scalebench::Matrix x(n_neg + n_pos, d);
    std::vector<int> y(n_neg + n_pos);
    for (std::size_t r = 0; r < x.rows(); ++r) {
        y[r] = r < n_neg ? 0 : 1;
        for (std::size_t j = 0; j < d; ++j) x(r, j) = noise(gen) * (1.0 + double(j)) + (y[r] ? shift : 0.0) + 3.0 * j;
    }
    std::vector<std::string> names;
    for (std::size_t j = 0; j < d; ++j) names.push_back("f" + std::to_string(j));
    return {"synthetic", std::move(x), std::move(y), 1, std::move(names), {"negative", "positive"}};
}

inline scalebench::Matrix random_matrix(std::size_t rows, std::size_t cols, unsigned seed, double lo = -5.0,
                                        double hi = 5.0) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    scalebench::Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = u(gen);
    return m;
}

}  // namespace test
