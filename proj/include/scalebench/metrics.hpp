#pragma once

#include <cstddef>
#include <span>

namespace scalebench {

struct ConfusionMatrix {
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;

    std::size_t total() const noexcept { return tp + fp + fn + tn; }
    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

ConfusionMatrix confusion(std::span<const int> predictions, std::span<const int> labels, int positive_class);

// Undefined rates (zero denominators) are 0.
double precision(const ConfusionMatrix& cm);
double recall(const ConfusionMatrix& cm);
double specificity(const ConfusionMatrix& cm);
/// (1+b^2) TP / ((1+b^2) TP + b^2 (FP+FN)).
double f_beta(const ConfusionMatrix& cm, double beta);
double f1(const ConfusionMatrix& cm);
double g_mean(const ConfusionMatrix& cm);

}  // namespace scalebench
