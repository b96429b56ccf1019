#include "scalebench/metrics.hpp"

#include <cmath>

#include "scalebench/error.hpp"

namespace scalebench {

namespace {
double ratio(std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}
}  // namespace

ConfusionMatrix confusion(std::span<const int> predictions, std::span<const int> labels, int positive_class) {
    if (predictions.size() != labels.size())
        throw Error("confusion: " + std::to_string(predictions.size()) + " predictions for " +
                    std::to_string(labels.size()) + " labels");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const bool actual = labels[i] == positive_class;
        const bool predicted = predictions[i] == positive_class;
        if (actual && predicted) ++cm.tp;
        else if (actual) ++cm.fn;
        else if (predicted) ++cm.fp;
        else ++cm.tn;
    }
    return cm;
}

double precision(const ConfusionMatrix& cm) { return ratio(cm.tp, cm.tp + cm.fp); }
double recall(const ConfusionMatrix& cm) { return ratio(cm.tp, cm.tp + cm.fn); }
double specificity(const ConfusionMatrix& cm) { return ratio(cm.tn, cm.tn + cm.fp); }

double f_beta(const ConfusionMatrix& cm, double beta) {
    if (!(beta > 0.0)) throw Error("f_beta: beta must be positive");
    const double b2 = beta * beta;
    const double num = (1.0 + b2) * static_cast<double>(cm.tp);
    const double den = num + b2 * static_cast<double>(cm.fp + cm.fn);
    return den == 0.0 ? 0.0 : num / den;
}

double f1(const ConfusionMatrix& cm) { return f_beta(cm, 1.0); }

double g_mean(const ConfusionMatrix& cm) { return std::sqrt(recall(cm) * specificity(cm)); }

}  // namespace scalebench
