#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scalebench/matrix.hpp"

namespace scalebench {

enum class ScalerTag { NS, MC, SS, PS, VS, MM, MA, RS, QT };

struct ScalerKind {
    ScalerTag tag = ScalerTag::NS;
    double a = 0.0;  // MM target range
    double b = 1.0;
    std::size_t n_quantiles = 1000;  // QT

    friend bool operator==(const ScalerKind&, const ScalerKind&) = default;
};

/// Accepts "SS", "mm", "MM(-1,1)", "QT(100)" and so on.
ScalerKind parse_scaler(std::string_view text);
/// Inverse of parse_scaler; default parameters are omitted ("MM", "QT").
std::string to_string(const ScalerKind& kind);
/// The nine tags in declaration order.
std::vector<ScalerKind> all_scalers();

/// Type-7 quantile of non-decreasing data: v[floor(p)] + frac(p) * (v[floor(p)+1] - v[floor(p)]),
/// p = (n-1) q.
double quantile(std::span<const double> sorted, double q);

/// Standard normal quantile function. Acklam's rational approximation
/// polished by one Halley step; |Phi(z) - p| stays below 1e-9 on (0,1).
double inverse_normal_cdf(double p);

/// Parameters learned from one training matrix.
///
/// Affine kinds transform x to (x - T) / S per column; translation() and
/// scale() expose T and S. Degenerate scale factors are replaced by 1.
class FittedScaler {
public:
    const ScalerKind& kind() const noexcept { return kind_; }
    std::size_t n_features() const noexcept { return n_features_; }
    bool is_affine() const noexcept { return kind_.tag != ScalerTag::QT; }

    const std::vector<double>& mean() const noexcept { return mean_; }
    const std::vector<double>& stddev() const noexcept { return std_; }
    const std::vector<double>& min() const noexcept { return min_; }
    const std::vector<double>& max() const noexcept { return max_; }
    const std::vector<double>& max_abs() const noexcept { return max_abs_; }
    const std::vector<double>& q1() const noexcept { return q1_; }
    const std::vector<double>& q2() const noexcept { return q2_; }
    const std::vector<double>& q3() const noexcept { return q3_; }
    /// QT reference quantiles of column j (length n_quantiles, non-decreasing).
    std::span<const double> references(std::size_t j) const;
    std::size_t n_quantiles() const noexcept { return n_quantiles_; }

    std::vector<double> translation() const;
    std::vector<double> scale() const;

    Matrix transform(const Matrix& features) const;
    double transform_value(std::size_t column, double x) const;

private:
    friend FittedScaler fit(const ScalerKind& kind, const Matrix& train);

    ScalerKind kind_;
    std::size_t n_features_ = 0;
    std::vector<double> mean_, std_, min_, max_, max_abs_, q1_, q2_, q3_;
    std::size_t n_quantiles_ = 0;
    std::vector<double> refs_;  // n_features x n_quantiles, row-major
};

FittedScaler fit(const ScalerKind& kind, const Matrix& train);
Matrix transform(const FittedScaler& scaler, const Matrix& features);

}  // namespace scalebench
