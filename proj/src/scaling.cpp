#include "scalebench/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "scalebench/error.hpp"
#include "scalebench/text.hpp"

namespace scalebench {

namespace {

struct TagName {
    ScalerTag tag;
    std::string_view name;
};

constexpr TagName kTagNames[] = {
    {ScalerTag::NS, "NS"}, {ScalerTag::MC, "MC"}, {ScalerTag::SS, "SS"}, {ScalerTag::PS, "PS"}, {ScalerTag::VS, "VS"},
    {ScalerTag::MM, "MM"}, {ScalerTag::MA, "MA"}, {ScalerTag::RS, "RS"}, {ScalerTag::QT, "QT"},
};

double nonzero(double s) { return s == 0.0 ? 1.0 : s; }

}  // namespace

ScalerKind parse_scaler(std::string_view input) {
    const auto trimmed = text::trim(input);
    const auto open = trimmed.find('(');
    const auto head = text::trim(trimmed.substr(0, open));
    ScalerKind kind;
    bool found = false;
    for (const auto& t : kTagNames) {
        if (text::iequals(head, t.name)) {
            kind.tag = t.tag;
            found = true;
        }
    }
    if (!found) throw Error("unknown scaler '" + std::string(input) + "'");
    if (open == std::string_view::npos) return kind;

    if (trimmed.back() != ')') throw Error("malformed scaler '" + std::string(input) + "'");
    const auto args = text::split_trimmed(trimmed.substr(open + 1, trimmed.size() - open - 2), ',');
    std::vector<double> values;
    for (const auto& a : args) {
        double v = 0;
        if (!text::parse_double(a, v)) throw Error("malformed scaler argument in '" + std::string(input) + "'");
        values.push_back(v);
    }
    if (kind.tag == ScalerTag::MM && values.size() == 2) {
        kind.a = values[0];
        kind.b = values[1];
        if (!(kind.a < kind.b)) throw Error("MM requires a < b");
    } else if (kind.tag == ScalerTag::QT && values.size() == 1) {
        if (values[0] < 2 || values[0] != std::floor(values[0])) throw Error("QT requires an integer n_quantiles >= 2");
        kind.n_quantiles = static_cast<std::size_t>(values[0]);
    } else {
        throw Error("scaler '" + std::string(input) + "' takes no such arguments");
    }
    return kind;
}

std::string to_string(const ScalerKind& kind) {
    std::string name;
    for (const auto& t : kTagNames)
        if (t.tag == kind.tag) name = t.name;
    const ScalerKind defaults{kind.tag};
    if (kind.tag == ScalerTag::MM && (kind.a != defaults.a || kind.b != defaults.b))
        name += "(" + text::shortest(kind.a) + "," + text::shortest(kind.b) + ")";
    if (kind.tag == ScalerTag::QT && kind.n_quantiles != defaults.n_quantiles)
        name += "(" + std::to_string(kind.n_quantiles) + ")";
    return name;
}

std::vector<ScalerKind> all_scalers() {
    std::vector<ScalerKind> out;
    for (const auto& t : kTagNames) out.push_back(ScalerKind{t.tag});
    return out;
}

double quantile(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw Error("quantile of empty data");
    if (!(q >= 0.0 && q <= 1.0)) throw Error("quantile level must lie in [0,1]");
    const double p = static_cast<double>(sorted.size() - 1) * q;
    const auto lo = static_cast<std::size_t>(std::floor(p));
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = p - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

namespace {

// Exact-position variant: the i-th of m evenly spaced levels.
double quantile_at(std::span<const double> sorted, std::size_t i, std::size_t m) {
    const std::size_t span = sorted.size() - 1;
    const std::size_t num = i * span;
    const std::size_t lo = num / (m - 1);
    const std::size_t rem = num % (m - 1);
    if (rem == 0) return sorted[lo];
    const double frac = static_cast<double>(rem) / static_cast<double>(m - 1);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

// Acklam's coefficients.
constexpr double kA[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                         1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
constexpr double kB[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                         6.680131188771972e+01,  -1.328068155288572e+01};
constexpr double kC[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                         -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
constexpr double kD[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                         3.754408661907416e+00};

// p in (0, 0.5].
double lower_quantile(double p) {
    double x;
    if (p < 0.02425) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((kC[0] * q + kC[1]) * q + kC[2]) * q + kC[3]) * q + kC[4]) * q + kC[5]) /
            ((((kD[0] * q + kD[1]) * q + kD[2]) * q + kD[3]) * q + 1.0);
    } else {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((kA[0] * r + kA[1]) * r + kA[2]) * r + kA[3]) * r + kA[4]) * r + kA[5]) * q /
            (((((kB[0] * r + kB[1]) * r + kB[2]) * r + kB[3]) * r + kB[4]) * r + 1.0);
    }
    const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(x * x / 2.0);
    return x - u / (1.0 + x * u / 2.0);
}

}  // namespace

double inverse_normal_cdf(double p) {
    if (!(p > 0.0 && p < 1.0)) throw Error("inverse_normal_cdf requires p in (0,1)");
    if (p == 0.5) return 0.0;
    return p < 0.5 ? lower_quantile(p) : -lower_quantile(1.0 - p);
}

FittedScaler fit(const ScalerKind& kind, const Matrix& train) {
    if (train.empty()) throw Error("cannot fit a scaler on an empty matrix");
    if (kind.tag == ScalerTag::MM && !(kind.a < kind.b)) throw Error("MM requires a < b");
    if (kind.tag == ScalerTag::QT && kind.n_quantiles < 2) throw Error("QT requires n_quantiles >= 2");

    FittedScaler f;
    f.kind_ = kind;
    const std::size_t n = train.rows(), d = train.cols();
    f.n_features_ = d;
    const auto tag = kind.tag;
    const bool moments = tag == ScalerTag::MC || tag == ScalerTag::SS || tag == ScalerTag::PS || tag == ScalerTag::VS;

    if (tag == ScalerTag::QT) {
        f.n_quantiles_ = std::max<std::size_t>(2, std::min(kind.n_quantiles, n));
        f.refs_.resize(d * f.n_quantiles_);
    }

    std::vector<double> column(n);
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t i = 0; i < n; ++i) column[i] = train(i, j);
        const auto [mn, mx] = std::minmax_element(column.begin(), column.end());
        if (moments) {
            double sum = 0;
            for (double v : column) sum += v;
            const double mean = sum / static_cast<double>(n);
            double ss = 0;
            for (double v : column) ss += (v - mean) * (v - mean);
            f.mean_.push_back(mean);
            f.std_.push_back(*mn == *mx ? 0.0 : std::sqrt(ss / static_cast<double>(n)));
        }
        switch (tag) {
            case ScalerTag::MM:
                f.min_.push_back(*mn);
                f.max_.push_back(*mx);
                break;
            case ScalerTag::MA:
                f.max_abs_.push_back(std::max(std::fabs(*mn), std::fabs(*mx)));
                break;
            case ScalerTag::RS:
                std::sort(column.begin(), column.end());
                f.q1_.push_back(quantile(column, 0.25));
                f.q2_.push_back(quantile(column, 0.5));
                f.q3_.push_back(quantile(column, 0.75));
                break;
            case ScalerTag::QT: {
                std::sort(column.begin(), column.end());
                const auto m = f.n_quantiles_;
                for (std::size_t i = 0; i < m; ++i) f.refs_[j * m + i] = quantile_at(column, i, m);
                // Interpolation may break monotonicity by one ulp.
                for (std::size_t i = 1; i < m; ++i)
                    f.refs_[j * m + i] = std::max(f.refs_[j * m + i], f.refs_[j * m + i - 1]);
                break;
            }
            default:
                break;
        }
    }
    return f;
}

std::span<const double> FittedScaler::references(std::size_t j) const {
    if (kind_.tag != ScalerTag::QT || j >= n_features_) throw Error("no quantile references for this column");
    return {refs_.data() + j * n_quantiles_, n_quantiles_};
}

std::vector<double> FittedScaler::translation() const {
    std::vector<double> t(n_features_, 0.0);
    for (std::size_t j = 0; j < n_features_; ++j) {
        switch (kind_.tag) {
            case ScalerTag::MC:
            case ScalerTag::SS:
            case ScalerTag::PS:
            case ScalerTag::VS: t[j] = mean_[j]; break;
            case ScalerTag::MM: {
                const double s = nonzero(max_[j] - min_[j]) / (kind_.b - kind_.a);
                t[j] = min_[j] - kind_.a * s;
                break;
            }
            case ScalerTag::RS: t[j] = q2_[j]; break;
            default: break;
        }
    }
    return t;
}

std::vector<double> FittedScaler::scale() const {
    std::vector<double> s(n_features_, 1.0);
    for (std::size_t j = 0; j < n_features_; ++j) {
        switch (kind_.tag) {
            case ScalerTag::SS: s[j] = nonzero(std_[j]); break;
            case ScalerTag::PS: s[j] = std::sqrt(nonzero(std_[j])); break;
            case ScalerTag::VS: {
                const double sd = nonzero(std_[j]);
                s[j] = sd * sd / mean_[j];
                break;
            }
            case ScalerTag::MM: s[j] = nonzero(max_[j] - min_[j]) / (kind_.b - kind_.a); break;
            case ScalerTag::MA: s[j] = nonzero(max_abs_[j]); break;
            case ScalerTag::RS: s[j] = nonzero(q3_[j] - q1_[j]); break;
            default: break;
        }
    }
    return s;
}

double FittedScaler::transform_value(std::size_t j, double x) const {
    switch (kind_.tag) {
        case ScalerTag::NS: return x;
        case ScalerTag::MC: return x - mean_[j];
        case ScalerTag::SS: return (x - mean_[j]) / nonzero(std_[j]);
        case ScalerTag::PS: return (x - mean_[j]) / std::sqrt(nonzero(std_[j]));
        case ScalerTag::VS: {
            const double sd = nonzero(std_[j]);
            return (x - mean_[j]) / sd * (mean_[j] / sd);
        }
        case ScalerTag::MM:
            return kind_.a + (x - min_[j]) / nonzero(max_[j] - min_[j]) * (kind_.b - kind_.a);
        case ScalerTag::MA: return x / nonzero(max_abs_[j]);
        case ScalerTag::RS: return (x - q2_[j]) / nonzero(q3_[j] - q1_[j]);
        case ScalerTag::QT: {
            const auto refs = references(j);
            const std::size_t m = refs.size();
            const double clipped = std::clamp(x, refs.front(), refs.back());
            const auto lo = static_cast<std::size_t>(std::lower_bound(refs.begin(), refs.end(), clipped) - refs.begin());
            const auto hi = static_cast<std::size_t>(std::upper_bound(refs.begin(), refs.end(), clipped) - refs.begin());
            double position;
            if (lo < hi) {
                position = (static_cast<double>(lo) + static_cast<double>(hi - 1)) / 2.0;
            } else {
                const double left = refs[lo - 1], right = refs[lo];
                position = static_cast<double>(lo - 1) + (clipped - left) / (right - left);
            }
            const double p = std::clamp(position / static_cast<double>(m - 1), 1e-7, 1.0 - 1e-7);
            return inverse_normal_cdf(p);
        }
    }
    return x;
}

Matrix FittedScaler::transform(const Matrix& features) const {
    if (features.cols() != n_features_) {
        throw Error("scaler fitted on " + std::to_string(n_features_) + " features applied to " +
                    std::to_string(features.cols()));
    }
    if (kind_.tag == ScalerTag::NS) return features;
    Matrix out(features.rows(), features.cols());
    for (std::size_t i = 0; i < features.rows(); ++i)
        for (std::size_t j = 0; j < n_features_; ++j) out(i, j) = transform_value(j, features(i, j));
    return out;
}

Matrix transform(const FittedScaler& scaler, const Matrix& features) { return scaler.transform(features); }

}  // namespace scalebench
