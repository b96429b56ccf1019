#include "scalebench/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <optional>
#include <set>
#include <thread>

#include "scalebench/classifiers.hpp"
#include "scalebench/ensembles.hpp"
#include "scalebench/error.hpp"
#include "scalebench/metrics.hpp"
#include "scalebench/rng.hpp"
#include "scalebench/text.hpp"

namespace scalebench {

namespace fs = std::filesystem;

const std::vector<std::string>& default_models() {
    static const std::vector<std::string> models = {"knn",      "gnb", "percep", "dt",  "lda",    "bagging", "rf",
                                                    "adaboost", "ola", "lca",    "mcb", "knorae", "knorau"};
    return models;
}

std::vector<ScalerKind> default_scalers() {
    return {ScalerKind{ScalerTag::NS}, ScalerKind{ScalerTag::SS}, ScalerKind{ScalerTag::MM},
            ScalerKind{ScalerTag::MA}, ScalerKind{ScalerTag::RS}, ScalerKind{ScalerTag::QT}};
}

bool is_known_model(std::string_view id) {
    const auto& m = default_models();
    return std::find(m.begin(), m.end(), id) != m.end();
}

void ExperimentConfig::validate() const {
    if (models.empty()) throw Error("config: no models selected");
    if (scalers.empty()) throw Error("config: no scalers selected");
    for (const auto& m : models)
        if (!is_known_model(m)) throw Error("config: unknown model '" + m + "'");
    std::set<std::string> seen_models(models.begin(), models.end());
    if (seen_models.size() != models.size()) throw Error("config: duplicate model");
    std::set<std::string> seen_scalers;
    for (const auto& s : scalers) seen_scalers.insert(to_string(s));
    if (seen_scalers.size() != scalers.size()) throw Error("config: duplicate scaler");
    if (!(strata.low_max < strata.medium_max)) throw Error("config: stratum bounds must increase");
    if (jobs == 0) throw Error("config: jobs must be at least 1");
}

std::vector<std::string> discover_datasets(const fs::path& data_dir) {
    if (!fs::is_directory(data_dir)) throw IoError("data directory '" + data_dir.string() + "' does not exist");
    std::vector<std::string> names;
    for (const auto& entry : fs::directory_iterator(data_dir)) {
        if (!entry.is_directory()) continue;
        const auto name = entry.path().filename().string();
        bool complete = true;
        for (int f = 1; f <= 5 && complete; ++f)
            for (bool train : {true, false})
                complete = complete && fs::is_regular_file(entry.path() / fold_file_name(name, f, train));
        if (complete) names.push_back(name);
    }
    std::sort(names.begin(), names.end());
    return names;
}

std::vector<std::string> select_datasets(const ExperimentConfig& cfg) {
    const auto available = discover_datasets(cfg.data_dir);
    std::vector<std::string> chosen;
    if (cfg.datasets.empty()) {
        chosen = available;
    } else {
        for (const auto& d : cfg.datasets) {
            if (std::find(available.begin(), available.end(), d) == available.end())
                throw Error("dataset '" + d + "' not found in '" + cfg.data_dir.string() + "'");
            chosen.push_back(d);
        }
    }
    std::erase_if(chosen, [&](const std::string& d) {
        return std::find(cfg.exclude.begin(), cfg.exclude.end(), d) != cfg.exclude.end();
    });
    std::sort(chosen.begin(), chosen.end());
    chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
    if (chosen.empty()) throw Error("no datasets selected");
    return chosen;
}

// ---------------------------------------------------------------- cells

namespace {

bool uses_pool(std::string_view m) {
    return m == "bagging" || m == "ola" || m == "lca" || m == "mcb" || m == "knorae" || m == "knorau";
}

template <typename F>
std::vector<int> predict_rows(const Matrix& x, F&& f) {
    std::vector<int> out(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) out[i] = f(x.row(i));
    return out;
}

}  // namespace

std::vector<CellResult> run_task(const FoldPair& fold, const ScalerKind& scaler, std::span<const std::string> models,
                                 std::uint64_t master_seed, const ModelSettings& settings) {
    const auto& name = fold.train.name();
    const auto scaler_name = to_string(scaler);
    auto context = [&](std::string_view model) {
        return "(" + name + ", fold " + std::to_string(fold.fold_index) + ", " + std::string(model) + ", " +
               scaler_name + ")";
    };

    Matrix xtr, xte;
    try {
        if (scaler.tag == ScalerTag::NS) {
            xtr = fold.train.features();
            xte = fold.test.features();
        } else {
            const auto fitted = fit(scaler, fold.train.features());
            xtr = fitted.transform(fold.train.features());
            xte = fitted.transform(fold.test.features());
        }
    } catch (const Error& e) {
        throw Error(context("scaler") + ": " + e.what());
    }
    const auto& ytr = fold.train.labels();

    std::optional<Pool> pool;
    std::vector<CellResult> out;
    for (const auto& model : models) {
        const auto seed = derive_seed(master_seed, name, fold.fold_index, model);
        std::vector<int> pred;
        try {
            if (uses_pool(model) && !pool) {
                BaggingOptions bo;
                bo.pool_size = settings.n_estimators;
                bo.k_roc = settings.k_roc;
                bo.perceptron.max_iter = settings.perceptron_max_iter;
                bo.perceptron.tol = settings.perceptron_tol;
                bo.seed = derive_seed(master_seed, name, fold.fold_index, "bagging");
                pool.emplace(train_bagging(xtr, ytr, bo));
            }
            if (model == "knn") {
                pred = KnnClassifier(xtr, ytr, std::min(settings.knn_k, xtr.rows())).predict(xte);
            } else if (model == "gnb") {
                pred = train_gnb(xtr, ytr).predict(xte);
            } else if (model == "percep") {
                pred = train_perceptron(xtr, ytr, {settings.perceptron_max_iter, settings.perceptron_tol, seed})
                           .predict(xte);
            } else if (model == "dt") {
                pred = train_tree(xtr, ytr).predict(xte);
            } else if (model == "lda") {
                pred = train_lda(xtr, ytr).predict(xte);
            } else if (model == "rf") {
                ForestOptions fo;
                fo.n_trees = settings.n_estimators;
                fo.seed = seed;
                pred = train_random_forest(xtr, ytr, fo).predict(xte);
            } else if (model == "adaboost") {
                pred = train_adaboost(xtr, ytr, settings.n_estimators).predict(xte);
            } else if (model == "bagging") {
                pred = predict_rows(xte, [&](auto x) { return predict_majority(*pool, x); });
            } else if (model == "ola") {
                pred = predict_rows(xte, [&](auto x) { return predict_ola(*pool, x); });
            } else if (model == "lca") {
                pred = predict_rows(xte, [&](auto x) { return predict_lca(*pool, x); });
            } else if (model == "mcb") {
                pred = predict_rows(xte, [&](auto x) { return predict_mcb(*pool, x); });
            } else if (model == "knorae") {
                pred = predict_rows(xte, [&](auto x) { return predict_knora_e(*pool, x); });
            } else if (model == "knorau") {
                pred = predict_rows(xte, [&](auto x) { return predict_knora_u(*pool, x); });
            } else {
                throw Error("unknown model '" + model + "'");
            }
        } catch (const Error& e) {
            throw Error(context(model) + ": " + e.what());
        }
        const auto cm = confusion(pred, fold.test.labels(), fold.test.positive_class());
        out.push_back({{name, fold.fold_index, model, scaler_name, f1(cm), g_mean(cm)}, std::move(pred)});
    }
    return out;
}

CellResult run_cell(const FoldPair& fold, const ScalerKind& scaler, std::string_view model, std::uint64_t master_seed,
                    const ModelSettings& settings) {
    const std::string m(model);
    return std::move(run_task(fold, scaler, std::span<const std::string>(&m, 1), master_seed, settings).front());
}

DatasetInfo describe(const std::vector<FoldPair>& folds, const StratumBounds& bounds) {
    if (folds.empty()) throw Error("describe: no folds");
    const auto& f = folds.front();
    DatasetInfo info;
    info.name = f.train.name();
    info.n_instances = f.train.n_instances() + f.test.n_instances();
    info.n_features = f.train.n_features();
    const auto a = f.train.class_counts(), b = f.test.class_counts();
    const std::array<std::size_t, 2> counts{a[0] + b[0], a[1] + b[1]};
    info.class_counts = {std::min(counts[0], counts[1]), std::max(counts[0], counts[1])};
    info.ir = imbalance_ratio(counts);
    info.stratum = ir_stratum(info.ir, bounds);
    return info;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto names = select_datasets(cfg);

    ExperimentResult result;
    std::vector<std::vector<FoldPair>> data;
    for (const auto& n : names) {
        data.push_back(load_fold_pairs(cfg.data_dir / n, n));
        result.datasets.push_back(describe(data.back(), cfg.strata));
    }

    struct Task {
        std::size_t dataset, fold, scaler;
    };
    std::vector<Task> tasks;
    for (std::size_t d = 0; d < data.size(); ++d)
        for (std::size_t f = 0; f < data[d].size(); ++f)
            for (std::size_t s = 0; s < cfg.scalers.size(); ++s) tasks.push_back({d, f, s});

    std::vector<std::vector<ResultRecord>> outputs(tasks.size());
    std::vector<std::exception_ptr> errors(tasks.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    auto worker = [&] {
        while (!failed.load()) {
            const auto i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            const auto& t = tasks[i];
            try {
                for (auto& c : run_task(data[t.dataset][t.fold], cfg.scalers[t.scaler], cfg.models, cfg.seed,
                                        cfg.settings))
                    outputs[i].push_back(std::move(c.record));
            } catch (...) {
                errors[i] = std::current_exception();
                failed.store(true);
            }
        }
    };
    const std::size_t n_threads = std::max<std::size_t>(1, std::min(cfg.jobs, tasks.size()));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (std::size_t i = 0; i < n_threads; ++i) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    for (auto& o : outputs)
        for (auto& r : o) result.records.push_back(std::move(r));
    sort_records(result.records);
    const std::size_t expected = names.size() * 5 * cfg.scalers.size() * cfg.models.size();
    if (result.records.size() != expected)
        throw Error("grid incomplete: " + std::to_string(result.records.size()) + " of " + std::to_string(expected) +
                    " records");
    return result;
}

// ---------------------------------------------------------------- reports

std::string_view to_string(Metric m) { return m == Metric::F1 ? "f1" : "gmean"; }

ScoreCube::ScoreCube(const std::vector<ResultRecord>& records, std::vector<std::string> datasets,
                     std::vector<std::string> models, std::vector<std::string> scalers)
    : datasets_(std::move(datasets)), models_(std::move(models)), scalers_(std::move(scalers)) {
    auto index = [](const std::vector<std::string>& v, const std::string& s) -> std::optional<std::size_t> {
        const auto it = std::find(v.begin(), v.end(), s);
        if (it == v.end()) return std::nullopt;
        return static_cast<std::size_t>(it - v.begin());
    };
    const std::size_t cells = datasets_.size() * models_.size() * scalers_.size();
    std::vector<double> sum_f1(cells, 0.0), sum_g(cells, 0.0);
    std::vector<std::size_t> count(cells, 0);
    for (const auto& r : records) {
        const auto d = index(datasets_, r.dataset), m = index(models_, r.model), s = index(scalers_, r.scaler);
        if (!d || !m || !s) continue;
        const auto c = (*d * models_.size() + *m) * scalers_.size() + *s;
        sum_f1[c] += r.f1;
        sum_g[c] += r.gmean;
        ++count[c];
    }
    std::vector<std::string> missing;
    for (std::size_t d = 0; d < datasets_.size(); ++d)
        for (std::size_t m = 0; m < models_.size(); ++m)
            for (std::size_t s = 0; s < scalers_.size(); ++s)
                if (count[(d * models_.size() + m) * scalers_.size() + s] == 0)
                    missing.push_back(datasets_[d] + "/" + models_[m] + "/" + scalers_[s]);
    if (!missing.empty()) {
        std::string list;
        for (std::size_t i = 0; i < missing.size() && i < 10; ++i) list += (i ? ", " : "") + missing[i];
        if (missing.size() > 10) list += ", ...";
        throw Error("results miss " + std::to_string(missing.size()) + " cells: " + list);
    }
    f1_.resize(cells);
    gmean_.resize(cells);
    for (std::size_t c = 0; c < cells; ++c) {
        f1_[c] = sum_f1[c] / static_cast<double>(count[c]);
        gmean_[c] = sum_g[c] / static_cast<double>(count[c]);
    }
}

double ScoreCube::at(Metric metric, std::size_t d, std::size_t m, std::size_t s) const {
    const auto c = (d * models_.size() + m) * scalers_.size() + s;
    return metric == Metric::F1 ? f1_[c] : gmean_[c];
}

Matrix ScoreCube::scaler_matrix(Metric metric, std::size_t model, std::span<const std::size_t> datasets) const {
    Matrix out(datasets.size(), scalers_.size());
    for (std::size_t i = 0; i < datasets.size(); ++i)
        for (std::size_t s = 0; s < scalers_.size(); ++s) out(i, s) = at(metric, datasets[i], model, s);
    return out;
}

std::vector<MeanRow> mean_table(const ScoreCube& cube) {
    std::vector<MeanRow> rows;
    const auto nd = static_cast<double>(cube.datasets().size());
    for (std::size_t m = 0; m < cube.models().size(); ++m) {
        const std::size_t first = rows.size();
        for (std::size_t s = 0; s < cube.scalers().size(); ++s) {
            MeanRow r{cube.models()[m], cube.scalers()[s]};
            for (std::size_t d = 0; d < cube.datasets().size(); ++d) {
                r.f1 += cube.at(Metric::F1, d, m, s);
                r.gmean += cube.at(Metric::GMean, d, m, s);
            }
            r.f1 /= nd;
            r.gmean /= nd;
            rows.push_back(r);
        }
        std::size_t bf = first, bg = first;
        for (std::size_t i = first; i < rows.size(); ++i) {
            if (rows[i].f1 > rows[bf].f1) bf = i;
            if (rows[i].gmean > rows[bg].gmean) bg = i;
        }
        rows[bf].best_f1 = true;
        rows[bg].best_gmean = true;
    }
    return rows;
}

namespace {

struct Stratum {
    std::string name;
    std::vector<std::size_t> datasets;
};

std::vector<Stratum> strata_of(const ScoreCube& cube, const std::vector<DatasetInfo>& info) {
    std::vector<Stratum> out{{"All", {}}, {"Low", {}}, {"Medium", {}}, {"High", {}}};
    for (std::size_t d = 0; d < cube.datasets().size(); ++d) {
        const auto it = std::find_if(info.begin(), info.end(),
                                     [&](const DatasetInfo& i) { return i.name == cube.datasets()[d]; });
        if (it == info.end()) throw Error("no dataset description for '" + cube.datasets()[d] + "'");
        out[0].datasets.push_back(d);
        out[1 + static_cast<std::size_t>(it->stratum)].datasets.push_back(d);
    }
    return out;
}

constexpr Metric kMetrics[] = {Metric::F1, Metric::GMean};

}  // namespace

std::vector<FriedmanRow> friedman_report(const ScoreCube& cube, const std::vector<DatasetInfo>& info) {
    std::vector<FriedmanRow> rows;
    const auto strata = strata_of(cube, info);
    for (std::size_t m = 0; m < cube.models().size(); ++m) {
        for (auto metric : kMetrics) {
            for (const auto& st : strata) {
                FriedmanRow r{cube.models()[m], metric, st.name, st.datasets.size(), false, {}};
                r.sufficient = st.datasets.size() >= 2 && cube.scalers().size() >= 2;
                if (r.sufficient) r.result = friedman(cube.scaler_matrix(metric, m, st.datasets));
                rows.push_back(std::move(r));
            }
        }
    }
    return rows;
}

std::vector<WinsRow> wins_report(const ScoreCube& cube, const std::vector<DatasetInfo>& info) {
    std::vector<WinsRow> rows;
    const auto strata = strata_of(cube, info);
    for (auto metric : kMetrics) {
        for (const auto& st : strata) {
            WinsRow r{metric, st.name, st.datasets.size(), std::vector<double>(cube.scalers().size(), 0.0)};
            for (std::size_t m = 0; m < cube.models().size(); ++m) {
                const auto w = fractional_wins(cube.scaler_matrix(metric, m, st.datasets));
                for (std::size_t s = 0; s < w.size(); ++s) r.wins[s] += w[s];
            }
            rows.push_back(std::move(r));
        }
    }
    return rows;
}

std::vector<RangeRankRow> ranges_and_ranks(const ScoreCube& cube) {
    const std::size_t nd = cube.datasets().size(), nm = cube.models().size();
    std::vector<std::size_t> all(nd);
    for (std::size_t d = 0; d < nd; ++d) all[d] = d;
    std::vector<RangeRankRow> rows;
    for (auto metric : kMetrics) {
        Matrix best(nd, nm);
        for (std::size_t m = 0; m < nm; ++m) {
            const auto sm = cube.scaler_matrix(metric, m, all);
            for (std::size_t d = 0; d < nd; ++d) {
                const auto row = sm.row(d);
                best(d, m) = *std::max_element(row.begin(), row.end());
            }
        }
        const auto ranks = average_ranks(best);
        for (std::size_t m = 0; m < nm; ++m) {
            const auto range = best_worst_range(cube.scaler_matrix(metric, m, all));
            rows.push_back({cube.models()[m], metric, range.mean, ranks[m]});
        }
    }
    return rows;
}

namespace {

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string num(double v) { return text::fixed(v, 2); }

}  // namespace

std::string cd_diagram_svg(std::span<const std::string> names, std::span<const double> avg_ranks, double cd,
                           std::string_view title) {
    const std::size_t k = names.size();
    if (k < 2 || k > 10 || avg_ranks.size() != k) throw Error("cd diagram: need 2..10 treatments with ranks");
    const double width = 640, left = 60, right = 580, axis_y = 90;
    auto xpos = [&](double rank) { return left + (rank - 1.0) / static_cast<double>(k - 1) * (right - left); };

    std::vector<std::size_t> order(k);
    for (std::size_t i = 0; i < k; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return avg_ranks[a] < avg_ranks[b]; });
    const auto groups = cd_groups(avg_ranks, cd);
    const std::size_t half = (k + 1) / 2;
    const double label_top = axis_y + 30 + 12.0 * static_cast<double>(groups.size());
    const double height = label_top + 24.0 * static_cast<double>(half) + 20;

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" + num(height) +
         "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!title.empty())
        s += "<text x=\"" + num(width / 2) + "\" y=\"18\" text-anchor=\"middle\">" + xml_escape(title) + "</text>\n";

    // CD bar
    s += "<line x1=\"" + num(left) + "\" y1=\"40\" x2=\"" + num(xpos(1.0 + cd)) +
         "\" y2=\"40\" stroke=\"black\" stroke-width=\"2\"/>\n";
    s += "<text x=\"" + num((left + xpos(1.0 + cd)) / 2) + "\" y=\"34\" text-anchor=\"middle\">CD = " +
         text::fixed(cd, 3) + "</text>\n";

    // axis
    s += "<line x1=\"" + num(left) + "\" y1=\"" + num(axis_y) + "\" x2=\"" + num(right) + "\" y2=\"" + num(axis_y) +
         "\" stroke=\"black\"/>\n";
    for (std::size_t r = 1; r <= k; ++r) {
        const double x = xpos(static_cast<double>(r));
        s += "<line x1=\"" + num(x) + "\" y1=\"" + num(axis_y - 6) + "\" x2=\"" + num(x) + "\" y2=\"" + num(axis_y) +
             "\" stroke=\"black\"/>\n";
        s += "<text x=\"" + num(x) + "\" y=\"" + num(axis_y - 10) + "\" text-anchor=\"middle\">" +
             std::to_string(r) + "</text>\n";
    }

    // treatments: best half labelled on the left, the rest on the right
    for (std::size_t i = 0; i < k; ++i) {
        const auto t = order[i];
        const bool on_left = i < half;
        const std::size_t slot = on_left ? i : k - 1 - i;
        const double x = xpos(avg_ranks[t]);
        const double y = label_top + 24.0 * static_cast<double>(slot);
        const double end_x = on_left ? left - 10 : right + 10;
        s += "<polyline fill=\"none\" stroke=\"black\" points=\"" + num(x) + "," + num(axis_y) + " " + num(x) + "," +
             num(y) + " " + num(end_x) + "," + num(y) + "\"/>\n";
        s += "<text x=\"" + num(on_left ? end_x - 4 : end_x + 4) + "\" y=\"" + num(y + 4) + "\" text-anchor=\"" +
             (on_left ? "end" : "start") + "\">" + xml_escape(names[t]) + " (" + num(avg_ranks[t]) + ")</text>\n";
    }

    // connectors
    for (std::size_t g = 0; g < groups.size(); ++g) {
        const double y = axis_y + 18 + 12.0 * static_cast<double>(g);
        const double x1 = xpos(avg_ranks[groups[g].front()]) - 4, x2 = xpos(avg_ranks[groups[g].back()]) + 4;
        s += "<line class=\"clique\" x1=\"" + num(x1) + "\" y1=\"" + num(y) + "\" x2=\"" + num(x2) + "\" y2=\"" +
             num(y) + "\" stroke=\"black\" stroke-width=\"4\"/>\n";
    }
    s += "</svg>\n";
    return s;
}

void emit_cd_diagram(std::span<const std::string> names, std::span<const double> avg_ranks, double cd,
                     const fs::path& path, std::string_view title) {
    write_text_file(path, cd_diagram_svg(names, avg_ranks, cd, title));
}

std::string manifest_text(const ExperimentConfig& cfg, const ExperimentResult& result) {
    auto join = [](const auto& items, auto&& f) {
        std::string out;
        for (const auto& i : items) out += (out.empty() ? "" : ",") + f(i);
        return out;
    };
    auto id = [](const std::string& v) { return v; };
    std::string s;
    s += "scalebench " + std::string(kVersion) + "\n";
    s += "modules: dataset " + std::string(kVersion) + ", keel_io " + std::string(kVersion) + ", scaling " +
         std::string(kVersion) + ", classifiers " + std::string(kVersion) + ", ensembles " + std::string(kVersion) +
         ", metrics " + std::string(kVersion) + ", stats " + std::string(kVersion) + ", harness " +
         std::string(kVersion) + "\n";
    s += "data_dir: " + cfg.data_dir.generic_string() + "\n";
    s += "seed: " + std::to_string(cfg.seed) + "\n";
    s += "datasets: " + join(result.datasets, [](const DatasetInfo& d) { return d.name; }) + "\n";
    s += "excluded: " + join(cfg.exclude, id) + "\n";
    s += "models: " + join(cfg.models, id) + "\n";
    s += "scalers: " + join(cfg.scalers, [](const ScalerKind& k) { return to_string(k); }) + "\n";
    s += "strata: low<=" + text::shortest(cfg.strata.low_max) + " medium<=" + text::shortest(cfg.strata.medium_max) +
         "\n";
    s += "knn_k: " + std::to_string(cfg.settings.knn_k) + "\n";
    s += "n_estimators: " + std::to_string(cfg.settings.n_estimators) + "\n";
    s += "k_roc: " + std::to_string(cfg.settings.k_roc) + "\n";
    s += "perceptron: max_iter=" + std::to_string(cfg.settings.perceptron_max_iter) +
         " tol=" + text::shortest(cfg.settings.perceptron_tol) + " patience=5\n";
    s += "aggregation: per-dataset mean over folds, then mean over datasets\n";
    s += "records: " + std::to_string(result.records.size()) + "\n";
    return s;
}

void write_reports(const ExperimentConfig& cfg, const ExperimentResult& result) {
    fs::create_directories(cfg.out_dir);
    const auto& out = cfg.out_dir;
    write_results_csv(result.records, out / "results.csv");

    std::vector<std::string> dataset_names, scaler_names;
    for (const auto& d : result.datasets) dataset_names.push_back(d.name);
    for (const auto& s : cfg.scalers) scaler_names.push_back(to_string(s));
    const ScoreCube cube(result.records, dataset_names, cfg.models, scaler_names);

    std::string s = "dataset,n_instances,n_features,minority,majority,ir,stratum\n";
    for (const auto& d : result.datasets)
        s += d.name + "," + std::to_string(d.n_instances) + "," + std::to_string(d.n_features) + "," +
             std::to_string(d.class_counts[0]) + "," + std::to_string(d.class_counts[1]) + "," + text::fixed(d.ir, 2) +
             "," + std::string(to_string(d.stratum)) + "\n";
    write_text_file(out / "datasets.csv", s);

    s = "model,scaler,f1,gmean,best_f1,best_gmean\n";
    for (const auto& r : mean_table(cube))
        s += r.model + "," + r.scaler + "," + text::fixed(r.f1, 6) + "," + text::fixed(r.gmean, 6) + "," +
             (r.best_f1 ? "1" : "0") + "," + (r.best_gmean ? "1" : "0") + "\n";
    write_text_file(out / "mean_table.csv", s);

    s = "model,metric,stratum,n_datasets,statistic,df,p_value,reject_0_05\n";
    for (const auto& r : friedman_report(cube, result.datasets)) {
        s += r.model + "," + std::string(to_string(r.metric)) + "," + r.stratum + "," + std::to_string(r.n_datasets) +
             ",";
        if (r.sufficient)
            s += text::fixed(r.result.statistic, 6) + "," + std::to_string(r.result.degrees_of_freedom) + "," +
                 text::fixed(r.result.p_value, 6) + "," + (r.result.reject_at_0_05 ? "yes" : "no") + "\n";
        else
            s += "insufficient data,,,\n";
    }
    write_text_file(out / "friedman.csv", s);

    s = "metric,stratum,n_datasets";
    for (const auto& n : scaler_names) s += "," + n;
    s += "\n";
    for (const auto& r : wins_report(cube, result.datasets)) {
        s += std::string(to_string(r.metric)) + "," + r.stratum + "," + std::to_string(r.n_datasets);
        for (double w : r.wins) s += "," + text::fixed(w, 3);
        s += "\n";
    }
    write_text_file(out / "wins.csv", s);

    s = "model,metric,mean_range,average_rank\n";
    for (const auto& r : ranges_and_ranks(cube))
        s += r.model + "," + std::string(to_string(r.metric)) + "," + text::fixed(r.mean_range, 6) + "," +
             text::fixed(r.average_rank, 6) + "\n";
    write_text_file(out / "ranges_ranks.csv", s);

    const std::size_t k = scaler_names.size();
    if (k >= 2 && k <= 10 && dataset_names.size() >= 1) {
        std::vector<std::size_t> all(dataset_names.size());
        for (std::size_t d = 0; d < all.size(); ++d) all[d] = d;
        const double cd = nemenyi_cd(k, dataset_names.size());
        for (std::size_t m = 0; m < cfg.models.size(); ++m) {
            for (auto metric : kMetrics) {
                const auto ranks = average_ranks(cube.scaler_matrix(metric, m, all));
                const auto title = cfg.models[m] + " (" + std::string(to_string(metric)) + ")";
                emit_cd_diagram(scaler_names, ranks, cd,
                                out / ("cd_" + cfg.models[m] + "_" + std::string(to_string(metric)) + ".svg"), title);
            }
        }
    }
    write_text_file(out / "manifest.txt", manifest_text(cfg, result));
}

}  // namespace scalebench
