#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "scalebench/error.hpp"
#include "scalebench/harness.hpp"
#include "scalebench/metrics.hpp"
#include "scalebench/scaling.hpp"
#include "scalebench/stats.hpp"

namespace py = pybind11;
namespace sb = scalebench;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

sb::Matrix to_matrix(const Array& a) {
    if (a.ndim() != 2) throw py::value_error("expected a 2-D array");
    sb::Matrix m(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)));
    const auto v = a.unchecked<2>();
    for (py::ssize_t i = 0; i < a.shape(0); ++i)
        for (py::ssize_t j = 0; j < a.shape(1); ++j) m(std::size_t(i), std::size_t(j)) = v(i, j);
    return m;
}

Array to_array(const sb::Matrix& m) {
    Array out({static_cast<py::ssize_t>(m.rows()), static_cast<py::ssize_t>(m.cols())});
    auto v = out.mutable_unchecked<2>();
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) v(py::ssize_t(i), py::ssize_t(j)) = m(i, j);
    return out;
}

sb::Dataset make_dataset(const std::string& name, const Array& x, std::vector<int> y) {
    auto m = to_matrix(x);
    std::vector<std::string> names;
    for (std::size_t j = 0; j < m.cols(); ++j) names.push_back("x" + std::to_string(j));
    return {name, std::move(m), std::move(y), 1, std::move(names), {"negative", "positive"}};
}

py::dict record_dict(const sb::ResultRecord& r) {
    py::dict d;
    d["dataset"] = r.dataset;
    d["fold"] = r.fold;
    d["model"] = r.model;
    d["scaler"] = r.scaler;
    d["f1"] = r.f1;
    d["gmean"] = r.gmean;
    return d;
}

py::tuple cm_tuple(const sb::ConfusionMatrix& c) { return py::make_tuple(c.tp, c.fp, c.fn, c.tn); }

sb::ConfusionMatrix cm_of(std::size_t tp, std::size_t fp, std::size_t fn, std::size_t tn) { return {tp, fp, fn, tn}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Scaling, classifiers, metrics and statistics of the scalebench harness";
    m.attr("__version__") = std::string(sb::kVersion);

    py::register_exception<sb::Error>(m, "Error", PyExc_ValueError);

    m.def("scaler_names", [] {
        std::vector<std::string> out;
        for (const auto& k : sb::all_scalers()) out.push_back(sb::to_string(k));
        return out;
    });
    m.def("model_names", [] { return sb::default_models(); });

    py::class_<sb::FittedScaler>(m, "FittedScaler")
        .def_property_readonly("kind", [](const sb::FittedScaler& f) { return sb::to_string(f.kind()); })
        .def_property_readonly("n_features", &sb::FittedScaler::n_features)
        .def_property_readonly("translation", &sb::FittedScaler::translation)
        .def_property_readonly("scale", &sb::FittedScaler::scale)
        .def("transform", [](const sb::FittedScaler& f, const Array& x) { return to_array(f.transform(to_matrix(x))); });

    m.def(
        "fit_scaler", [](const std::string& kind, const Array& x) { return sb::fit(sb::parse_scaler(kind), to_matrix(x)); },
        py::arg("kind"), py::arg("x"), "Fits a scaler such as \"SS\", \"MM(-1,1)\" or \"QT(100)\" on training rows.");

    m.def("confusion", [](std::vector<int> pred, std::vector<int> labels, int positive) {
        return cm_tuple(sb::confusion(pred, labels, positive));
    }, py::arg("predictions"), py::arg("labels"), py::arg("positive") = 1, "Returns (tp, fp, fn, tn).");
    m.def("f1", [](std::size_t tp, std::size_t fp, std::size_t fn, std::size_t tn) { return sb::f1(cm_of(tp, fp, fn, tn)); },
          py::arg("tp"), py::arg("fp"), py::arg("fn"), py::arg("tn"));
    m.def("f_beta", [](std::size_t tp, std::size_t fp, std::size_t fn, std::size_t tn, double beta) {
        return sb::f_beta(cm_of(tp, fp, fn, tn), beta);
    }, py::arg("tp"), py::arg("fp"), py::arg("fn"), py::arg("tn"), py::arg("beta"));
    m.def("g_mean", [](std::size_t tp, std::size_t fp, std::size_t fn, std::size_t tn) {
        return sb::g_mean(cm_of(tp, fp, fn, tn));
    }, py::arg("tp"), py::arg("fp"), py::arg("fn"), py::arg("tn"));

    m.def("imbalance_ratio", [](std::size_t a, std::size_t b) { return sb::imbalance_ratio({a, b}); });
    m.def("ir_stratum", [](double ir, double low_max, double medium_max) {
        return std::string(sb::to_string(sb::ir_stratum(ir, {low_max, medium_max})));
    }, py::arg("ir"), py::arg("low_max") = 3.0, py::arg("medium_max") = 9.0);

    m.def("friedman", [](const Array& scores) {
        const auto r = sb::friedman(to_matrix(scores));
        py::dict d;
        d["statistic"] = r.statistic;
        d["df"] = r.degrees_of_freedom;
        d["p_value"] = r.p_value;
        d["reject"] = r.reject_at_0_05;
        return d;
    }, py::arg("scores"), "Rows are datasets, columns are treatments; higher is better.");
    m.def("chi2_sf", &sb::chi2_sf, py::arg("x"), py::arg("df"));
    m.def("nemenyi_cd", &sb::nemenyi_cd, py::arg("k"), py::arg("n"), py::arg("alpha") = 0.05);
    m.def("fractional_wins", [](const Array& s) { return sb::fractional_wins(to_matrix(s)); });
    m.def("average_ranks", [](const Array& s) { return sb::average_ranks(to_matrix(s)); });

    m.def("load_folds", [](const std::filesystem::path& dir, const std::string& name) {
        py::list out;
        for (const auto& f : sb::load_fold_pairs(dir, name))
            out.append(py::make_tuple(to_array(f.train.features()), f.train.labels(), to_array(f.test.features()),
                                      f.test.labels()));
        return out;
    }, py::arg("directory"), py::arg("name"), "Returns [(x_train, y_train, x_test, y_test)] with 1 = minority.");

    m.def("run_cell", [](const Array& x_train, std::vector<int> y_train, const Array& x_test, std::vector<int> y_test,
                         const std::string& scaler, const std::string& model, std::uint64_t seed) {
        sb::FoldPair fold{1, make_dataset("data", x_train, std::move(y_train)),
                          make_dataset("data", x_test, std::move(y_test))};
        auto r = [&] {
            py::gil_scoped_release release;
            return sb::run_cell(fold, sb::parse_scaler(scaler), model, seed);
        }();
        return py::make_tuple(r.predictions, r.record.f1, r.record.gmean);
    }, py::arg("x_train"), py::arg("y_train"), py::arg("x_test"), py::arg("y_test"), py::arg("scaler"),
       py::arg("model"), py::arg("seed") = 42, "Returns (predictions, f1, gmean).");

    m.def("run_experiment", [](const std::filesystem::path& data_dir, const std::filesystem::path& out_dir,
                               std::vector<std::string> datasets, std::vector<std::string> models,
                               std::vector<std::string> scalers, std::uint64_t seed, std::size_t jobs) {
        sb::ExperimentConfig cfg;
        cfg.data_dir = data_dir;
        cfg.out_dir = out_dir;
        cfg.datasets = std::move(datasets);
        if (!models.empty()) cfg.models = std::move(models);
        if (!scalers.empty()) {
            cfg.scalers.clear();
            for (const auto& s : scalers) cfg.scalers.push_back(sb::parse_scaler(s));
        }
        cfg.seed = seed;
        cfg.jobs = jobs;
        sb::ExperimentResult result;
        {
            py::gil_scoped_release release;
            result = sb::run_experiment(cfg);
            if (!cfg.out_dir.empty()) sb::write_reports(cfg, result);
        }
        py::list out;
        for (const auto& r : result.records) out.append(record_dict(r));
        return out;
    }, py::arg("data_dir"), py::arg("out_dir") = std::filesystem::path(), py::arg("datasets") = std::vector<std::string>{},
       py::arg("models") = std::vector<std::string>{}, py::arg("scalers") = std::vector<std::string>{},
       py::arg("seed") = 42, py::arg("jobs") = 1,
       "Runs the grid and returns one dict per (dataset, fold, model, scaler). Writes reports when out_dir is set.");
}
