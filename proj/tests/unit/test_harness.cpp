#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>

#include "scalebench/error.hpp"
#include "scalebench/harness.hpp"
#include "test_util.hpp"

using namespace scalebench;
namespace fs = std::filesystem;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig cfg;
    cfg.data_dir = SCALEBENCH_DATA_DIR;
    cfg.datasets = {"iris0", "glass1"};
    cfg.models = {"knn", "gnb", "dt"};
    cfg.scalers = {ScalerKind{ScalerTag::NS}, ScalerKind{ScalerTag::SS}, ScalerKind{ScalerTag::MM}};
    cfg.settings.n_estimators = 5;
    return cfg;
}

DatasetInfo info(const std::string& name, IrStratum s) {
    DatasetInfo d;
    d.name = name;
    d.stratum = s;
    return d;
}

ResultRecord rec(const std::string& ds, int fold, const std::string& model, const std::string& scaler, double f1,
                 double gm) {
    return {ds, fold, model, scaler, f1, gm};
}

}  // namespace

TEST_CASE("model ids") {
    CHECK(default_models().size() == 13);
    CHECK(is_known_model("knorae"));
    CHECK_FALSE(is_known_model("svm"));
    CHECK(default_scalers().size() == 6);
}

TEST_CASE("config validation") {
    auto cfg = small_config();
    CHECK_NOTHROW(cfg.validate());
    cfg.models = {"dt", "svm"};
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg.models = {"dt", "dt"};
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg.models = {};
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = small_config();
    cfg.scalers = {};
    CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("dataset discovery and selection") {
    const auto found = discover_datasets(SCALEBENCH_DATA_DIR);
    CHECK(found.size() >= 20);
    CHECK(std::is_sorted(found.begin(), found.end()));
    CHECK(std::find(found.begin(), found.end(), "glass1") != found.end());

    auto cfg = small_config();
    CHECK(select_datasets(cfg) == std::vector<std::string>{"glass1", "iris0"});
    cfg.datasets = {};
    cfg.exclude = {"glass1"};
    const auto rest = select_datasets(cfg);
    CHECK(rest.size() == found.size() - 1);
    CHECK(std::find(rest.begin(), rest.end(), "glass1") == rest.end());
    cfg.datasets = {"no-such-dataset"};
    CHECK_THROWS_AS(select_datasets(cfg), Error);
}

TEST_CASE("tree predictions do not change under standardization") {
    const auto d = test::make_dataset(60, 20, 4, 11);
    for (const auto& fold : stratified_folds(d, 5, 3)) {
        const auto ns = run_cell(fold, ScalerKind{ScalerTag::NS}, "dt", 42);
        for (auto tag : {ScalerTag::SS, ScalerTag::MM, ScalerTag::MA, ScalerTag::RS}) {
            const auto other = run_cell(fold, ScalerKind{tag}, "dt", 42);
            CHECK(other.predictions == ns.predictions);
            CHECK(other.record.f1 == ns.record.f1);
        }
    }
}

TEST_CASE("run_task matches run_cell") {
    const auto d = test::make_dataset(40, 12, 3, 5);
    const auto folds = stratified_folds(d, 5, 1);
    ModelSettings settings;
    settings.n_estimators = 7;
    const std::vector<std::string> models{"bagging", "ola", "knorae", "knn"};
    const auto task = run_task(folds[2], ScalerKind{ScalerTag::SS}, models, 9, settings);
    REQUIRE(task.size() == models.size());
    for (std::size_t i = 0; i < models.size(); ++i) {
        const auto cell = run_cell(folds[2], ScalerKind{ScalerTag::SS}, models[i], 9, settings);
        CHECK(cell.predictions == task[i].predictions);
        CHECK(cell.record == task[i].record);
    }
    CHECK_THROWS_AS(run_cell(folds[0], ScalerKind{ScalerTag::SS}, "svm", 1), Error);
}

TEST_CASE("describe") {
    const auto folds = load_fold_pairs(fs::path(SCALEBENCH_DATA_DIR) / "glass1", "glass1");
    const auto d = describe(folds);
    CHECK(d.name == "glass1");
    CHECK(d.n_instances == 214);
    CHECK(d.n_features == 9);
    CHECK(d.class_counts[0] == 76);
    CHECK(d.class_counts[1] == 138);
    CHECK(test::round2(d.ir) == "1.82");
    CHECK(d.stratum == IrStratum::Low);
}

TEST_CASE("experiment grid") {
    auto cfg = small_config();
    const auto result = run_experiment(cfg);
    CHECK(result.datasets.size() == 2);
    CHECK(result.records.size() == 2 * 5 * 3 * 3);
    std::set<std::tuple<std::string, int, std::string, std::string>> keys;
    for (const auto& r : result.records) {
        keys.insert({r.dataset, r.fold, r.model, r.scaler});
        CHECK((r.f1 >= 0.0 && r.f1 <= 1.0));
        CHECK((r.gmean >= 0.0 && r.gmean <= 1.0));
    }
    CHECK(keys.size() == result.records.size());

    cfg.jobs = 3;
    const auto threaded = run_experiment(cfg);
    CHECK(threaded.records == result.records);

    test::ScratchDir out("reports");
    cfg.out_dir = out.path;
    write_reports(cfg, result);
    for (const char* f : {"results.csv", "datasets.csv", "mean_table.csv", "friedman.csv", "wins.csv",
                          "ranges_ranks.csv", "manifest.txt", "cd_dt_f1.svg", "cd_knn_gmean.svg"})
        CHECK_MESSAGE(fs::exists(out.path / f), std::string(f));
    const auto reread = read_results_csv(out.path / "results.csv");
    REQUIRE(reread.size() == result.records.size());
    for (std::size_t i = 0; i < reread.size(); ++i) {
        CHECK(reread[i].model == result.records[i].model);
        CHECK(std::abs(reread[i].f1 - result.records[i].f1) <= 5e-7);
        CHECK(std::abs(reread[i].gmean - result.records[i].gmean) <= 5e-7);
    }
    const auto manifest = read_text_file(out.path / "manifest.txt");
    CHECK(manifest.find("datasets: glass1,iris0\n") != std::string::npos);
    CHECK(manifest.find("records: 90\n") != std::string::npos);
    CHECK(manifest.find("seed: 42\n") != std::string::npos);
}

TEST_CASE("score cube and mean table") {
    const std::vector<ResultRecord> records{
        rec("a", 1, "m", "NS", 0.2, 0.4), rec("a", 2, "m", "NS", 0.4, 0.6), rec("a", 1, "m", "SS", 0.8, 0.1),
        rec("a", 2, "m", "SS", 0.6, 0.3), rec("b", 1, "m", "NS", 1.0, 1.0), rec("b", 1, "m", "SS", 0.0, 0.5),
    };
    const ScoreCube cube(records, {"a", "b"}, {"m"}, {"NS", "SS"});
    CHECK(cube.at(Metric::F1, 0, 0, 0) == doctest::Approx(0.3));
    CHECK(cube.at(Metric::F1, 0, 0, 1) == doctest::Approx(0.7));
    CHECK(cube.at(Metric::GMean, 1, 0, 1) == doctest::Approx(0.5));

    const auto rows = mean_table(cube);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].f1 == doctest::Approx(0.65));
    CHECK(rows[1].f1 == doctest::Approx(0.35));
    CHECK(rows[0].best_f1);
    CHECK_FALSE(rows[1].best_f1);
    CHECK(rows[0].gmean == doctest::Approx(0.75));
    CHECK(rows[0].best_gmean);

    CHECK_THROWS_AS(ScoreCube(records, {"a", "b", "c"}, {"m"}, {"NS", "SS"}), Error);
}

TEST_CASE("friedman and wins reports") {
    std::vector<ResultRecord> records;
    const std::vector<std::string> ds{"d0", "d1", "d2", "d3"};
    for (std::size_t d = 0; d < ds.size(); ++d)
        for (const char* m : {"x", "y"})
            for (int s = 0; s < 3; ++s)
                records.push_back(rec(ds[d], 1, m, "S" + std::to_string(s), 0.1 * s + 0.01 * double(d), 0.5));
    const ScoreCube cube(records, ds, {"x", "y"}, {"S0", "S1", "S2"});
    const std::vector<DatasetInfo> infos{info("d0", IrStratum::Low), info("d1", IrStratum::Low),
                                         info("d2", IrStratum::Medium), info("d3", IrStratum::Low)};

    const auto fr = friedman_report(cube, infos);
    CHECK(fr.size() == 2 * 2 * 4);
    const auto find = [&](const std::string& m, Metric metric, const std::string& st) {
        return *std::find_if(fr.begin(), fr.end(), [&](const FriedmanRow& r) {
            return r.model == m && r.metric == metric && r.stratum == st;
        });
    };
    const auto all = find("x", Metric::F1, "All");
    CHECK(all.n_datasets == 4);
    CHECK(all.sufficient);
    CHECK(all.result.statistic == doctest::Approx(8.0));
    CHECK(find("x", Metric::F1, "Medium").n_datasets == 1);
    CHECK_FALSE(find("x", Metric::F1, "Medium").sufficient);
    CHECK_FALSE(find("y", Metric::GMean, "High").sufficient);
    CHECK(find("y", Metric::GMean, "All").result.statistic == 0.0);

    for (const auto& w : wins_report(cube, infos)) {
        double sum = 0;
        for (double v : w.wins) sum += v;
        CHECK(sum == doctest::Approx(2.0 * double(w.n_datasets)));
        if (w.metric == Metric::F1) CHECK(w.wins[2] == doctest::Approx(sum));
    }
}

TEST_CASE("ranges and ranks report") {
    std::vector<ResultRecord> records;
    // model p: best 0.9, worst 0.1; model q: 0.5 and 0.45.
    for (const char* d : {"a", "b"}) {
        records.push_back(rec(d, 1, "p", "NS", 0.1, 0.1));
        records.push_back(rec(d, 1, "p", "SS", 0.9, 0.9));
        records.push_back(rec(d, 1, "q", "NS", 0.5, 0.5));
        records.push_back(rec(d, 1, "q", "SS", 0.45, 0.45));
    }
    const ScoreCube cube(records, {"a", "b"}, {"p", "q"}, {"NS", "SS"});
    const auto rows = ranges_and_ranks(cube);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].model == "p");
    CHECK(rows[0].mean_range == doctest::Approx(0.8));
    CHECK(rows[0].average_rank == doctest::Approx(1.0));
    CHECK(rows[1].mean_range == doctest::Approx(0.05));
    CHECK(rows[1].average_rank == doctest::Approx(2.0));
}

TEST_CASE("critical difference diagram") {
    const std::vector<std::string> names{"NS", "SS", "MM", "Q<T>"};
    const std::vector<double> ranks{3.6, 1.8, 2.1, 2.5};
    const auto svg = cd_diagram_svg(names, ranks, 0.8, "dt (F1)");
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("Q&lt;T&gt;") != std::string::npos);
    CHECK(svg.find("CD = 0.800") != std::string::npos);
    std::size_t cliques = 0;
    for (auto p = svg.find("class=\"clique\""); p != std::string::npos; p = svg.find("class=\"clique\"", p + 1))
        ++cliques;
    CHECK(cliques == cd_groups(ranks, 0.8).size());
    CHECK(cliques == 1);
}
