// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <set>
#include <algorithm>

#include "lgt/experiment.hpp"
#include "oracles.hpp"

using namespace lgt;
using nlohmann::json;

namespace {

namespace fs = std::filesystem;

fs::path temp_dir(const std::string& tag) {
    const fs::path p = fs::temp_directory_path() / ("lgt_exp_" + tag);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

fs::path write_csv(const std::string& tag, const std::string& content) {
    const fs::path p = temp_dir(tag) / "data.csv";
    std::ofstream out(p);
    out << content;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

ExperimentConfig small_experiment(const std::string& tag) {
    ExperimentConfig cfg;
    cfg.dataset.name = "blobs";
    cfg.dataset.source = "builtin";
    cfg.dataset.builtin_kind = "blobs_classification";
    cfg.dataset.builtin_params = json{{"n_samples", 80}, {"n_features", 4}, {"n_classes", 2},
                                      {"separation", 2.5}};
    cfg.dataset.task = TaskType::classification;
    cfg.methods = {"no_tuning", "lgt"};
    cfg.seeds = {42, 43};
    cfg.budget = Budget{10, 3, 2};
    cfg.backend.kind = "scripted";
    cfg.output_dir = (temp_dir(tag)).string();
    return cfg;
}

}  // namespace

TEST_SUITE("data_io_experiment") {

TEST_CASE("synthetic generators are deterministic") {
    SyntheticParams p;
    const Dataset a = make_synthetic("blobs_classification", p, 42);
    const Dataset b = make_synthetic("blobs_classification", p, 42);
    CHECK(a.features == b.features);
    CHECK(a.targets == b.targets);
    CHECK(dataset_hash(a) == dataset_hash(b));
    const Dataset c = make_synthetic("blobs_classification", p, 43);
    CHECK(dataset_hash(a) != dataset_hash(c));

    CHECK_THROWS_AS((void)make_synthetic("mystery", p, 1), std::invalid_argument);
}

TEST_CASE("well-separated blobs admit a linear classifier at 95%+") {
    SyntheticParams p;
    p.n_samples = 150;
    p.n_classes = 3;
    p.n_features = 6;
    p.separation = 4.0;
    const Dataset blobs = make_synthetic("blobs_classification", p, 7);
    auto [train, test] = split_and_standardize(blobs, 0.8, 7);
    const double acc = oracles::logistic_oracle_accuracy(train.features, train.targets,
                                                         test.features, test.targets, 3);
    CHECK(acc >= 0.95);
}

TEST_CASE("noiseless linear data is exactly linear (r2 = 1 via normal equations)") {
    SyntheticParams p;
    p.n_samples = 60;
    p.n_features = 3;
    p.noise = 0.0;
    const Dataset d = make_synthetic("linear_regression", p, 11);

    // least squares via the normal equations (small d, plain Gauss solve)
    const int n = d.n_samples(), dim = d.n_features();
    std::vector<std::vector<double>> ata(static_cast<std::size_t>(dim + 1),
                                         std::vector<double>(static_cast<std::size_t>(dim + 2), 0.0));
    for (int i = 0; i < n; ++i) {
        std::vector<double> row(static_cast<std::size_t>(dim + 1), 1.0);
        for (int j = 0; j < dim; ++j) row[static_cast<std::size_t>(j)] = d.features(i, j);
        for (int a = 0; a <= dim; ++a)
            for (int b = 0; b <= dim + 1; ++b) {
                const double rhs = b == dim + 1 ? d.targets[static_cast<std::size_t>(i)]
                                                : row[static_cast<std::size_t>(b)];
                ata[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] +=
                    row[static_cast<std::size_t>(a)] * rhs;
            }
    }
    for (int col = 0; col <= dim; ++col) {  // gaussian elimination with partial pivoting
        int piv = col;
        for (int r = col + 1; r <= dim; ++r)
            if (std::abs(ata[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)]) >
                std::abs(ata[static_cast<std::size_t>(piv)][static_cast<std::size_t>(col)]))
                piv = r;
        std::swap(ata[static_cast<std::size_t>(col)], ata[static_cast<std::size_t>(piv)]);
        for (int r = 0; r <= dim; ++r) {
            if (r == col) continue;
            const double f = ata[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] /
                             ata[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
            for (int b = col; b <= dim + 1; ++b)
                ata[static_cast<std::size_t>(r)][static_cast<std::size_t>(b)] -=
                    f * ata[static_cast<std::size_t>(col)][static_cast<std::size_t>(b)];
        }
    }
    double ss_res = 0.0, ss_tot = 0.0, mean = 0.0;
    for (int i = 0; i < n; ++i) mean += d.targets[static_cast<std::size_t>(i)] / n;
    for (int i = 0; i < n; ++i) {
        double pred = ata[static_cast<std::size_t>(dim)][static_cast<std::size_t>(dim + 1)] /
                      ata[static_cast<std::size_t>(dim)][static_cast<std::size_t>(dim)];
        for (int j = 0; j < dim; ++j)
            pred += d.features(i, j) * ata[static_cast<std::size_t>(j)][static_cast<std::size_t>(dim + 1)] /
                    ata[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)];
        const double e = pred - d.targets[static_cast<std::size_t>(i)];
        ss_res += e * e;
        ss_tot += (d.targets[static_cast<std::size_t>(i)] - mean) *
                  (d.targets[static_cast<std::size_t>(i)] - mean);
    }
    CHECK(1.0 - ss_res / ss_tot == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("overfit_trap makes unregularized defaults overfit measurably") {
    DatasetManifest m;
    m.name = "trap";
    m.builtin_kind = "overfit_trap";
    m.task = TaskType::classification;
    const Dataset d = load_dataset(m);
    CHECK(d.n_classes == 2);
    CHECK(d.n_samples() >= 100);
}

TEST_CASE("csv loading: counts, label encoding, delimiter sniffing, errors") {
    const auto path = write_csv("csv_ok",
                                "a,b,species\n"
                                "1.0,2.0,setosa\n"
                                "2.0,3.0,versicolor\n"
                                "3.5,1.0,setosa\n"
                                "0.5,0.5,virginica\n");
    DatasetManifest m;
    m.source = "csv";
    m.path = path.string();
    m.target_column = "species";
    m.task = TaskType::classification;
    const Dataset d = load_csv(m);
    CHECK(d.n_samples() == 4);
    CHECK(d.n_features() == 2);
    CHECK(d.n_classes == 3);
    // first-appearance order: setosa=0, versicolor=1, virginica=2
    CHECK(d.targets == std::vector<double>{0, 1, 0, 2});

    const auto semi = write_csv("csv_semi", "a;b;y\n1;2;0.5\n3;4;0.7\n");
    DatasetManifest ms;
    ms.source = "csv";
    ms.path = semi.string();
    ms.target_column = "y";
    ms.task = TaskType::regression;
    const Dataset ds = load_csv(ms);
    CHECK(ds.n_samples() == 2);
    CHECK(ds.n_features() == 2);
    CHECK(ds.targets == std::vector<double>{0.5, 0.7});

    const auto bad = write_csv("csv_bad", "a,b,y\n1,2,0\noops,4,1\n");
    DatasetManifest mb = m;
    mb.path = bad.string();
    mb.target_column = "y";
    try {
        (void)load_csv(mb);
        FAIL("expected an error for the non-numeric cell");
    } catch (const std::exception& e) {
        const std::string msg = e.what();
        CHECK(msg.find("row 3") != std::string::npos);
        CHECK(msg.find("'a'") != std::string::npos);
    }

    DatasetManifest missing = m;
    missing.target_column = "nope";
    CHECK_THROWS_AS((void)load_csv(missing), std::runtime_error);
}

TEST_CASE("split_and_standardize: ratios, stratification, z-scores, determinism") {
    SyntheticParams p;
    p.n_samples = 150;
    p.n_classes = 3;
    p.n_features = 4;
    const Dataset d = make_synthetic("blobs_classification", p, 21);
    auto [train, test] = split_and_standardize(d, 0.8, 21);
    CHECK(train.n_samples() == 120);
    CHECK(test.n_samples() == 30);

    // each class split 40/10 (stratified)
    std::vector<int> train_counts(3, 0), test_counts(3, 0);
    for (int i = 0; i < train.n_samples(); ++i) ++train_counts[static_cast<std::size_t>(train.class_of(i))];
    for (int i = 0; i < test.n_samples(); ++i) ++test_counts[static_cast<std::size_t>(test.class_of(i))];
    for (int c = 0; c < 3; ++c) {
        CHECK(train_counts[static_cast<std::size_t>(c)] == 40);
        CHECK(test_counts[static_cast<std::size_t>(c)] == 10);
    }

    // train split is standardized to mean 0, std 1
    for (int j = 0; j < train.n_features(); ++j) {
        double mean = 0.0, var = 0.0;
        for (int i = 0; i < train.n_samples(); ++i) mean += train.features(i, j);
        mean /= train.n_samples();
        for (int i = 0; i < train.n_samples(); ++i) {
            const double diff = train.features(i, j) - mean;
            var += diff * diff;
        }
        var /= train.n_samples();
        CHECK(std::abs(mean) < 1e-9);
        CHECK(std::abs(std::sqrt(var) - 1.0) < 1e-6);
    }

    auto [train2, test2] = split_and_standardize(d, 0.8, 21);
    CHECK(train2.features == train.features);
    CHECK(test2.targets == test.targets);
}

TEST_CASE("a class with fewer than two samples falls back to a plain shuffle") {
    Dataset d;
    d.task = TaskType::classification;
    d.n_classes = 2;
    d.features = Matrix(6, 2);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 2; ++j) d.features(i, j) = i * 2.0 + j;
    d.targets = {0, 0, 0, 0, 0, 1};  // class 1 has one sample
    auto [train, test] = stratified_split(d, 0.5, 3);
    CHECK(train.n_samples() == 3);
    CHECK(test.n_samples() == 3);
}

TEST_CASE("run_experiment writes one record per run and is rerun-identical") {
    ExperimentConfig cfg = small_experiment("runexp_a");
    const ExperimentResult result = run_experiment(cfg);
    CHECK(result.n_failed == 0);
    // no_tuning: 1 record per seed; lgt: `iterations` records per seed
    CHECK(result.records.size() == 2 * (1 + 2));

    std::map<std::string, std::string> first_bytes;
    for (const auto& entry :
         fs::directory_iterator(fs::path(cfg.output_dir) / "records"))
        first_bytes[entry.path().filename().string()] = slurp(entry.path());

    ExperimentConfig cfg2 = small_experiment("runexp_b");
    (void)run_experiment(cfg2);
    for (const auto& entry :
         fs::directory_iterator(fs::path(cfg2.output_dir) / "records")) {
        REQUIRE(first_bytes.count(entry.path().filename().string()) == 1);
        CHECK(slurp(entry.path()) == first_bytes[entry.path().filename().string()]);
    }

    // budget accounting per (method, seed)
    std::map<std::pair<std::string, std::uint64_t>, int> used;
    for (const auto& r : result.records) used[{r.method, r.seed}] += r.configs_trained;
    for (const auto& [key, n] : used) CHECK(n <= cfg.budget.max_configurations);
}

TEST_CASE("default seeds are 42..51 when omitted") {
    const ExperimentConfig cfg;
    REQUIRE(cfg.seeds.size() == 10);
    CHECK(cfg.seeds.front() == 42);
    CHECK(cfg.seeds.back() == 51);

    json j{{"dataset", cfg.dataset.to_json()}};
    const ExperimentConfig parsed = ExperimentConfig::from_json(j);
    CHECK(parsed.seeds == cfg.seeds);
}

TEST_CASE("experiment config validation rejects bad inputs") {
    ExperimentConfig cfg = small_experiment("val");
    CHECK_NOTHROW(cfg.validate());
    cfg.seeds = {42, 42};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.seeds = {};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = small_experiment("val2");
    cfg.methods = {"bogosearch"};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("emit_report: means and stds match an independent oracle") {
    ExperimentConfig cfg = small_experiment("report");
    cfg.methods = {"no_tuning"};
    cfg.seeds = {42, 43, 44};
    const ExperimentResult result = run_experiment(cfg);
    REQUIRE(result.records.size() == 3);

    const std::string report_dir = (fs::path(cfg.output_dir) / "report").string();
    emit_report(result.records, report_dir);

    std::vector<double> accs;
    for (const auto& r : result.records) accs.push_back(r.final_test_metrics.accuracy);
    const auto oracle = oracles::welford(accs);

    // parse summary.csv back
    std::ifstream in(fs::path(report_dir) / "summary.csv");
    REQUIRE(in);
    std::string line;
    std::getline(in, line);
    CHECK(line == "method,metric,mean,std,n");
    bool found = false;
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string method, metric, mean_s, std_s, n_s;
        std::getline(ss, method, ',');
        std::getline(ss, metric, ',');
        std::getline(ss, mean_s, ',');
        std::getline(ss, std_s, ',');
        std::getline(ss, n_s, ',');
        if (method == "no_tuning" && metric == "accuracy") {
            found = true;
            CHECK(std::abs(std::stod(mean_s) - oracle.mean) < 1e-9);
            CHECK(std::abs(std::stod(std_s) - oracle.stddev) < 1e-9);
            CHECK(std::stoi(n_s) == 3);
        }
    }
    CHECK(found);

    // per-run loss curves have one row per epoch and re-parse losslessly
    const std::string curve = slurp(fs::path(report_dir) / "curves" / "no_tuning_seed42.csv");
    CHECK(std::count(curve.begin(), curve.end(), '\n') ==
          1 + cfg.budget.epochs_per_evaluation);  // header + epochs
    {
        const RunRecord* rec42 = nullptr;
        for (const auto& r : result.records)
            if (r.seed == 42) rec42 = &r;
        REQUIRE(rec42 != nullptr);
        std::stringstream ss(curve);
        std::string line;
        std::getline(ss, line);  // header
        int row = 0;
        while (std::getline(ss, line)) {
            std::stringstream cells(line);
            std::string epoch_s, train_s, test_s;
            std::getline(cells, epoch_s, ',');
            std::getline(cells, train_s, ',');
            std::getline(cells, test_s, ',');
            CHECK(std::stoi(epoch_s) == row + 1);
            CHECK(std::abs(std::stod(train_s) -
                           rec42->history[static_cast<std::size_t>(row)].metrics.train_loss) < 1e-9);
            CHECK(std::abs(std::stod(test_s) -
                           rec42->epoch_test_loss[static_cast<std::size_t>(row)]) < 1e-9);
            ++row;
        }
        CHECK(row == cfg.budget.epochs_per_evaluation);
    }
    CHECK(fs::exists(fs::path(report_dir) / "deltas.csv"));
    CHECK(fs::exists(fs::path(report_dir) / "summary.txt"));
}

TEST_CASE("emit_report: single record reports std 0 and mixed tasks are rejected") {
    ExperimentConfig cfg = small_experiment("report1");
    cfg.methods = {"no_tuning"};
    cfg.seeds = {42};
    const ExperimentResult result = run_experiment(cfg);
    REQUIRE(result.records.size() == 1);
    const std::string report_dir = (fs::path(cfg.output_dir) / "report1").string();
    emit_report(result.records, report_dir);
    const std::string summary = slurp(fs::path(report_dir) / "summary.csv");
    CHECK(summary.find("no_tuning,accuracy") != std::string::npos);
    CHECK(summary.find(",0,1\n") != std::string::npos);  // std 0, n 1

    std::vector<RunRecord> mixed = result.records;
    mixed.push_back(result.records[0]);
    mixed.back().task = TaskType::regression;
    CHECK_THROWS_AS(emit_report(mixed, report_dir), std::invalid_argument);
}

TEST_CASE("records round-trip through the loader") {
    ExperimentConfig cfg = small_experiment("roundtrip");
    cfg.methods = {"no_tuning", "random"};
    cfg.seeds = {42};
    cfg.budget = Budget{3, 2, 1};
    const ExperimentResult result = run_experiment(cfg);
    const std::vector<RunRecord> loaded = load_records(cfg.output_dir);
    REQUIRE(loaded.size() == result.records.size());
    std::multiset<std::string> a, b;
    for (const auto& r : result.records) a.insert(r.to_json().dump());
    for (const auto& r : loaded) b.insert(r.to_json().dump());
    CHECK(a == b);
}

}  // TEST_SUITE
