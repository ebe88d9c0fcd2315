// SPDX-License-Identifier: Apache-2.0
#include "lgt/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace lgt {

namespace fs = std::filesystem;
using nlohmann::json;

void ExperimentConfig::validate() const {
    if (seeds.empty()) throw std::invalid_argument("experiment: seeds must be non-empty");
    std::set<std::uint64_t> unique(seeds.begin(), seeds.end());
    if (unique.size() != seeds.size())
        throw std::invalid_argument("experiment: seeds must be distinct");
    if (methods.empty()) throw std::invalid_argument("experiment: methods must be non-empty");
    for (const auto& m : methods)
        if (m != "no_tuning" && m != "random" && m != "grid" && m != "lgt")
            throw std::invalid_argument("experiment: unknown method '" + m + "'");
    if (!(dataset.split_ratio > 0.0 && dataset.split_ratio < 1.0))
        throw std::invalid_argument("experiment: split_ratio must be in (0,1)");
    if (budget.max_configurations < 1 || budget.epochs_per_evaluation < 1 || budget.iterations < 1)
        throw std::invalid_argument("experiment: budget values must be >= 1");
    backend.validate();
}

json ExperimentConfig::to_json() const {
    json g;
    for (const auto& [k, v] : grid_resolution) g[k] = v;
    return json{{"dataset", dataset.to_json()}, {"methods", methods},
                {"seeds", seeds},               {"budget", budget.to_json()},
                {"backend", backend.to_json()}, {"grid_resolution", g},
                {"output_dir", output_dir}};
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
    ExperimentConfig c;
    c.dataset = DatasetManifest::from_json(j.at("dataset"));
    if (j.contains("methods")) c.methods = j.at("methods").get<std::vector<std::string>>();
    if (j.contains("seeds")) c.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    if (j.contains("budget")) c.budget = Budget::from_json(j.at("budget"));
    if (j.contains("backend")) c.backend = BackendConfig::from_json(j.at("backend"));
    if (j.contains("grid_resolution"))
        c.grid_resolution = j.at("grid_resolution").get<std::map<std::string, int>>();
    if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
    return c;
}

RunContext make_run_context(const ExperimentConfig& config, const std::string& method,
                            std::uint64_t seed) {
    Dataset full = load_dataset(config.dataset);
    auto [train, test] =
        split_and_standardize(full, config.dataset.split_ratio, mix_seed(config.dataset.split_seed, seed));
    auto [fit, val] = stratified_split(train, 0.9, mix_seed(seed, 0xF17));

    RunContext ctx;
    ctx.method = method;
    ctx.seed = seed;
    ctx.manifest = config.dataset;
    ctx.fit = std::move(fit);
    ctx.val = std::move(val);
    ctx.test = std::move(test);
    ctx.space = ConfigurationSpace::standard(full.task, full.n_classes, full.is_image_shaped());
    ctx.budget = config.budget;
    return ctx;
}

static std::string record_stem(const RunRecord& r) {
    std::string stem = r.method + "_seed" + std::to_string(r.seed);
    if (r.method == "lgt") stem += "_iter" + std::to_string(r.iteration_index);
    return stem;
}

static void write_text_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << content;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    config.validate();
    ExperimentResult result;

    const fs::path out_dir(config.output_dir);
    fs::create_directories(out_dir / "records");
    fs::create_directories(out_dir / "transcripts");

    for (std::uint64_t seed : config.seeds) {
        for (const std::string& method : config.methods) {
            try {
                RunContext ctx = make_run_context(config, method, seed);
                ctx.transcript_path =
                    (out_dir / "transcripts" / (method + "_seed" + std::to_string(seed) + ".jsonl"))
                        .string();

                std::vector<RunRecord> records;
                if (method == "no_tuning") {
                    records.push_back(run_no_tuning(ctx));
                } else if (method == "random") {
                    auto [rec, search] = run_random_search(ctx);
                    write_text_file(out_dir / "records" / (record_stem(rec) + "_search.json"),
                                    search.to_json().dump(2) + "\n");
                    records.push_back(std::move(rec));
                } else if (method == "grid") {
                    auto [rec, search] = run_grid_search(ctx, config.grid_resolution);
                    write_text_file(out_dir / "records" / (record_stem(rec) + "_search.json"),
                                    search.to_json().dump(2) + "\n");
                    records.push_back(std::move(rec));
                } else {
                    auto backend = make_backend(config.backend);
                    records = run_lgt(ctx, *backend);
                }

                for (const RunRecord& rec : records) {
                    write_text_file(out_dir / "records" / (record_stem(rec) + ".json"),
                                    rec.to_json().dump(2) + "\n");
                    if (rec.status != "ok") ++result.n_failed;
                    result.records.push_back(rec);
                }
            } catch (const std::exception& e) {
                std::cerr << "[lgt] run failed (" << method << ", seed " << seed << "): " << e.what()
                          << std::endl;
                ++result.n_failed;
            }
        }
    }

    if (result.n_failed > 0)
        std::cerr << "[lgt] " << result.n_failed << " run(s) failed out of "
                  << result.records.size() << std::endl;
    return result;
}

// ---------------------------------------------------------------------------
// reporting

static std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

struct Stat {
    double mean = 0.0;
    double stddev = 0.0;  // sample (n-1); 0 when n == 1
    int n = 0;
};

static Stat mean_std(const std::vector<double>& xs) {
    Stat s;
    s.n = static_cast<int>(xs.size());
    if (s.n == 0) return s;
    for (double x : xs) s.mean += x;
    s.mean /= s.n;
    if (s.n > 1) {
        double acc = 0.0;
        for (double x : xs) acc += (x - s.mean) * (x - s.mean);
        s.stddev = std::sqrt(acc / (s.n - 1));
    }
    return s;
}

/// For LGT, the run's outcome is its last iteration's record.
static std::vector<const RunRecord*> final_records(const std::vector<RunRecord>& records) {
    std::map<std::pair<std::string, std::uint64_t>, const RunRecord*> last;
    for (const auto& r : records) {
        if (r.status != "ok") continue;
        auto key = std::make_pair(r.method, r.seed);
        auto it = last.find(key);
        if (it == last.end() || r.iteration_index > it->second->iteration_index) last[key] = &r;
    }
    std::vector<const RunRecord*> out;
    for (const auto& [key, rec] : last) out.push_back(rec);
    return out;
}

void emit_report(const std::vector<RunRecord>& records, const std::string& out_dir) {
    if (records.empty()) throw std::invalid_argument("emit_report: no records");
    for (const auto& r : records)
        if (r.task != records.front().task)
            throw std::invalid_argument("emit_report: records mix task types");
    const TaskType task = records.front().task;

    const fs::path dir(out_dir);
    fs::create_directories(dir / "curves");

    // (a) summary.csv over seeds, per method
    const std::vector<const RunRecord*> finals = final_records(records);
    std::map<std::string, std::vector<const RunRecord*>> by_method;
    for (const RunRecord* r : finals) by_method[r->method].push_back(r);

    std::vector<std::string> metric_names =
        task == TaskType::classification
            ? std::vector<std::string>{"accuracy", "macro_f1", "auc", "test_loss"}
            : std::vector<std::string>{"mae", "mse", "r2", "test_loss"};

    std::ostringstream summary_csv;
    summary_csv << "method,metric,mean,std,n\n";
    std::ostringstream summary_txt;
    summary_txt << "Summary (" << to_string(task) << "), mean +/- sample std over seeds\n";
    for (const auto& [method, recs] : by_method) {
        summary_txt << "\n" << method << " (" << recs.size() << " run(s))\n";
        for (const auto& name : metric_names) {
            std::vector<double> xs;
            for (const RunRecord* r : recs) {
                const MetricSet& m = r->final_test_metrics;
                if (name == "accuracy") xs.push_back(m.accuracy);
                else if (name == "macro_f1") xs.push_back(m.macro_f1);
                else if (name == "auc") { if (m.auc) xs.push_back(*m.auc); }
                else if (name == "mae") xs.push_back(m.mae);
                else if (name == "mse") xs.push_back(m.mse);
                else if (name == "r2") xs.push_back(m.r2);
                else xs.push_back(r->final_test_loss);
            }
            const Stat s = mean_std(xs);
            summary_csv << method << "," << name << "," << fmt(s.mean) << "," << fmt(s.stddev) << ","
                        << s.n << "\n";
            summary_txt << "  " << name << ": " << fmt(s.mean) << " +/- " << fmt(s.stddev)
                        << (s.n == 1 ? "  (single run; std reported as 0)" : "") << "\n";
        }
    }
    write_text_file(dir / "summary.csv", summary_csv.str());
    write_text_file(dir / "summary.txt", summary_txt.str());

    // (b) per-run loss curves: train loss from history, test loss per epoch
    for (const auto& r : records) {
        if (r.status != "ok") continue;
        std::ostringstream curve;
        curve << "epoch,train_loss,test_loss\n";
        for (std::size_t i = 0; i < r.history.size(); ++i) {
            const double test_loss =
                i < r.epoch_test_loss.size() ? r.epoch_test_loss[i] : std::nan("");
            curve << r.history[i].epoch << "," << fmt(r.history[i].metrics.train_loss) << ","
                  << fmt(test_loss) << "\n";
        }
        std::string stem = r.method + "_seed" + std::to_string(r.seed);
        if (r.method == "lgt") stem += "_iter" + std::to_string(r.iteration_index);
        write_text_file(dir / "curves" / (stem + ".csv"), curve.str());
    }

    // (c) configuration evolution: every applied change with its rationale
    std::ostringstream deltas;
    deltas << "method,seed,iteration,epoch,field,action,old_value,requested_value,applied_value,"
              "trust_region_capped,clamped,dropped,rationale\n";
    auto csv_escape = [](std::string s) {
        for (auto& c : s)
            if (c == ',' || c == '\n') c = ';';
        return s;
    };
    for (const auto& r : records) {
        for (const auto& h : r.history) {
            for (const auto& ev : h.apply_report.events) {
                deltas << r.method << "," << r.seed << "," << r.iteration_index << "," << h.epoch
                       << "," << ev.field << "," << ev.action << "," << fmt(ev.old_value) << ","
                       << fmt(ev.requested_value) << "," << fmt(ev.applied_value) << ","
                       << (ev.trust_region_capped ? 1 : 0) << "," << (ev.clamped ? 1 : 0) << ","
                       << (ev.dropped ? 1 : 0) << "," << csv_escape(h.advisor_rationale) << "\n";
            }
        }
    }
    write_text_file(dir / "deltas.csv", deltas.str());
}

std::vector<RunRecord> load_records(const std::string& dir) {
    fs::path p(dir);
    if (fs::exists(p / "records")) p /= "records";
    if (!fs::exists(p)) throw std::runtime_error("load_records: no such directory '" + dir + "'");

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(p)) {
        if (entry.path().extension() != ".json") continue;
        const std::string name = entry.path().filename().string();
        if (name.size() > 12 && name.substr(name.size() - 12) == "_search.json") continue;
        files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());

    std::vector<RunRecord> out;
    for (const auto& f : files) {
        std::ifstream in(f);
        json j = json::parse(in, nullptr, /*allow_exceptions=*/false);
        if (j.is_discarded()) {
            std::cerr << "[lgt] skipping unparseable record " << f << std::endl;
            continue;
        }
        out.push_back(RunRecord::from_json(j));
    }
    return out;
}

}  // namespace lgt
