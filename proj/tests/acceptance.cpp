// SPDX-License-Identifier: Apache-2.0
//
// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line; the
// process exits non-zero if any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gradcheck_util.hpp"
#include "lgt/experiment.hpp"
#include "lgt/fuzz.hpp"
#include "lgt/kernels.hpp"
#include "lgt/metrics.hpp"
#include "lgt/trainer.hpp"
#include "oracles.hpp"

using namespace lgt;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

struct Criterion {
    int number;
    std::string name;
    bool passed = true;
    std::vector<std::string> notes;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            passed = false;
            notes.push_back(what);
        }
    }
    void note(const std::string& s) { notes.push_back(s); }
};

void report(const Criterion& c, double seconds) {
    std::printf("[%s] %2d. %-28s (%.1fs)%s\n", c.passed ? "PASS" : "FAIL", c.number,
                c.name.c_str(), seconds, c.notes.empty() ? "" : "");
    for (const auto& n : c.notes) std::printf("         - %s\n", n.c_str());
    if (!c.passed) ++g_failures;
}

void run_criterion(int number, const std::string& name,
                   const std::function<void(Criterion&)>& body) {
    Criterion c{number, name};
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.passed = false;
        c.notes.push_back(std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(c, secs);
}

fs::path fresh_dir(const std::string& tag) {
    const fs::path p = fs::temp_directory_path() / ("lgt_acceptance_" + tag);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw std::runtime_error("cannot read " + p.string());
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

ExperimentConfig base_experiment(const std::string& out_tag) {
    ExperimentConfig cfg;
    cfg.dataset.name = "blobs";
    cfg.dataset.source = "builtin";
    cfg.dataset.builtin_kind = "blobs_classification";
    cfg.dataset.builtin_params =
        json{{"n_samples", 90}, {"n_features", 5}, {"n_classes", 2}, {"separation", 2.0}};
    cfg.dataset.task = TaskType::classification;
    cfg.backend.kind = "scripted";
    cfg.output_dir = fresh_dir(out_tag).string();
    return cfg;
}

// ---------------------------------------------------------------------------
// criterion bodies

void criterion_gradients(Criterion& c) {
    int models = 0;
    double worst = 0.0;
    for (LossKind kind : {LossKind::cross_entropy, LossKind::focal, LossKind::mse, LossKind::mae,
                          LossKind::huber}) {
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            auto cs = gradcheck::make_case(kind, Activation::tanh,
                                           seed * 131 + static_cast<std::uint64_t>(kind) * 7);
            c.require(cs.model.parameter_count() <= 200, "model exceeds 200 parameters");
            const auto w = gradcheck::run(cs.model, kind, cs.x, cs.y, cs.hyper);
            worst = std::max(worst, w.rel_err);
            ++models;
        }
    }
    c.require(models == 100, "expected 100 gradient checks");
    c.require(worst < 1e-4, "worst relative error " + std::to_string(worst) + " >= 1e-4");
    std::ostringstream os;
    os << "100 models (20 per loss kind), worst relative error " << worst;
    c.note(os.str());
}

void criterion_metric_oracles(Criterion& c) {
    SeededRng rng(911);
    int auc_checked = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const int n = rng.uniform_int(2, 50);
        std::vector<double> scores(static_cast<std::size_t>(n));
        std::vector<double> labels(static_cast<std::size_t>(n));
        std::vector<int> int_labels(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            scores[static_cast<std::size_t>(i)] = rng.uniform_int(0, 12) / 12.0;
            int_labels[static_cast<std::size_t>(i)] = rng.uniform_int(0, 1);
            labels[static_cast<std::size_t>(i)] = int_labels[static_cast<std::size_t>(i)];
        }
        Matrix probs(n, 2);
        for (int i = 0; i < n; ++i) {
            probs(i, 1) = scores[static_cast<std::size_t>(i)];
            probs(i, 0) = 1.0 - scores[static_cast<std::size_t>(i)];
        }
        const double brute = oracles::brute_force_auc(scores, int_labels);
        const MetricSet m = compute_metrics(TaskType::classification, probs, labels);
        if (brute < 0.0) {
            c.require(!m.auc.has_value(), "auc defined where brute force is undefined");
        } else {
            c.require(m.auc.has_value(), "auc undefined where brute force is defined");
            if (m.auc) c.require(*m.auc == brute, "auc != brute-force pairwise counting (exact)");
            ++auc_checked;
        }
    }
    c.note("auc exact-equal on " + std::to_string(auc_checked) + " defined sets of 200");

    // R^2 anchors
    const std::vector<double> targets{1.0, 2.0, 3.0, 6.0};
    const double mean = 3.0;
    Matrix mean_pred(4, 1, mean);
    c.require(compute_metrics(TaskType::regression, mean_pred, targets).r2 == 0.0,
              "mean predictor r2 != 0");
    Matrix perfect(4, 1);
    for (int i = 0; i < 4; ++i) perfect(i, 0) = targets[static_cast<std::size_t>(i)];
    c.require(compute_metrics(TaskType::regression, perfect, targets).r2 == 1.0,
              "perfect predictor r2 != 1");

    // focal(gamma 0) == cross-entropy on 100 random batches
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = rng.uniform_int(2, 16);
        const int k = rng.uniform_int(2, 5);
        Matrix logits(n, k);
        for (auto& v : logits.data) v = rng.uniform(-4.0, 4.0);
        std::vector<double> y(static_cast<std::size_t>(n));
        for (auto& v : y) v = rng.uniform_int(0, k - 1);
        HyperSpec h;
        h.focal_gamma = 0.0;
        const LossResult ce = loss_and_grad(LossKind::cross_entropy, logits, y, h);
        const LossResult fo = loss_and_grad(LossKind::focal, logits, y, h);
        worst = std::max(worst, std::abs(ce.loss - fo.loss));
        for (std::size_t i = 0; i < ce.grad.data.size(); ++i)
            worst = std::max(worst, std::abs(ce.grad.data[i] - fo.grad.data[i]));
    }
    c.require(worst < 1e-9, "focal(0) vs cross-entropy deviation >= 1e-9");
    std::ostringstream os;
    os << "focal(0) vs cross-entropy worst deviation " << worst;
    c.note(os.str());
}

void criterion_optimizer_identities(Criterion& c) {
    // adam == adamw at weight decay 0, step for step, 100 steps
    ArchSpec arch;
    arch.layer_widths = {6, 5};
    SeededRng init(3);
    MlpModel ma = build_model(arch, 4, 3, init);
    MlpModel mw = ma;
    OptimizerState sa, sw;
    sa.kind = OptimizerKind::adam;
    sw.kind = OptimizerKind::adamw;
    SeededRng rng(99);
    double worst = 0.0;
    for (int step = 0; step < 100; ++step) {
        Grads g;
        for (const auto& w : ma.weights) {
            Matrix gw(w.rows, w.cols);
            for (auto& v : gw.data) v = rng.uniform(-1.0, 1.0);
            g.weights.push_back(std::move(gw));
        }
        for (const auto& b : ma.biases) {
            std::vector<double> gb(b.size());
            for (auto& v : gb) v = rng.uniform(-1.0, 1.0);
            g.biases.push_back(std::move(gb));
        }
        optimizer_step(ma, g, sa, 0.005, 0.0);
        optimizer_step(mw, g, sw, 0.005, 0.0);
        for (std::size_t l = 0; l < ma.weights.size(); ++l)
            for (std::size_t i = 0; i < ma.weights[l].data.size(); ++i)
                worst = std::max(worst,
                                 std::abs(ma.weights[l].data[i] - mw.weights[l].data[i]));
    }
    c.require(worst < 1e-12, "adam/adamw divergence at wd=0 exceeds 1e-12");

    // adamw with zero gradients shrinks by exactly (1 - lr*wd) per step
    const double lr = 0.01, wd = 0.1;
    MlpModel m;
    m.input_dim = 1;
    m.output_dim = 1;
    m.weights.emplace_back(1, 1, 1.0);
    m.biases.emplace_back(1, 0.0);
    OptimizerState st;
    st.kind = OptimizerKind::adamw;
    Grads zg;
    zg.weights.emplace_back(1, 1, 0.0);
    zg.biases.emplace_back(1, 0.0);
    double expected = 1.0;
    for (int step = 0; step < 10; ++step) {
        optimizer_step(m, zg, st, lr, wd);
        expected *= 1.0 - lr * wd;
        c.require(m.weights[0](0, 0) == expected,
                  "adamw zero-grad shrink not exact at step " + std::to_string(step + 1));
    }
    std::ostringstream os;
    os << "adam/adamw wd=0 worst divergence " << worst << "; zero-grad shrink exact over 10 steps";
    c.note(os.str());
}

ExperimentConfig determinism_experiment(const std::string& tag) {
    ExperimentConfig cfg = base_experiment(tag);
    cfg.methods = {"no_tuning", "random", "grid", "lgt"};
    cfg.seeds = {42, 43, 44, 45, 46, 47, 48, 49, 50, 51};
    cfg.budget = Budget{5, 5, 2};
    cfg.grid_resolution = {{"learning_rate", 3}};
    return cfg;
}

void criterion_determinism(Criterion& c) {
    const ExperimentConfig cfg_a = determinism_experiment("det_a");
    const ExperimentConfig cfg_b = determinism_experiment("det_b");
    const ExperimentResult ra = run_experiment(cfg_a);
    const ExperimentResult rb = run_experiment(cfg_b);
    c.require(ra.n_failed == 0 && rb.n_failed == 0, "runs failed");
    c.require(ra.records.size() == rb.records.size(), "record counts differ");

    std::map<std::string, std::string> bytes_a;
    for (const auto& entry : fs::directory_iterator(fs::path(cfg_a.output_dir) / "records"))
        bytes_a[entry.path().filename().string()] = slurp(entry.path());
    int compared = 0;
    for (const auto& entry : fs::directory_iterator(fs::path(cfg_b.output_dir) / "records")) {
        const std::string name = entry.path().filename().string();
        c.require(bytes_a.count(name) == 1, "record set mismatch: " + name);
        if (bytes_a.count(name) == 1) {
            c.require(slurp(entry.path()) == bytes_a[name], "record bytes differ: " + name);
            ++compared;
        }
    }
    c.note(std::to_string(compared) + " record files byte-identical across two executions "
           "(4 methods x seeds 42-51)");
}

void criterion_algorithm1(Criterion& c) {
    ExperimentConfig cfg = base_experiment("alg1");
    RunContext ctx = make_run_context(cfg, "lgt", 42);
    ctx.budget = Budget{50, 10, 1};
    ctx.transcript_path = (fresh_dir("alg1_t") / "transcript.jsonl").string();
    ScriptedBackend backend;
    const std::vector<RunRecord> records = run_lgt(ctx, backend);
    c.require(records.size() == 1 && records[0].status == "ok", "lgt run failed");
    c.require(records[0].history.size() == 10, "expected T=10 history entries");
    for (std::size_t i = 0; i < records[0].history.size(); ++i)
        c.require(records[0].history[i].epoch == static_cast<int>(i) + 1,
                  "history epochs not contiguous from 1");

    std::ifstream in(ctx.transcript_path);
    std::vector<json> lines;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) lines.push_back(json::parse(line));

    const std::vector<std::string> expected{"train",    "advise",        "apply",
                                            "evaluate", "prompt_update", "history_append"};
    std::size_t cursor = 0;
    for (int epoch = 1; epoch <= 10; ++epoch) {
        for (const auto& step : expected) {
            c.require(cursor < lines.size(), "transcript truncated");
            if (cursor >= lines.size()) return;
            const json& entry = lines[cursor];
            c.require(entry.at("epoch").get<int>() == epoch, "step epoch out of order");
            c.require(entry.at("step").get<std::string>() == step,
                      "expected step '" + step + "' at seq " + std::to_string(cursor));
            if (step == "history_append")
                c.require(entry.at("detail").at("history_size").get<int>() == epoch,
                          "|H_t| != t at epoch " + std::to_string(epoch));
            ++cursor;
        }
    }
    c.note("10 epochs, step order train/advise/apply/evaluate/prompt_update/history_append");
}

// Adversarial scripted rule sets: extreme factors, out-of-range sets,
// out-of-vocabulary names, unknown fields, hostile note ops.
ScriptedRuleSet adversarial_rules(int variant) {
    ScriptedRuleSet rs;
    auto adv = [](const AgentCall& c) { return c.kind == AgentKind::advisor; };
    switch (variant) {
        case 0:
            rs.rules.push_back({"adv.huge_scale", adv, [](const AgentCall&) {
                return json{{"changes",
                             json::array({json{{"scale_numeric",
                                                {{"field", "learning_rate"}, {"factor", 1000.0}}}},
                                          json{{"scale_numeric",
                                                {{"field", "weight_decay"}, {"factor", -50.0}}}}})},
                            {"rationale", "go big"}};
            }});
            break;
        case 1:
            rs.rules.push_back({"adv.out_of_range_sets", adv, [](const AgentCall&) {
                return json{{"changes",
                             json::array({json{{"set_numeric",
                                                {{"field", "learning_rate"}, {"value", 99.0}}}},
                                          json{{"set_numeric",
                                                {{"field", "batch_size"}, {"value", 1e9}}}},
                                          json{{"set_numeric",
                                                {{"field", "class_weight.0"}, {"value", -5.0}}}}})},
                            {"rationale", "out of range"}};
            }});
            break;
        case 2:
            rs.rules.push_back({"adv.vocab_violations", adv, [](const AgentCall&) {
                return json{{"changes",
                             json::array({json{{"set_categorical",
                                                {{"field", "optimizer"}, {"value", "lion"}}}},
                                          json{{"set_numeric",
                                                {{"field", "warmup_steps"}, {"value", 10.0}}}},
                                          json{{"add_method", "rotation"}},
                                          json{{"add_method", "banana"}}})},
                            {"rationale", "vocabulary chaos"}};
            }});
            break;
        default:
            rs.rules.push_back({"adv.oscillate", adv, [](const AgentCall& call) {
                const double f = call.advisor->current_metrics.epoch % 2 == 0 ? 64.0 : 1.0 / 64.0;
                return json{{"changes",
                             json::array({json{{"scale_numeric",
                                                {{"field", "learning_rate"}, {"factor", f}}}},
                                          json{{"scale_numeric",
                                                {{"field", "class_weight.1"}, {"factor", f}}}}})},
                            {"rationale", "oscillate hard"}};
            }});
            break;
    }
    // evaluator/optimizer have no custom rules: the built-in catch-alls answer
    return rs;
}

void criterion_bounded_updates(Criterion& c) {
    ExperimentConfig cfg = base_experiment("bounded");
    int epochs_checked = 0;
    int caps_seen = 0;
    int violations = 0;
    int invalid_configs = 0;

    for (int variant = 0; variant < 4; ++variant) {
        for (std::uint64_t seed = 42; seed < 42 + 25; ++seed) {
            RunContext ctx = make_run_context(cfg, "lgt", seed);
            ctx.budget = Budget{50, 10, 1};
            ScriptedBackend backend(adversarial_rules(variant));
            TranscriptWriter no_transcript;
            BudgetLedger ledger{50, 0};
            PromptState prompt{prompts::kAdvisorBase, {}};
            const RunRecord rec = run_lgt_iteration(ctx, default_config(ctx.space, ctx.fit.task).arch,
                                                    prompt, backend, ledger, no_transcript, 1);
            if (rec.status != "ok") {
                ++violations;
                continue;
            }
            for (const auto& h : rec.history) {
                ++epochs_checked;
                if (!validate(h.config, ctx.space).ok()) ++invalid_configs;
                for (const auto& ev : h.apply_report.events) {
                    if (ev.dropped || (ev.action != "set" && ev.action != "scale")) continue;
                    const NumericFieldSpec* f = ctx.space.find_numeric(ev.field);
                    if (f == nullptr) {
                        ++violations;
                        continue;
                    }
                    const double denom =
                        std::max(std::abs(ev.old_value), (f->hi - f->lo) * 1e-6);
                    if (std::abs(ev.capped_value - ev.old_value) >
                        f->trust_region * denom * (1.0 + 1e-9))
                        ++violations;
                    if (ev.applied_value < f->lo - 1e-12 || ev.applied_value > f->hi + 1e-12)
                        ++violations;
                    if (ev.trust_region_capped) ++caps_seen;
                }
            }
        }
    }
    c.require(epochs_checked >= 1000, "fewer than 1000 adversarial epochs exercised: " +
                                          std::to_string(epochs_checked));
    c.require(violations == 0, std::to_string(violations) + " trust-region/bound violations");
    c.require(invalid_configs == 0, std::to_string(invalid_configs) + " invalid configurations");
    c.require(caps_seen > 0, "adversarial rules never triggered the trust region");
    c.note(std::to_string(epochs_checked) + " epochs across 4 adversarial rule variants, " +
           std::to_string(caps_seen) + " trust-region caps applied, zero violations");
}

void criterion_parser_robustness(Criterion& c) {
    const FuzzReport report = fuzz_parsers(10000);
    c.require(report.aborts == 0, std::to_string(report.aborts) + " parser aborts");
    c.require(report.invariant_violations == 0,
              std::to_string(report.invariant_violations) + " invariant violations");
    c.note(report.summary());
}

const RunRecord* last_lgt_record(const std::vector<RunRecord>& records, std::uint64_t seed) {
    const RunRecord* best = nullptr;
    for (const auto& r : records)
        if (r.method == "lgt" && r.seed == seed && r.status == "ok" &&
            (best == nullptr || r.iteration_index > best->iteration_index))
            best = &r;
    return best;
}

const RunRecord* find_record(const std::vector<RunRecord>& records, const std::string& method,
                             std::uint64_t seed) {
    for (const auto& r : records)
        if (r.method == method && r.seed == seed && r.status == "ok") return &r;
    return nullptr;
}

void criterion_directional(Criterion& c) {
    const auto t0 = std::chrono::steady_clock::now();

    // overfit_trap: scripted-LGT vs No-Tuning on final test loss
    ExperimentConfig trap = base_experiment("trap");
    trap.dataset.name = "overfit_trap";
    trap.dataset.builtin_kind = "overfit_trap";
    trap.dataset.builtin_params = json();
    trap.methods = {"no_tuning", "lgt"};
    trap.budget = Budget{50, 10, 3};
    const ExperimentResult trap_result = run_experiment(trap);

    int wins = 0;
    double lgt_mean = 0.0, nt_mean = 0.0;
    int pairs = 0;
    for (std::uint64_t seed : trap.seeds) {
        const RunRecord* lgt_rec = last_lgt_record(trap_result.records, seed);
        const RunRecord* nt_rec = find_record(trap_result.records, "no_tuning", seed);
        c.require(lgt_rec != nullptr && nt_rec != nullptr,
                  "missing records for seed " + std::to_string(seed));
        if (lgt_rec == nullptr || nt_rec == nullptr) continue;
        if (lgt_rec->final_test_loss < nt_rec->final_test_loss) ++wins;
        lgt_mean += lgt_rec->final_test_loss;
        nt_mean += nt_rec->final_test_loss;
        ++pairs;
    }
    lgt_mean /= pairs;
    nt_mean /= pairs;
    c.require(wins >= 8, "overfit_trap: lgt beat no_tuning in only " + std::to_string(wins) +
                             "/10 seeds");
    c.require(lgt_mean <= 0.9 * nt_mean, "overfit_trap: mean test loss not 10% lower (lgt " +
                                             std::to_string(lgt_mean) + " vs no_tuning " +
                                             std::to_string(nt_mean) + ")");
    {
        std::ostringstream os;
        os << "overfit_trap: lgt wins " << wins << "/10, mean loss " << lgt_mean << " vs "
           << nt_mean;
        c.note(os.str());
    }

    // blobs: scripted-LGT vs random search under an equal budget of 5
    ExperimentConfig blobs = base_experiment("blobs_dir");
    blobs.methods = {"random", "lgt"};
    blobs.budget = Budget{5, 10, 3};
    const ExperimentResult blob_result = run_experiment(blobs);

    int acc_wins = 0;
    double lgt_acc_mean = 0.0, rs_acc_mean = 0.0;
    int acc_pairs = 0;
    for (std::uint64_t seed : blobs.seeds) {
        const RunRecord* lgt_rec = last_lgt_record(blob_result.records, seed);
        const RunRecord* rs_rec = find_record(blob_result.records, "random", seed);
        c.require(lgt_rec != nullptr && rs_rec != nullptr,
                  "missing blob records for seed " + std::to_string(seed));
        if (lgt_rec == nullptr || rs_rec == nullptr) continue;
        if (lgt_rec->final_test_metrics.accuracy >= rs_rec->final_test_metrics.accuracy) ++acc_wins;
        lgt_acc_mean += lgt_rec->final_test_metrics.accuracy;
        rs_acc_mean += rs_rec->final_test_metrics.accuracy;
        ++acc_pairs;
    }
    lgt_acc_mean /= acc_pairs;
    rs_acc_mean /= acc_pairs;
    c.require(acc_wins >= 7, "blobs: lgt matched/beat random search in only " +
                                 std::to_string(acc_wins) + "/10 seeds");
    {
        std::ostringstream os;
        os << "blobs: lgt >= random in " << acc_wins << "/10 seeds, mean accuracy " << lgt_acc_mean
           << " vs " << rs_acc_mean;
        c.note(os.str());
    }

    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.require(secs < 300.0, "directional experiments exceeded 5 minutes");
}

void write_iris_shaped_csv(const fs::path& path) {
    // 150 rows, 4 features, 3 balanced text-labelled classes
    const SyntheticParams p{150, 4, 3, 0.6, 2.5};
    const Dataset d = make_synthetic("blobs_classification", p, 4242);
    static const char* labels[] = {"setosa", "versicolor", "virginica"};
    std::ofstream out(path);
    out << "sepal_length,sepal_width,petal_length,petal_width,species\n";
    for (int i = 0; i < d.n_samples(); ++i) {
        for (int j = 0; j < 4; ++j) out << d.features(i, j) << ",";
        out << labels[d.class_of(i)] << "\n";
    }
}

void criterion_iris(Criterion& c) {
    fs::path csv_path;
    const char* user_iris = std::getenv("LGT_IRIS_CSV");
    if (user_iris != nullptr && *user_iris != '\0') {
        csv_path = user_iris;
        c.note(std::string("using user-supplied iris csv: ") + user_iris);
    } else {
        csv_path = fresh_dir("iris") / "iris.csv";
        write_iris_shaped_csv(csv_path);
        c.note("no LGT_IRIS_CSV set; using a generated iris-shaped csv (150x4, 3 classes)");
    }

    ExperimentConfig cfg = base_experiment("iris_run");
    cfg.dataset.name = "iris";
    cfg.dataset.source = "csv";
    cfg.dataset.path = csv_path.string();
    cfg.dataset.target_column = "species";
    cfg.dataset.task = TaskType::classification;
    cfg.methods = {"no_tuning", "lgt"};
    cfg.seeds = {42, 43};
    cfg.budget = Budget{50, 5, 2};

    const Dataset d = load_csv(cfg.dataset);
    c.require(d.n_samples() == 150, "expected 150 samples, got " + std::to_string(d.n_samples()));
    c.require(d.n_features() == 4, "expected 4 features, got " + std::to_string(d.n_features()));
    c.require(d.n_classes == 3, "expected 3 classes, got " + std::to_string(d.n_classes));

    auto [train, test] = split_and_standardize(d, 0.8, 42);
    c.require(train.n_samples() == 120, "expected 120 train samples");
    c.require(test.n_samples() == 30, "expected 30 test samples");

    const ExperimentResult result = run_experiment(cfg);
    c.require(result.n_failed == 0, "iris comparison runs failed");
    const std::string report_dir = (fs::path(cfg.output_dir) / "report").string();
    emit_report(result.records, report_dir);
    const std::string summary = slurp(fs::path(report_dir) / "summary.csv");
    c.require(summary.find("no_tuning,accuracy") != std::string::npos,
              "summary.csv missing no_tuning accuracy row");
    c.require(summary.find("lgt,accuracy") != std::string::npos,
              "summary.csv missing lgt accuracy row");
    c.note("loader 150/4/3, split 120/30, mean+std summary written");
}

void criterion_budget(Criterion& c) {
    ExperimentConfig cfg = base_experiment("budget");
    cfg.methods = {"no_tuning", "random", "grid", "lgt"};
    cfg.seeds = {42};
    cfg.budget = Budget{50, 2, 3};
    cfg.grid_resolution = {{"learning_rate", 10}, {"hidden_width", 10}};  // 100-point grid
    const ExperimentResult result = run_experiment(cfg);
    c.require(result.n_failed == 0, "budget experiment runs failed");

    std::map<std::pair<std::string, std::uint64_t>, int> used;
    for (const auto& r : result.records) used[{r.method, r.seed}] += r.configs_trained;
    for (const auto& [key, n] : used) {
        c.require(n <= 50, key.first + " consumed " + std::to_string(n) + " > 50 configurations");
        if (key.first == "grid")
            c.require(n == 50, "grid should truncate exactly at the 50-configuration budget, got " +
                                   std::to_string(n));
        if (key.first == "random")
            c.require(n == 50, "random search should evaluate exactly its 50-configuration budget, "
                               "got " + std::to_string(n));
    }
    c.note("100-point grid and random search both capped at exactly 50; every ledger within budget");
}

}  // namespace

int main() {
    std::printf("acceptance suite\n================\n");
    run_criterion(1, "gradient oracle", criterion_gradients);
    run_criterion(2, "metric oracles", criterion_metric_oracles);
    run_criterion(3, "optimizer identities", criterion_optimizer_identities);
    run_criterion(4, "scripted determinism", criterion_determinism);
    run_criterion(5, "algorithm-1 conformance", criterion_algorithm1);
    run_criterion(6, "bounded updates", criterion_bounded_updates);
    run_criterion(7, "parser robustness", criterion_parser_robustness);
    run_criterion(8, "directional desk-scale", criterion_directional);
    run_criterion(9, "iris csv pipeline", criterion_iris);
    run_criterion(10, "budget accounting", criterion_budget);

    if (g_failures == 0) {
        std::printf("\nall 10 acceptance criteria passed\n");
        return 0;
    }
    std::printf("\n%d acceptance criteria FAILED\n", g_failures);
    return 1;
}
