// SPDX-License-Identifier: Apache-2.0
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lgt/experiment.hpp"
#include "lgt/fuzz.hpp"

using nlohmann::json;

namespace {

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    json j = json::parse(in, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) throw std::runtime_error("'" + path + "' is not valid JSON");
    return j;
}

int cmd_run(const std::string& config_path, const std::vector<std::string>& methods,
            const std::vector<std::uint64_t>& seeds, const std::string& backend_kind,
            const std::string& endpoint, const std::string& model, const std::string& out_dir) {
    lgt::ExperimentConfig config = lgt::ExperimentConfig::from_json(load_json_file(config_path));
    if (!methods.empty()) config.methods = methods;
    if (!seeds.empty()) config.seeds = seeds;
    if (!backend_kind.empty()) config.backend.kind = backend_kind;
    if (!endpoint.empty()) config.backend.endpoint_url = endpoint;
    if (!model.empty()) config.backend.model_name = model;
    if (!out_dir.empty()) config.output_dir = out_dir;

    const lgt::ExperimentResult result = lgt::run_experiment(config);
    std::cout << "wrote " << result.records.size() << " record(s) under " << config.output_dir
              << std::endl;
    lgt::emit_report(result.records, (std::filesystem::path(config.output_dir) / "report").string());
    std::cout << "report under " << (std::filesystem::path(config.output_dir) / "report").string()
              << std::endl;
    return result.n_failed == 0 ? 0 : 1;
}

int cmd_report(const std::string& in_dir, const std::string& out_dir) {
    const std::vector<lgt::RunRecord> records = lgt::load_records(in_dir);
    if (records.empty()) {
        std::cerr << "no records found under " << in_dir << std::endl;
        return 1;
    }
    lgt::emit_report(records, out_dir);
    std::cout << "report for " << records.size() << " record(s) under " << out_dir << std::endl;
    return 0;
}

int cmd_fuzz(int iterations) {
    const lgt::FuzzReport report = lgt::fuzz_parsers(iterations);
    std::cout << report.summary() << std::endl;
    return report.ok() ? 0 : 1;
}

int cmd_validate(const std::string& config_path) {
    const json j = load_json_file(config_path);
    if (j.contains("dataset")) {
        lgt::ExperimentConfig config = lgt::ExperimentConfig::from_json(j);
        config.validate();
        std::cout << "experiment config ok: " << config.methods.size() << " method(s), "
                  << config.seeds.size() << " seed(s), budget "
                  << config.budget.max_configurations << " configurations" << std::endl;
        return 0;
    }
    if (j.contains("arch")) {
        const lgt::Configuration c = lgt::Configuration::from_json(j);
        const auto task = c.strategy.loss == lgt::LossKind::mse ||
                                  c.strategy.loss == lgt::LossKind::mae ||
                                  c.strategy.loss == lgt::LossKind::huber
                              ? lgt::TaskType::regression
                              : lgt::TaskType::classification;
        const auto space = lgt::ConfigurationSpace::standard(
            task, static_cast<int>(c.hyper.class_weights.size()));
        const lgt::ValidationResult r = lgt::validate(c, space);
        if (r.ok()) {
            std::cout << "configuration ok" << std::endl;
            return 0;
        }
        for (const auto& v : r.violations)
            std::cout << "violation: " << v.message << " (field " << v.field << ", value " << v.value
                      << ", bound " << v.bound << ")" << std::endl;
        return 1;
    }
    std::cerr << "unrecognized config document (expected experiment or configuration JSON)"
              << std::endl;
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"language-guided training-configuration tuning engine"};
    app.require_subcommand(1);

    std::string config_path, endpoint, model, out_dir, backend_kind, in_dir;
    std::vector<std::string> methods;
    std::vector<std::uint64_t> seeds;
    int iterations = 10000;

    CLI::App* run = app.add_subcommand("run", "run an experiment from a config file");
    run->add_option("--config", config_path, "experiment config JSON")->required();
    run->add_option("--method", methods, "override methods (no_tuning|random|grid|lgt)");
    run->add_option("--seed", seeds, "override seeds");
    run->add_option("--backend", backend_kind, "backend kind (scripted|http)");
    run->add_option("--endpoint", endpoint, "http backend endpoint url");
    run->add_option("--model", model, "http backend model name");
    run->add_option("--out", out_dir, "output directory");

    CLI::App* report = app.add_subcommand("report", "summarize previously written records");
    report->add_option("--in", in_dir, "directory holding records")->required();
    report->add_option("--out", out_dir, "report output directory")->required();

    CLI::App* fuzz = app.add_subcommand("fuzz-parsers", "hammer the agent-response parsers");
    fuzz->add_option("--iterations", iterations, "number of fuzz inputs");

    CLI::App* validate = app.add_subcommand("validate-config", "validate a config document");
    validate->add_option("--config", config_path, "config JSON path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return cmd_run(config_path, methods, seeds, backend_kind, endpoint, model, out_dir);
        if (report->parsed()) return cmd_report(in_dir, out_dir);
        if (fuzz->parsed()) return cmd_fuzz(iterations);
        if (validate->parsed()) return cmd_validate(config_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
    return 0;
}
