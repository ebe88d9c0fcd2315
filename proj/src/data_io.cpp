// SPDX-License-Identifier: Apache-2.0
#include "lgt/data_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "lgt/rng.hpp"

namespace lgt {

using nlohmann::json;

json DatasetManifest::to_json() const {
    json j{{"name", name},
           {"source", source},
           {"task", lgt::to_string(task)},
           {"split_ratio", split_ratio},
           {"split_seed", split_seed}};
    if (source == "csv") {
        j["path"] = path;
        j["target_column"] = target_column;
    } else {
        j["builtin_kind"] = builtin_kind;
        if (!builtin_params.is_null()) j["builtin_params"] = builtin_params;
    }
    return j;
}

DatasetManifest DatasetManifest::from_json(const json& j) {
    DatasetManifest m;
    m.name = j.at("name").get<std::string>();
    m.source = j.value("source", std::string("builtin"));
    m.task = task_from_string(j.at("task").get<std::string>());
    m.split_ratio = j.value("split_ratio", 0.8);
    m.split_seed = j.value("split_seed", static_cast<std::uint64_t>(42));
    m.path = j.value("path", std::string());
    m.target_column = j.value("target_column", std::string());
    m.builtin_kind = j.value("builtin_kind", std::string("blobs_classification"));
    if (j.contains("builtin_params")) m.builtin_params = j.at("builtin_params");
    return m;
}

// ---------------------------------------------------------------------------
// synthetic generators

static SyntheticParams params_from_json(const json& j, SyntheticParams defaults) {
    if (j.is_null()) return defaults;
    defaults.n_samples = j.value("n_samples", defaults.n_samples);
    defaults.n_features = j.value("n_features", defaults.n_features);
    defaults.n_classes = j.value("n_classes", defaults.n_classes);
    defaults.noise = j.value("noise", defaults.noise);
    defaults.separation = j.value("separation", defaults.separation);
    return defaults;
}

Dataset make_synthetic(const std::string& kind, const SyntheticParams& params, std::uint64_t seed) {
    SeededRng rng(mix_seed(seed, fnv1a(kind)));
    Dataset d;

    if (kind == "blobs_classification") {
        const int n = params.n_samples, dim = params.n_features, k = std::max(2, params.n_classes);
        d.task = TaskType::classification;
        d.n_classes = k;
        d.features = Matrix(n, dim);
        d.targets.resize(static_cast<std::size_t>(n));
        Matrix centers(k, dim);
        for (auto& c : centers.data) c = params.separation * rng.normal();
        for (int i = 0; i < n; ++i) {
            const int y = i % k;
            d.targets[static_cast<std::size_t>(i)] = y;
            for (int j = 0; j < dim; ++j)
                d.features(i, j) = centers(y, j) + params.noise * rng.normal();
        }
        return d;
    }

    if (kind == "linear_regression") {
        const int n = params.n_samples, dim = params.n_features;
        d.task = TaskType::regression;
        d.features = Matrix(n, dim);
        d.targets.resize(static_cast<std::size_t>(n));
        std::vector<double> beta(static_cast<std::size_t>(dim));
        for (auto& b : beta) b = rng.normal();
        for (int i = 0; i < n; ++i) {
            double y = 0.0;
            for (int j = 0; j < dim; ++j) {
                d.features(i, j) = rng.normal();
                y += d.features(i, j) * beta[static_cast<std::size_t>(j)];
            }
            d.targets[static_cast<std::size_t>(i)] = y + params.noise * rng.normal();
        }
        return d;
    }

    if (kind == "overfit_trap") {
        // Small-n binary problem: a weak signal in the first four features,
        // the rest pure noise, plus label flips. Unregularized defaults
        // memorize the noise dimensions and overfit measurably.
        const int n = params.n_samples, dim = std::max(6, params.n_features);
        d.task = TaskType::classification;
        d.n_classes = 2;
        d.features = Matrix(n, dim);
        d.targets.resize(static_cast<std::size_t>(n));
        const int informative = 4;
        for (int i = 0; i < n; ++i) {
            const int y = i % 2;
            const double sign = y == 0 ? -1.0 : 1.0;
            for (int j = 0; j < dim; ++j) {
                const double mean = j < informative ? sign * params.separation * 0.5 : 0.0;
                d.features(i, j) = mean + rng.normal();
            }
            d.targets[static_cast<std::size_t>(i)] = y;
        }
        for (int i = 0; i < n; ++i)
            if (rng.uniform() < params.noise)
                d.targets[static_cast<std::size_t>(i)] = 1.0 - d.targets[static_cast<std::size_t>(i)];
        return d;
    }

    throw std::invalid_argument("make_synthetic: unknown kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// CSV loading

static std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

static std::vector<std::string> split_line(const std::string& line, char delim) {
    std::vector<std::string> cells;
    std::string cur;
    for (char ch : line) {
        if (ch == delim) {
            cells.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    cells.push_back(trim(cur));
    return cells;
}

static bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto res = std::from_chars(first, last, out);
    return res.ec == std::errc{} && res.ptr == last;
}

Dataset load_csv(const DatasetManifest& manifest) {
    std::ifstream in(manifest.path);
    if (!in) throw std::runtime_error("load_csv: cannot open '" + manifest.path + "'");

    std::string header_line;
    if (!std::getline(in, header_line)) throw std::runtime_error("load_csv: empty file");
    const char delim =
        header_line.find(',') == std::string::npos && header_line.find(';') != std::string::npos
            ? ';'
            : ',';
    const std::vector<std::string> header = split_line(header_line, delim);

    int target_idx = -1;
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == manifest.target_column) target_idx = static_cast<int>(i);
    if (target_idx < 0) {
        double as_index = 0.0;
        if (parse_double(manifest.target_column, as_index) &&
            as_index >= 0 && as_index < static_cast<double>(header.size()))
            target_idx = static_cast<int>(as_index);
    }
    if (target_idx < 0)
        throw std::runtime_error("load_csv: target column '" + manifest.target_column +
                                 "' not found in header");

    const int n_cols = static_cast<int>(header.size());
    std::vector<std::vector<double>> feature_rows;
    std::vector<double> targets;
    std::map<std::string, int> label_ids;  // first-appearance encoding
    std::vector<std::string> label_order;

    std::string line;
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        const auto cells = split_line(line, delim);
        if (static_cast<int>(cells.size()) != n_cols)
            throw std::runtime_error("load_csv: row " + std::to_string(row) + " has " +
                                     std::to_string(cells.size()) + " cells, expected " +
                                     std::to_string(n_cols));
        std::vector<double> feats;
        feats.reserve(static_cast<std::size_t>(n_cols - 1));
        for (int c = 0; c < n_cols; ++c) {
            if (c == target_idx) continue;
            double v = 0.0;
            if (!parse_double(cells[static_cast<std::size_t>(c)], v))
                throw std::runtime_error("load_csv: non-numeric feature cell at row " +
                                         std::to_string(row) + ", column '" +
                                         header[static_cast<std::size_t>(c)] + "'");
            feats.push_back(v);
        }
        const std::string& tcell = cells[static_cast<std::size_t>(target_idx)];
        if (manifest.task == TaskType::classification) {
            auto it = label_ids.find(tcell);
            if (it == label_ids.end()) {
                it = label_ids.emplace(tcell, static_cast<int>(label_order.size())).first;
                label_order.push_back(tcell);
            }
            targets.push_back(it->second);
        } else {
            double v = 0.0;
            if (!parse_double(tcell, v))
                throw std::runtime_error("load_csv: non-numeric regression target at row " +
                                         std::to_string(row));
            targets.push_back(v);
        }
        feature_rows.push_back(std::move(feats));
    }
    if (feature_rows.empty()) throw std::runtime_error("load_csv: no data rows");

    Dataset d;
    d.task = manifest.task;
    d.n_classes = manifest.task == TaskType::classification ? static_cast<int>(label_order.size()) : 0;
    d.features = Matrix(static_cast<int>(feature_rows.size()), n_cols - 1);
    d.targets = std::move(targets);
    for (std::size_t i = 0; i < feature_rows.size(); ++i)
        for (int j = 0; j < n_cols - 1; ++j)
            d.features(static_cast<int>(i), j) = feature_rows[i][static_cast<std::size_t>(j)];
    return d;
}

Dataset load_dataset(const DatasetManifest& manifest) {
    if (manifest.source == "csv") return load_csv(manifest);
    SyntheticParams defaults;
    if (manifest.builtin_kind == "overfit_trap") {
        defaults = {120, 32, 2, 0.08, 1.5};
    } else if (manifest.builtin_kind == "linear_regression") {
        defaults = {200, 8, 0, 0.5, 0.0};
    } else {
        defaults = {150, 8, 3, 1.0, 2.0};
    }
    return make_synthetic(manifest.builtin_kind, params_from_json(manifest.builtin_params, defaults),
                          manifest.split_seed);
}

// ---------------------------------------------------------------------------
// splitting / standardization

static std::pair<Dataset, Dataset> take_split(const Dataset& data, const std::vector<int>& train_idx,
                                              const std::vector<int>& test_idx) {
    auto gather = [&data](const std::vector<int>& idx) {
        Dataset out;
        out.task = data.task;
        out.n_classes = data.n_classes;
        out.image_height = data.image_height;
        out.image_width = data.image_width;
        out.features = Matrix(static_cast<int>(idx.size()), data.n_features());
        out.targets.reserve(idx.size());
        for (std::size_t i = 0; i < idx.size(); ++i) {
            for (int j = 0; j < data.n_features(); ++j)
                out.features(static_cast<int>(i), j) = data.features(idx[i], j);
            out.targets.push_back(data.targets[static_cast<std::size_t>(idx[i])]);
        }
        return out;
    };
    return {gather(train_idx), gather(test_idx)};
}

std::pair<Dataset, Dataset> stratified_split(const Dataset& data, double ratio, std::uint64_t seed) {
    if (!(ratio > 0.0 && ratio < 1.0))
        throw std::invalid_argument("split: ratio must be in (0, 1)");
    SeededRng rng(mix_seed(seed, 0x5117));

    std::vector<int> train_idx, test_idx;
    bool stratify = data.task == TaskType::classification;
    if (stratify) {
        std::vector<std::vector<int>> by_class(static_cast<std::size_t>(data.n_classes));
        for (int i = 0; i < data.n_samples(); ++i)
            by_class[static_cast<std::size_t>(data.class_of(i))].push_back(i);
        for (const auto& cls : by_class)
            if (cls.size() < 2) {
                std::cerr << "[lgt] warning: class with < 2 samples; falling back to plain shuffle"
                          << std::endl;
                stratify = false;
                break;
            }
        if (stratify) {
            for (auto& cls : by_class) {
                rng.shuffle(cls);
                const int n_train = static_cast<int>(std::llround(ratio * static_cast<double>(cls.size())));
                for (std::size_t i = 0; i < cls.size(); ++i)
                    (static_cast<int>(i) < n_train ? train_idx : test_idx).push_back(cls[i]);
            }
            std::sort(train_idx.begin(), train_idx.end());
            std::sort(test_idx.begin(), test_idx.end());
        }
    }
    if (!stratify) {
        std::vector<int> order(static_cast<std::size_t>(data.n_samples()));
        for (int i = 0; i < data.n_samples(); ++i) order[static_cast<std::size_t>(i)] = i;
        rng.shuffle(order);
        const int n_train = static_cast<int>(std::llround(ratio * data.n_samples()));
        train_idx.assign(order.begin(), order.begin() + n_train);
        test_idx.assign(order.begin() + n_train, order.end());
        std::sort(train_idx.begin(), train_idx.end());
        std::sort(test_idx.begin(), test_idx.end());
    }
    return take_split(data, train_idx, test_idx);
}

std::pair<Dataset, Dataset> split_and_standardize(const Dataset& data, double ratio,
                                                  std::uint64_t seed) {
    auto [train, test] = stratified_split(data, ratio, seed);

    const int d = train.n_features();
    std::vector<double> mean(static_cast<std::size_t>(d), 0.0), stddev(static_cast<std::size_t>(d), 0.0);
    for (int j = 0; j < d; ++j) {
        double m = 0.0;
        for (int i = 0; i < train.n_samples(); ++i) m += train.features(i, j);
        m /= train.n_samples();
        double var = 0.0;
        for (int i = 0; i < train.n_samples(); ++i) {
            const double diff = train.features(i, j) - m;
            var += diff * diff;
        }
        var /= train.n_samples();
        mean[static_cast<std::size_t>(j)] = m;
        stddev[static_cast<std::size_t>(j)] = var > 1e-24 ? std::sqrt(var) : 1.0;
    }
    auto apply = [&](Dataset& ds) {
        for (int i = 0; i < ds.n_samples(); ++i)
            for (int j = 0; j < d; ++j)
                ds.features(i, j) = (ds.features(i, j) - mean[static_cast<std::size_t>(j)]) /
                                    stddev[static_cast<std::size_t>(j)];
        ds.feature_means = mean;
        ds.feature_stds = stddev;
    };
    apply(train);
    apply(test);
    return {train, test};
}

}  // namespace lgt
