// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include <json.hpp>

#include "lgt/dataset.hpp"

namespace lgt {

/// Where a dataset comes from and how to split it.
struct DatasetManifest {
    std::string name;
    std::string source = "builtin";  // "csv" | "builtin"
    std::string path;                // csv source
    std::string target_column;       // csv: column name, or decimal index as text
    std::string builtin_kind = "blobs_classification";
    nlohmann::json builtin_params;   // optional overrides for SyntheticParams
    TaskType task = TaskType::classification;
    double split_ratio = 0.8;
    std::uint64_t split_seed = 42;

    nlohmann::json to_json() const;
    static DatasetManifest from_json(const nlohmann::json& j);
};

/// Parameters for the built-in generators. Meaning of `noise`:
/// blobs_classification: cluster standard deviation; linear_regression:
/// output noise sigma; overfit_trap: label-flip fraction.
struct SyntheticParams {
    int n_samples = 150;
    int n_features = 8;
    int n_classes = 3;
    double noise = 1.0;
    double separation = 3.0;
};

/// kinds: blobs_classification | linear_regression | overfit_trap.
Dataset make_synthetic(const std::string& kind, const SyntheticParams& params, std::uint64_t seed);

/// Strict numeric CSV loader. Header row required; delimiter ',' or ';'
/// (sniffed). Classification targets are label-encoded in first-appearance
/// order. Non-numeric feature cells raise an error naming row and column.
Dataset load_csv(const DatasetManifest& manifest);

/// Loads from csv or builtin per the manifest (unsplit, unstandardized).
Dataset load_dataset(const DatasetManifest& manifest);

/// Shuffled split (stratified by class for classification; falls back to a
/// plain shuffle with a warning when a class has < 2 samples), then z-score
/// standardization fitted on the train split and applied to both.
std::pair<Dataset, Dataset> split_and_standardize(const Dataset& data, double ratio,
                                                  std::uint64_t seed);

/// Shuffled (stratified) split without standardization; used to carve the
/// fit/validation subsets out of an already standardized train split.
std::pair<Dataset, Dataset> stratified_split(const Dataset& data, double ratio, std::uint64_t seed);

}  // namespace lgt
