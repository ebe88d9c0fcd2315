// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lgt/matrix.hpp"

namespace lgt {

enum class TaskType { classification, regression };

std::string to_string(TaskType t);
TaskType task_from_string(const std::string& s);

/// A standardized, in-memory dataset. Targets hold class indices (stored as
/// integral doubles) for classification and raw reals for regression.
/// image_height/width are zero for tabular data; image methods key off them.
struct Dataset {
    Matrix features;
    std::vector<double> targets;
    TaskType task = TaskType::classification;
    int n_classes = 0;
    std::vector<double> feature_means;
    std::vector<double> feature_stds;
    int image_height = 0;
    int image_width = 0;

    int n_samples() const { return features.rows; }
    int n_features() const { return features.cols; }
    bool is_image_shaped() const { return image_height > 0 && image_width > 0; }

    int class_of(int i) const { return static_cast<int>(targets[static_cast<std::size_t>(i)]); }
};

/// FNV-1a over the feature/target bytes; recorded in RunRecords so runs of
/// different methods can be checked for identical inputs.
std::uint64_t dataset_hash(const Dataset& d);

std::string hash_hex(std::uint64_t h);

/// FNV-1a over a string (prompt snapshots, transcripts).
std::uint64_t fnv1a(const std::string& s);

}  // namespace lgt
