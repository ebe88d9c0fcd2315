// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>

#include "lgt/config_space.hpp"
#include "lgt/dataset.hpp"
#include "lgt/rng.hpp"

namespace lgt {

/// Applies one augmentation method. duplication/noise/scale work on any
/// layout; rotation/shift/flip/contrast require image-shaped features and
/// reject tabular data. Deterministic per rng. "none" is the identity.
Dataset augment(AugmentMethod method, const Dataset& data,
                const std::map<std::string, double>& params, SeededRng& rng);

/// Runs a configuration's augmentation pipeline in method order.
Dataset apply_feature_pipeline(const FeatureSpec& feature, const Dataset& data, SeededRng& rng);

}  // namespace lgt
