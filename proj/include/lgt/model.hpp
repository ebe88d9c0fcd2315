// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "lgt/config_space.hpp"
#include "lgt/matrix.hpp"
#include "lgt/optimizers.hpp"
#include "lgt/rng.hpp"

namespace lgt {

/// Feed-forward network: input -> hidden widths (activation + dropout)
/// -> linear output layer.
struct MlpModel {
    ArchSpec arch;
    int input_dim = 0;
    int output_dim = 0;
    std::vector<Matrix> weights;              // layer l: (in_l x out_l)
    std::vector<std::vector<double>> biases;  // layer l: out_l

    int n_layers() const { return static_cast<int>(weights.size()); }
    std::int64_t parameter_count() const;
};

/// Builds a model with scaled-uniform fan-in initialization
/// (U(-sqrt(6/fan_in), +sqrt(6/fan_in))), zero biases. Deterministic per rng.
MlpModel build_model(const ArchSpec& arch, int input_dim, int output_dim, SeededRng& rng);

/// Per-layer intermediates kept for the backward pass.
struct ForwardCache {
    std::vector<Matrix> inputs;        // input to each layer
    std::vector<Matrix> pre_act;       // pre-activation of hidden layers
    std::vector<Matrix> post_act;      // post-activation (after dropout when training)
    std::vector<Matrix> dropout_mask;  // inverted-dropout masks (empty in eval mode)
};

/// Forward pass. training=true applies inverted dropout using `rng`;
/// eval mode never touches the rng.
Matrix forward(const MlpModel& model, const Matrix& x, bool training, SeededRng* rng,
               ForwardCache* cache);

/// Backward pass from the output-gradient; requires the training cache.
Grads backward(const MlpModel& model, const ForwardCache& cache, const Matrix& grad_out);

}  // namespace lgt
